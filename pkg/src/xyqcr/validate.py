"""Oracle cross-checks shared by the ``validate`` command and the test-suite."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import ed
from .lattice import ModelParams, QuenchProtocol, antiperiodic_grid, dispersion, make_grid
from .modes import QuenchTrajectory, TwoSiteState, two_site_state
from .observables import (
    energy_absorbed,
    mutual_information,
    mutual_information_closed_form,
    negativity,
    negativity_numeric,
)


@dataclass
class Check:
    name: str
    tolerance: float
    residual: float
    passed: bool
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _fields(s):
    return np.array(s.as_tuple(), dtype=float)


def sample_dynamics_states(n, seed=0, nodes=512):
    """``n`` TwoSiteStates from random quenches, temperatures and times."""
    rng = np.random.default_rng(seed)
    grid = make_grid(nodes)
    out = []
    for _ in range(n):
        h0, h1 = rng.uniform(0.0, 2.0, size=2)
        gamma = rng.uniform(0.05, 1.0)
        T = 0.0 if rng.random() < 0.3 else rng.uniform(0.0, 1.0)
        t = rng.uniform(0.0, 10.0)
        out.append(QuenchTrajectory(h0, h1, gamma, T, grid).fields([t])[0])
    return [TwoSiteState(*(float(v) for v in s.as_tuple())) for s in out]


def sector_exact_checks(N=12, h0=0.2, h1=1.0, gamma=0.8, times=(0.5, 1.0, 2.0), tol=1e-10):
    """T = 0 dynamics on the antiperiodic momentum grid against dense ED."""
    sys0 = ed.build(N, ModelParams(gamma, h0))
    sys1 = ed.build(N, ModelParams(gamma, h1))
    grid = antiperiodic_grid(N)
    checks = []

    e_gs, _ = sys0.ground_state()
    free = -np.sum(dispersion(grid.nodes, h0, gamma)) / N
    checks.append(_check(f"ground energy per site N={N}", tol, abs(e_gs / N - free)))

    for t in times:
        ref = _fields(ed.evolve_observables(sys0, sys1, 0.0, t))
        blocks = _fields(two_site_state(QuenchProtocol(h0, h1), gamma, 0.0, t, grid))
        fast = _fields(QuenchTrajectory(h0, h1, gamma, 0.0, grid).fields([t])[0])
        checks.append(_check(f"two-site fields t={t} (block matrices)", tol, np.max(np.abs(blocks - ref))))
        checks.append(_check(f"two-site fields t={t} (trajectory)", tol, np.max(np.abs(fast - ref))))

        e_ref = ed.pulse_energy(sys0, sys1, 0.0, t)
        e_blocks = energy_absorbed(QuenchProtocol(h0, h1, t), gamma, 0.0, grid).delta_e
        e_fast = QuenchTrajectory(h0, h1, gamma, 0.0, grid).energy([t])[0]
        checks.append(_check(f"pulse energy tau={t} (block matrices)", tol, abs(e_blocks - e_ref)))
        checks.append(_check(f"pulse energy tau={t} (trajectory)", tol, abs(e_fast - e_ref)))

    s_eq, _ = ed.thermal_observables(sys0, 0.0)
    checks.append(_check("equilibrium C^xy vanishes", 1e-12, abs(s_eq.cxy)))
    return checks


def finite_temperature_gaps(sizes=(8, 10, 12), h=0.5, gamma=0.8, T=0.5):
    """max |field(thermodynamic limit) - field(ED, N)| for each N."""
    ref = _fields(two_site_state(QuenchProtocol(h, h), gamma, T, 0.0))
    gaps = []
    for N in sizes:
        s, _ = ed.thermal_observables(ed.build(N, ModelParams(gamma, h)), T)
        gaps.append(float(np.max(np.abs(_fields(s) - ref))))
    return gaps


def finite_temperature_check(sizes=(8, 10, 12), tol=1e-2, **kw):
    gaps = finite_temperature_gaps(sizes, **kw)
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    return Check(f"finite-T convergence N={list(sizes)}", tol, gaps[-1], decreasing and gaps[-1] < tol,
                 detail="gaps=" + ",".join(f"{g:.6e}" for g in gaps))


def entanglement_checks(n=200, seed=0):
    states = sample_dynamics_states(n, seed)
    neg = max(abs(negativity(s) - negativity_numeric(s)) for s in states)
    mi = max(abs(mutual_information(s) - mutual_information_closed_form(s)) for s in states)
    return [
        _check(f"negativity closed form vs partial transpose ({n} states)", 1e-10, neg),
        _check(f"mutual information closed form vs eigensolve ({n} states)", 1e-9, mi),
    ]


def _check(name, tol, residual):
    residual = float(residual)
    return Check(name, tol, residual, bool(residual <= tol))


def run_all(N=12, seed=0, finite_sizes=(8, 10, 12), finite_tol=1e-2):
    checks = sector_exact_checks(N)
    checks.append(finite_temperature_check(finite_sizes, finite_tol))
    checks.extend(entanglement_checks(200, seed))
    return checks
