"""Maximal dynamical responses and the quantum-critical-region boundary.

For a quantity Q the detector needs ``max_t |Q(T, t) - Q(T, 0)|`` (for the
energy, ``max_tau |dE(T, tau)|``), its ratio to the T = 0 value, and the
temperature T* where that ratio first departs from 1 by ``eta``.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize, stats

from .errors import FlatResponse, ZeroDenominator
from .lattice import make_grid
from .modes import DEFAULT_NODES, QuenchTrajectory, _check_temperature
from .observables import log_negativity, mutual_information

FLAT_TOL = 1e-14
SCAN_POINTS = 32
TSTAR_XTOL = 1e-7


class Quantity(enum.Enum):
    ABSORBED_ENERGY = "E"
    LOG_NEGATIVITY = "L"
    MUTUAL_INFORMATION = "I"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for q in cls:
            if value in (q.value, q.name, q.name.lower()):
                return q
        raise ValueError(f"unknown quantity {value!r}; expected one of E, L, I")


@dataclass(frozen=True)
class TimeSearchConfig:
    t_max: float = 20.0
    dt: float = 0.005
    refine_tol: float = 1e-8

    def __post_init__(self):
        if not 0 < self.dt < self.t_max:
            raise ValueError(f"need 0 < dt < t_max, got dt={self.dt}, t_max={self.t_max}")

    def times(self):
        n = int(round(self.t_max / self.dt))
        return np.linspace(0.0, n * self.dt, n + 1)


@lru_cache(maxsize=4)
def _time_basis(h1, gamma, nodes, cfg):
    grid = make_grid(nodes)
    probe = QuenchTrajectory(h1, h1, gamma, 0.0, grid)
    return grid, probe.basis(cfg.times())


def _grid_key(grid):
    if grid is None:
        return DEFAULT_NODES
    if isinstance(grid, int):
        return grid
    return len(grid)


class QuenchResponse:
    """Response curves of one quench (h0 -> h1 at fixed gamma) across temperatures.

    Holds the shared cos/sin time basis and caches the T = 0 maxima, so that
    the temperature scans of the detector reuse them.
    """

    def __init__(self, h0, h1, gamma, cfg=None, grid=None):
        self.h0, self.h1, self.gamma = h0, h1, gamma
        self.cfg = cfg or TimeSearchConfig()
        if grid is None or isinstance(grid, int):
            self.grid, self._basis = _time_basis(h1, gamma, _grid_key(grid), self.cfg)
        else:
            self.grid = grid
            self._basis = QuenchTrajectory(h1, h1, gamma, 0.0, grid).basis(self.cfg.times())
        self.times = self.cfg.times()
        self._zero = {}

    def trajectory(self, T):
        return QuenchTrajectory(self.h0, self.h1, self.gamma, T, self.grid)

    @staticmethod
    def _deltas(q, traj, t=None, basis=None):
        if q is Quantity.ABSORBED_ENERGY:
            return np.abs(traj.energy(t, basis))
        s = traj.fields(t, basis)
        s0 = traj.fields([0.0])
        f = log_negativity if q is Quantity.LOG_NEGATIVITY else mutual_information
        return np.abs(np.asarray(f(s)) - np.asarray(f(s0))[0])

    def curve(self, q, T):
        """|dQ| on the coarse time grid."""
        q = Quantity.parse(q)
        return self._deltas(q, self.trajectory(T), basis=self._basis)

    def max_response(self, q, T):
        q = Quantity.parse(q)
        _check_temperature(T)
        traj = self.trajectory(T)
        values = self._deltas(q, traj, basis=self._basis)
        k = int(np.argmax(values))
        best = float(values[k])
        if best < FLAT_TOL:
            raise FlatResponse(
                f"no response for {q.value} at h0={self.h0}, h1={self.h1}, T={T}", best)
        t = self.times
        if k == len(t) - 1:
            warnings.warn(
                f"{q.value} maximum sits on the scan horizon t_max={self.cfg.t_max}; widen it",
                RuntimeWarning, stacklevel=2)
            return best

        def neg(x):
            return -float(self._deltas(q, traj, [x])[0])

        # golden-section search (with parabolic steps) inside the coarse bracket
        lo, hi = t[max(k - 1, 0)], t[k + 1]
        res = optimize.minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                       options={"xatol": self.cfg.refine_tol})
        return max(best, -float(res.fun))

    def zero_temperature(self, q):
        q = Quantity.parse(q)
        if q not in self._zero:
            self._zero[q] = self.max_response(q, 0.0)
        return self._zero[q]

    def scaled_response(self, q, T):
        try:
            denom = self.zero_temperature(q)
        except FlatResponse as exc:
            raise ZeroDenominator(str(exc)) from exc
        if T == 0:
            return 1.0
        try:
            return self.max_response(q, T) / denom
        except FlatResponse:
            return 0.0

    def deviation(self, q, T):
        """|dQ_max(T) - dQ_max(0)| / dQ_max(0)."""
        return abs(self.scaled_response(q, T) - 1.0)


def max_response(q, h0, h1, gamma, T, cfg=None, grid=None):
    """max over t of |Q(T, t) - Q(T, 0)| (pulse duration for the energy)."""
    return QuenchResponse(h0, h1, gamma, cfg, grid).max_response(q, T)


def scaled_response(q, h0, h1, gamma, T, cfg=None, grid=None):
    return QuenchResponse(h0, h1, gamma, cfg, grid).scaled_response(q, T)


@dataclass(frozen=True)
class TStar:
    """Edge of the constancy window.

    ``flag`` is None for a clean crossing, ``"saturated"`` when the deviation
    never reaches eta inside the window (``value`` is then the window edge),
    ``"non-monotone"`` when the scan recrosses eta (``interval`` brackets the
    ambiguous region), or ``"zero-denominator"``.
    """

    value: float
    flag: str | None = None
    interval: tuple[float, float] | None = None

    @property
    def saturated(self):
        return self.flag == "saturated"


def detect_tstar(q, h0, h1, gamma, eta=1e-6, cfg=None, grid=None, t_hi=0.1, response=None):
    """First temperature in (0, t_hi] at which the fractional deviation reaches eta."""
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    q = Quantity.parse(q)
    resp = response or QuenchResponse(h0, h1, gamma, cfg, grid)
    try:
        resp.zero_temperature(q)
    except FlatResponse:
        return TStar(math.nan, "zero-denominator")

    temps = np.linspace(t_hi / SCAN_POINTS, t_hi, SCAN_POINTS)
    dev = np.array([resp.deviation(q, T) for T in temps])
    above = dev > eta
    if not above.any():
        return TStar(float(t_hi), "saturated")
    k = int(np.argmax(above))
    lo = 0.0 if k == 0 else float(temps[k - 1])
    # deviation(0) = 0 < eta, so [lo, temps[k]] always brackets the crossing
    root = optimize.bisect(lambda T: resp.deviation(q, T) - eta, lo, float(temps[k]), xtol=TSTAR_XTOL)
    if not above[k:].all():
        last = k + int(np.flatnonzero(~above[k:])[-1])
        hi = float(temps[min(last + 1, SCAN_POINTS - 1)])
        return TStar(float(root), "non-monotone", (float(root), hi))
    return TStar(float(root))


@dataclass(frozen=True)
class QcrBoundary:
    """T*(h0) for one quantity plus the straight-line fits T* = C |h0 - 1| + b.

    ``slope``/``intercept``/``r_squared`` describe the pooled fit; ``flanks``
    holds the separate fits below and above the critical field.
    """

    quantity: Quantity
    h0: tuple[float, ...]
    gamma: tuple[float, ...]
    tstar: tuple[TStar, ...]
    eta: float
    t_hi: float
    slope: float = math.nan
    intercept: float = math.nan
    r_squared: float = math.nan
    window: tuple[float, float] | None = None
    fit_points: int = 0
    flanks: dict | None = None

    def values(self):
        return np.array([t.value for t in self.tstar])

    def min_flank_r_squared(self):
        return min(f["r_squared"] for f in self.flanks.values())


def multicritical_gamma(h0):
    """Anisotropy tied to the initial field, |1 - |h0||.

    The sign is dropped: gamma -> -gamma is a global rotation about z, which
    leaves energies, negativity and mutual information unchanged.
    """
    return abs(1.0 - abs(h0))


def boundary_point(h0, h1, gamma, quantities, eta=1e-6, cfg=None, nodes=DEFAULT_NODES, t_hi=0.1):
    """T* for several quantities at one h0, sharing the time basis and T = 0 maxima."""
    resp = QuenchResponse(h0, h1, gamma, cfg, nodes)
    return [detect_tstar(q, h0, h1, gamma, eta, t_hi=t_hi, response=resp) for q in quantities]


def _boundary_job(args):
    return boundary_point(*args)


def _line(x, y):
    if len(x) < 3:
        return dict(slope=math.nan, intercept=math.nan, r_squared=math.nan, fit_points=int(len(x)))
    fit = stats.linregress(x, y)
    return dict(slope=float(fit.slope), intercept=float(fit.intercept),
                r_squared=float(fit.rvalue**2), fit_points=int(len(x)))


def fit_boundary(h0, tstar, critical=1.0):
    """Least-squares lines T* = C |h0 - h_c| + b over clean (unsaturated, unflagged) points.

    Returns the pooled fit over both sides of ``critical`` plus one fit per
    flank under ``flanks`` (keys ``"below"`` and ``"above"``); the two edges of
    the cone need not share a slope.
    """
    h0 = np.asarray(h0, dtype=float)
    vals = np.array([t.value for t in tstar])
    ok = np.array([t.flag is None for t in tstar]) & np.isfinite(vals)
    x = np.abs(h0 - critical)
    out = _line(x[ok], vals[ok])
    out["window"] = (float(h0[ok].min()), float(h0[ok].max())) if ok.sum() >= 3 else None
    flanks = {}
    for name, side in (("below", h0 < critical), ("above", h0 > critical)):
        k = ok & side
        flanks[name] = _line(x[k], vals[k])
        flanks[name]["window"] = (float(h0[k].min()), float(h0[k].max())) if k.any() else None
    out["flanks"] = flanks
    return out


def map_qcr_all(quantities, h0_grid, gamma=0.8, multicritical=False, h1=1.0, eta=1e-6,
                cfg=None, nodes=DEFAULT_NODES, t_hi=None, workers=1):
    """T* over ``h0_grid`` for each quantity; with ``multicritical`` the anisotropy follows h0.

    Per-point failures become flags on the returned :class:`TStar` values;
    the sweep never aborts. Jobs run in parallel and are merged in grid order.
    """
    quantities = [Quantity.parse(q) for q in quantities]
    cfg = cfg or TimeSearchConfig()
    if t_hi is None:
        t_hi = 0.01 if multicritical else 0.1
    h0_grid = [float(h) for h in h0_grid]
    gammas = [multicritical_gamma(h) if multicritical else gamma for h in h0_grid]
    jobs = [(h, h1, g, quantities, eta, cfg, nodes, t_hi) for h, g in zip(h0_grid, gammas)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_boundary_job, jobs))
    else:
        rows = [_boundary_job(j) for j in jobs]
    out = {}
    for i, q in enumerate(quantities):
        results = [row[i] for row in rows]
        fit = fit_boundary(h0_grid, results)
        out[q] = QcrBoundary(q, tuple(h0_grid), tuple(gammas), tuple(results), eta, t_hi, **fit)
    return out


def map_qcr(q, h0_grid, gamma=0.8, multicritical=False, h1=1.0, eta=1e-6, cfg=None,
            nodes=DEFAULT_NODES, t_hi=None, workers=1):
    """QCR boundary of a single quantity; see :func:`map_qcr_all`."""
    q = Quantity.parse(q)
    return map_qcr_all([q], h0_grid, gamma, multicritical, h1, eta, cfg, nodes, t_hi, workers)[q]


def boundary_overlap(a, b):
    """Fraction of shared h0 points where two boundaries agree within a factor of two.

    Both boundaries are clipped at the smaller window edge first, so an Ising
    map (edge 0.1) can be compared with a multicritical one (edge 0.01).
    """
    cap = min(a.t_hi, b.t_hi)
    va, vb = np.minimum(a.values(), cap), np.minimum(b.values(), cap)
    ok = np.isfinite(va) & np.isfinite(vb) & (va > 0) & (vb > 0)
    if not ok.any():
        return math.nan
    ratio = va[ok] / vb[ok]
    return float(np.mean((ratio <= 2.0) & (ratio >= 0.5)))
