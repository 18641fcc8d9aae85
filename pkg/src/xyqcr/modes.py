"""Per-mode thermal states, their quench evolution, and the two-site state.

Conventions (pinned against exact diagonalisation, see ``tests/test_ed_crosscheck.py``):

* ``c_j = N^{-1/2} sum_p exp(-i p j) c_p`` reproduces the block matrix of
  :func:`xyqcr.lattice.block_hamiltonian`, including the ``+i g sin phi``
  entry above the diagonal.
* ``sigma^z = 2 n - 1``; ``sigma^x = string * A``, ``sigma^y = -i string * B``
  with Majoranas ``A = c^+ + c`` and ``B = c^+ - c``.

Momentum sums over pairs become ``(1/N) sum_pairs -> (1/2pi) int_0^pi dphi``.

Two evaluation routes exist. The matrix route (:class:`ModeState`,
:func:`evolve_block`, :func:`contractions`) follows the block density matrices
literally. :class:`QuenchTrajectory` works with the Bloch vector of the even
block, which precesses rigidly about the post-quench axis; every integrated
quantity is then a constant plus cos/sin sums, evaluated for many times at
once. Tests hold the two routes to each other and to the ED oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import InvalidState, NegativeTemperature, NumericalAbort
from .lattice import (
    ModelParams,
    QuenchProtocol,
    bogoliubov_unitary,
    dispersion,
    make_grid,
)

DEFAULT_NODES = 2048
MAX_NODES = 16384
CONVERGENCE_TOL = 1e-10


def _check_temperature(T):
    if T < 0:
        raise NegativeTemperature(f"T must be >= 0, got {T}")


def thermal_polarization(lam, T):
    """tanh(lam / 2T): length of the even-block Bloch vector; exactly 1 at T = 0."""
    _check_temperature(T)
    lam = np.asarray(lam, dtype=float)
    if T == 0:
        return np.where(lam > 0, 1.0, 0.0)
    return np.tanh(lam / (2.0 * T))


@dataclass(frozen=True, eq=False)
class ModeState:
    """Density matrix of one momentum block (vectorised over ``phi``).

    ``even_block`` is in the basis {|0>, c_p^+ c_{-p}^+ |0>}; ``odd_pops``
    holds the populations of c_p^+|0> and c_{-p}^+|0>. The odd sector is
    diagonal and stays so: H is proportional to the identity there.
    """

    phi: np.ndarray
    even_block: np.ndarray
    odd_pops: np.ndarray

    def trace(self):
        return np.real(np.trace(self.even_block, axis1=-2, axis2=-1)) + self.odd_pops.sum(-1)

    def purity(self):
        rho = self.even_block
        return np.real(np.einsum("...ij,...ji->...", rho, rho)) + (self.odd_pops**2).sum(-1)


def thermal_block_state(phi, params, T):
    """Gibbs state of the pair block at temperature ``T`` (``T = 0`` is the ground state).

    All four levels enter the partition function; Boltzmann factors are taken
    relative to the block ground energy ``cos phi - Lambda``.
    """
    _check_temperature(T)
    phi = np.asarray(phi, dtype=float)
    lam = np.asarray(dispersion(phi, params.h, params.gamma))
    if T == 0:
        p_low = np.ones_like(lam)
        p_high = np.zeros_like(lam)
        p_odd = np.zeros_like(lam)
    else:
        b = np.exp(-lam / T)
        z = (1.0 + b) ** 2
        p_low, p_high, p_odd = 1.0 / z, b * b / z, b / z
    u = bogoliubov_unitary(phi, params.h, params.gamma)
    diag = np.zeros(phi.shape + (2, 2), dtype=complex)
    diag[..., 0, 0] = p_low
    diag[..., 1, 1] = p_high
    even = u @ diag @ np.conj(np.swapaxes(u, -1, -2))
    odd = np.stack([p_odd, p_odd], axis=-1)
    return ModeState(phi, even, odd)


def _evolution_operator(phi, params, t):
    # global phase exp(-i cos(phi) t) dropped: it cancels in the conjugation
    lam = np.asarray(dispersion(phi, params.h, params.gamma))
    u = bogoliubov_unitary(phi, params.h, params.gamma)
    phases = np.zeros(np.shape(phi) + (2, 2), dtype=complex)
    phases[..., 0, 0] = np.exp(1j * lam * t)
    phases[..., 1, 1] = np.exp(-1j * lam * t)
    return u @ phases @ np.conj(np.swapaxes(u, -1, -2))


def evolve_block(state, params, t):
    """Conjugate the even block by exp(-i H_even t) of the Hamiltonian ``params``."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return state
    v = _evolution_operator(state.phi, params, t)
    even = v @ state.even_block @ np.conj(np.swapaxes(v, -1, -2))
    return ModeState(state.phi, even, state.odd_pops)


def mode_expectations(state):
    """Return (<c_p^+ c_p>, <c_{-p} c_p>) read off the block state."""
    n_p = np.real(state.even_block[..., 1, 1]) + state.odd_pops[..., 0]
    kappa_p = state.even_block[..., 1, 0]
    return n_p, kappa_p


@dataclass(frozen=True)
class Contractions:
    """Nearest-neighbour Wick data: n0 = <c_j^+ c_j>, g1 = <c_j^+ c_{j+1}>, k1 = <c_j c_{j+1}>."""

    n0: float
    g1: complex
    k1: complex


@dataclass(frozen=True)
class TwoSiteState:
    """Pauli data of the nearest-neighbour reduced state.

    Fields may be floats or equally shaped arrays (one entry per time).
    """

    mz: float
    cxx: float
    cyy: float
    czz: float
    cxy: float

    def as_tuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))

    def __getitem__(self, idx):
        return TwoSiteState(*(np.asarray(v)[idx] for v in self.as_tuple()))


def state_at(protocol, gamma, T, t, phi, J=1.0):
    """Block states on ``phi`` after time ``t`` of the protocol.

    A sudden quench evolves under h1 throughout; a pulse evolves under h1
    up to ``pulse_duration`` and under h0 afterwards.
    """
    p0 = ModelParams(gamma, protocol.h0, J)
    p1 = ModelParams(gamma, protocol.h1, J)
    state = thermal_block_state(phi, p0, T)
    tau = protocol.pulse_duration
    if tau is None or t <= tau:
        return evolve_block(state, p1, t)
    return evolve_block(evolve_block(state, p1, tau), p0, t - tau)


def _integrate_contractions(state, grid):
    n_p, kappa = mode_expectations(state)
    n_m = np.real(state.even_block[..., 1, 1]) + state.odd_pops[..., 1]
    phi = grid.nodes
    norm = 1.0 / (2 * np.pi)
    n0 = norm * grid.integrate(n_p + n_m)
    g1 = norm * grid.integrate(np.exp(-1j * phi) * n_p + np.exp(1j * phi) * n_m)
    k1 = norm * grid.integrate(-2j * np.sin(phi) * kappa)
    out = Contractions(float(n0), complex(g1), complex(k1))
    if not np.all(np.isfinite([out.n0, out.g1, out.k1])):
        raise NumericalAbort(f"non-finite contractions {out}")
    return out


def _adaptive(evaluate, grid):
    """Run ``evaluate(grid)``; with ``grid=None``, double nodes until converged."""
    if grid is not None:
        return evaluate(grid)
    n = DEFAULT_NODES
    prev = np.asarray(evaluate(make_grid(n)), dtype=complex)
    while n < MAX_NODES:
        n *= 2
        cur = np.asarray(evaluate(make_grid(n)), dtype=complex)
        if np.max(np.abs(cur - prev)) < CONVERGENCE_TOL:
            return cur
        prev = cur
    return prev


def contractions(protocol, gamma, T, t, grid=None, J=1.0):
    """Wick contractions of the time-evolved state, integrated over momenta."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")

    def evaluate(g):
        c = _integrate_contractions(state_at(protocol, gamma, T, t, g.nodes, J), g)
        return [c.n0, c.g1, c.k1]

    n0, g1, k1 = _adaptive(evaluate, grid)
    return Contractions(float(np.real(n0)), complex(g1), complex(k1))


def fields_from_contractions(c, atol=1e-10):
    """Wick-reduce Pauli correlators of neighbouring sites to fermion contractions."""
    mz = 2.0 * c.n0 - 1.0
    g1 = np.asarray(c.g1)
    k1 = np.asarray(c.k1)
    cxx = 2.0 * np.real(g1 - k1)
    cyy = 2.0 * np.real(g1 + k1)
    cxy = 2.0 * (np.imag(k1) - np.imag(g1))
    cyx = 2.0 * (np.imag(k1) + np.imag(g1))
    if np.any(np.abs(cxy - cyx) > atol):
        raise InvalidState(f"C^xy and C^yx differ by {np.max(np.abs(cxy - cyx)):.3e}")
    czz = mz * mz + cxy * cyx - cxx * cyy
    return TwoSiteState(mz, cxx, cyy, czz, cxy)


def two_site_state(protocol, gamma, T, t, grid=None, J=1.0):
    """Nearest-neighbour TwoSiteState after time ``t``; validated for positivity."""
    from .observables import assemble_rho

    s = fields_from_contractions(contractions(protocol, gamma, T, t, grid, J))
    s = TwoSiteState(*(float(v) for v in s.as_tuple()))
    assemble_rho(s, tol=1e-8, error=InvalidState)
    return s


class QuenchTrajectory:
    """Closed-form time dependence for one (h0, h1, gamma, T) on a fixed grid.

    The even-block Bloch vector starts at ``m n0`` (``m = tanh(L0/2T)``) and
    precesses about ``n1`` at angular speed ``-2 L1``. Outputs are linear in
    cos(2 L1 t) and sin(2 L1 t), so many times are one matrix product.
    """

    def __init__(self, h0, h1, gamma, T, grid, J=1.0):
        _check_temperature(T)
        self.h0, self.h1, self.gamma, self.T, self.J = h0, h1, gamma, T, J
        self.grid = grid
        phi = grid.nodes
        c, s = np.cos(phi), np.sin(phi)
        lam0 = np.asarray(dispersion(phi, h0, gamma))
        lam1 = np.asarray(dispersion(phi, h1, gamma))
        self.freq = 2.0 * lam1

        def axis(lam, h):
            safe = np.where(lam > 0, lam, 1.0)
            ny = np.where(lam > 0, gamma * s / safe, 0.0)
            nz = np.where(lam > 0, (h + c) / safe, 1.0)
            return ny, nz

        n0y, n0z = axis(lam0, h0)
        n1y, n1z = axis(lam1, h1)
        m = thermal_polarization(lam0, T)
        dot = n0y * n1y + n0z * n1z
        w = grid.weights / np.pi

        # z(t) = m n1z D + m (n0z - n1z D) cos ;  y(t) likewise ;  x(t) = -m (n1y n0z - n1z n0y) sin
        z_const, z_cos = m * n1z * dot, m * (n0z - n1z * dot)
        y_const, y_cos = m * n1y * dot, m * (n0y - n1y * dot)
        x_sin = -m * (n1y * n0z - n1z * n0y)
        e_amp = 0.5 * J * w * lam0 * m * (1.0 - dot * dot)

        # channel order: mz, cxx, cyy, cxy, energy
        self._const = np.array([
            -w @ z_const,
            -w @ (c * z_const + s * y_const),
            -w @ (c * z_const - s * y_const),
            0.0,
            e_amp.sum(),
        ])
        self._cos_coef = np.stack([
            -w * z_cos,
            -w * (c * z_cos + s * y_cos),
            -w * (c * z_cos - s * y_cos),
            -e_amp,
        ], axis=1)
        self._sin_coef = -w * s * x_sin

    def basis(self, t):
        """(cos, sin) of 2 L1 t for times ``t``; shared by trajectories with equal (h1, gamma, grid)."""
        arg = np.multiply.outer(np.atleast_1d(np.asarray(t, dtype=float)), self.freq)
        return np.cos(arg), np.sin(arg)

    def channels(self, t=None, basis=None):
        """Columns mz, cxx, cyy, cxy, energy at each time."""
        cos, sin = self.basis(t) if basis is None else basis
        out = np.empty((cos.shape[0], 5))
        out[:, [0, 1, 2, 4]] = cos @ self._cos_coef
        out[:, 3] = sin @ self._sin_coef
        out += self._const
        if not np.all(np.isfinite(out)):
            raise NumericalAbort("non-finite values in trajectory")
        return out

    def fields(self, t=None, basis=None):
        ch = self.channels(t, basis)
        mz, cxx, cyy, cxy = ch[:, 0], ch[:, 1], ch[:, 2], ch[:, 3]
        czz = mz * mz + cxy * cxy - cxx * cyy
        return TwoSiteState(mz, cxx, cyy, czz, cxy)

    def energy(self, t=None, basis=None):
        """Energy per site absorbed in a pulse of duration ``t`` (units of J)."""
        return self.channels(t, basis)[:, 4]
