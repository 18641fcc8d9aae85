"""Transverse-field XY chain in the momentum-pair representation.

The spin chain

    H = 1/2 sum_j [ J((1+g)/2 X_j X_{j+1} + (1-g)/2 Y_j Y_{j+1}) + h Z_j ]

maps (Jordan-Wigner, then Fourier) onto independent 4-level blocks, one per
momentum pair (p, -p), written in the basis

    |0>,  c_p^+ c_{-p}^+ |0>,  c_p^+ |0>,  c_{-p}^+ |0>.

Fields and temperatures are stored as ratios h/J and k_B T/J, times in hbar/J.
``J`` only rescales reported energies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBlock

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """One XY Hamiltonian instance (J, gamma, h/J)."""

    gamma: float
    h: float
    J: float = 1.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not np.isfinite(self.h):
            raise ValueError(f"h must be finite, got {self.h}")


@dataclass(frozen=True)
class QuenchProtocol:
    """Field quench h0 -> h1.

    With ``pulse_duration`` set this is the square pulse (h1 held for tau,
    then back to h0); without it, a sudden quench.
    """

    h0: float
    h1: float
    pulse_duration: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.h0) and np.isfinite(self.h1)):
            raise ValueError("h0 and h1 must be finite")
        if self.pulse_duration is not None and self.pulse_duration < 0:
            raise ValueError(f"pulse_duration must be >= 0, got {self.pulse_duration}")


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Quadrature rule for integrals over phi in (0, pi).

    ``weights`` sum to pi, so ``grid.integrate(f) / pi`` is a momentum average.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0 or nodes[-1] >= np.pi:
            raise ValueError("nodes must be strictly increasing inside (0, pi)")
        if abs(weights.sum() - np.pi) > 1e-12:
            raise ValueError(f"weights sum to {weights.sum()!r}, expected pi")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values):
        """Contract the last axis of ``values`` (sampled at ``nodes``) with the weights."""
        return np.asarray(values) @ self.weights


def make_grid(n):
    """Gauss-Legendre rule with ``n`` nodes mapped onto (0, pi)."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    x, w = np.polynomial.legendre.leggauss(int(n))
    nodes = 0.5 * np.pi * (x + 1.0)
    weights = 0.5 * np.pi * w
    # leggauss weights sum to 2 only up to rounding; pin the total exactly
    weights *= np.pi / weights.sum()
    return MomentumGrid(nodes, weights)


def antiperiodic_grid(n_sites):
    """Discrete momenta pi(2k+1)/N of an N-site ring in the even-parity sector.

    Each pair (p, -p) with p in (0, pi) gets weight 2 pi / N, so integrals
    over this grid reproduce the finite-N momentum sums exactly.
    """
    if n_sites < 2 or n_sites % 2:
        raise ValueError(f"need an even number of sites >= 2, got {n_sites}")
    k = np.arange(n_sites // 2)
    nodes = np.pi * (2 * k + 1) / n_sites
    weights = np.full(nodes.shape, 2 * np.pi / n_sites)
    return MomentumGrid(nodes, weights)


def dispersion(phi, h, gamma):
    """Quasiparticle energy sqrt((cos phi + h)^2 + gamma^2 sin^2 phi), in units of J."""
    phi = np.asarray(phi, dtype=float)
    out = np.hypot(np.cos(phi) + h, gamma * np.sin(phi))
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    phi: float
    matrix: np.ndarray

    @property
    def even_block(self):
        return self.matrix[:2, :2]


def even_block_matrix(phi, h, gamma, J=1.0):
    """Upper-left 2x2 block, vectorised over ``phi`` -> shape (..., 2, 2)."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    m = np.empty(phi.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = -h
    m[..., 0, 1] = 1j * gamma * s
    m[..., 1, 0] = -1j * gamma * s
    m[..., 1, 1] = h + 2 * c
    return J * m


def block_hamiltonian(phi, params):
    """Full 4x4 block for the pair (phi, -phi)."""
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = even_block_matrix(phi, params.h, params.gamma, params.J)
    m[2, 2] = m[3, 3] = params.J * np.cos(phi)
    return BlockHamiltonian(float(phi), m)


def bogoliubov_unitary(phi, h, gamma):
    """Rotation whose columns are the even-block eigenvectors (lower energy first).

    ``U^+ H_even U = J diag(cos phi - L, cos phi + L)`` with ``L = dispersion``.
    Vectorised over ``phi``. Assumes ``gamma sin phi >= 0``, which holds on the
    working domain phi in [0, pi], gamma >= 0.
    """
    phi = np.asarray(phi, dtype=float)
    lam = np.asarray(dispersion(phi, h, gamma))
    if np.any(lam < DEGENERACY_TOL):
        raise DegenerateBlock(f"gap closes at phi={phi[lam < DEGENERACY_TOL] if phi.ndim else phi}")
    alpha = h + np.cos(phi)
    # clip guards sqrt against -0.0 from rounding when |alpha| == lam
    plus = np.sqrt(np.clip(lam + alpha, 0.0, None))
    minus = np.sqrt(np.clip(lam - alpha, 0.0, None))
    u = np.empty(phi.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = 1j * plus
    u[..., 0, 1] = 1j * minus
    u[..., 1, 0] = -minus
    u[..., 1, 1] = plus
    return u / np.sqrt(2 * lam)[..., None, None]
