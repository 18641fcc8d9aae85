"""Entanglement, mutual information and pulse-absorbed energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositive
from .lattice import bogoliubov_unitary, dispersion
from .modes import TwoSiteState, _adaptive, thermal_polarization

CLIP_TOL = 1e-10

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)

PAULI = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}


def pauli2(a, b):
    return np.kron(PAULI[a], PAULI[b])


_BASIS = {
    "II": pauli2("I", "I"),
    "Z1": pauli2("Z", "I") + pauli2("I", "Z"),
    "XX": pauli2("X", "X"),
    "YY": pauli2("Y", "Y"),
    "ZZ": pauli2("Z", "Z"),
    "XY": pauli2("X", "Y") + pauli2("Y", "X"),
}


def assemble_rho(s, tol=1e-8, error=NotPositive):
    """Two-qubit density matrix from its Pauli data, shape (..., 4, 4).

    Raises ``error`` if an eigenvalue falls below ``-tol``.
    """
    mz, cxx, cyy, czz, cxy = (np.asarray(v, dtype=float)[..., None, None] for v in s.as_tuple())
    rho = 0.25 * (
        _BASIS["II"] + mz * _BASIS["Z1"] + cxx * _BASIS["XX"] + cyy * _BASIS["YY"]
        + czz * _BASIS["ZZ"] + cxy * _BASIS["XY"]
    )
    lo = np.min(np.linalg.eigvalsh(rho))
    if lo < -tol:
        raise error(f"assembled two-site state has eigenvalue {lo:.3e}")
    return rho


def partial_transpose(rho):
    """Transpose on the second qubit."""
    r = np.asarray(rho).reshape(rho.shape[:-2] + (2, 2, 2, 2))
    return np.swapaxes(r, -3, -1).reshape(rho.shape)


def negativity_terms(s):
    """The two closed-form quantities whose negative part is the negativity."""
    mz, cxx, cyy, czz, cxy = (np.asarray(v, dtype=float) for v in s.as_tuple())
    n1 = 1.0 + czz - np.sqrt((cxx + cyy) ** 2 + 4.0 * mz**2)
    n2 = 1.0 - czz - np.sqrt((cxx - cyy) ** 2 + 4.0 * cxy**2)
    return n1, n2


def negativity(s):
    """Negativity in [0, 1/2] from the X-state closed form."""
    n1, n2 = negativity_terms(s)
    out = -0.25 * np.minimum(0.0, np.minimum(n1, n2))
    return out if out.ndim else float(out)


def negativity_numeric(s):
    """Sum of |negative eigenvalues| of the partially transposed state."""
    ev = np.linalg.eigvalsh(partial_transpose(assemble_rho(s)))
    out = -np.sum(np.minimum(ev, 0.0), axis=-1)
    return out if out.ndim else float(out)


def log_negativity(s):
    """log2(2N + 1) in [0, 1]."""
    out = np.log2(2.0 * np.asarray(negativity(s)) + 1.0)
    return out if out.ndim else float(out)


def _clip(p):
    if np.any(p < -CLIP_TOL):
        raise NotPositive(f"spectrum has eigenvalue {np.min(p):.3e}")
    return np.clip(p, 0.0, None)


def shannon_bits(p):
    """Shannon entropy (bits) over the last axis, with 0 log 0 = 0."""
    p = _clip(np.asarray(p, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(-1)


def _mutual_information(spec_ab, mz):
    mz = np.asarray(mz, dtype=float)
    spec_a = np.stack([(1 + mz) / 2, (1 - mz) / 2], axis=-1)
    out = 2.0 * shannon_bits(spec_a) - shannon_bits(spec_ab)
    return out if out.ndim else float(out)


def mutual_information(s):
    """I(A:B) = 2 H(rho_A) - H(rho_AB) in bits, from the exact 4x4 spectrum."""
    spec = np.linalg.eigvalsh(assemble_rho(s))
    return _mutual_information(spec, s.mz)


def rotated_spectrum(s):
    """Closed-form spectrum of rho_AB after the local xy rotation removing C^xy."""
    mz, cxx, cyy, czz, cxy = (np.asarray(v, dtype=float) for v in s.as_tuple())
    a = np.abs(cxx + cyy)
    b = np.sqrt((cxx - cyy) ** 2 + 4.0 * cxy**2 + 4.0 * mz**2)
    return 0.25 * np.stack([1 - czz + a, 1 - czz - a, 1 + czz + b, 1 + czz - b], axis=-1)


def mutual_information_closed_form(s):
    return _mutual_information(rotated_spectrum(s), s.mz)


def rotate_xy(s, angle):
    """Apply the same in-plane rotation by ``angle`` to both sites.

    Returns the rotated correlations (cxx, cyy, cxy, cyx) and the TwoSiteState
    built from them; the rotation that diagonalises the xy block is
    ``0.5 * arctan2(2 cxy, cxx - cyy)``.
    """
    c, sn = np.cos(angle), np.sin(angle)
    r = np.array([[c, -sn], [sn, c]])
    t = np.array([[s.cxx, s.cxy], [s.cxy, s.cyy]], dtype=float)
    t2 = r.T @ t @ r
    return TwoSiteState(s.mz, t2[0, 0], t2[1, 1], s.czz, t2[0, 1])


@dataclass(frozen=True)
class EnergyResponse:
    T: float
    tau: float
    delta_e: float


def energy_absorbed(protocol, gamma, T, grid=None, J=1.0):
    """Energy per site absorbed during a square field pulse.

    Each block is handled in the eigenbases of H0 and H1: the Gibbs state is
    diagonal for H0, ``W = U1^+ U0 (+) 1`` carries it to the H1 eigenbasis,
    where evolution is a diagonal phase.
    """
    tau = protocol.pulse_duration
    if tau is None:
        raise ValueError("energy_absorbed needs a pulse protocol")
    if tau == 0:
        return EnergyResponse(T, 0.0, 0.0)

    def evaluate(g):
        return [_energy_on_grid(protocol.h0, protocol.h1, gamma, T, tau, g, J)]

    (de,) = _adaptive(evaluate, grid)
    return EnergyResponse(T, tau, float(np.real(de)))


def _energy_on_grid(h0, h1, gamma, T, tau, grid, J):
    phi = grid.nodes
    c = np.cos(phi)
    lam0 = np.asarray(dispersion(phi, h0, gamma))
    lam1 = np.asarray(dispersion(phi, h1, gamma))
    n = len(phi)

    h0_diag = np.zeros((n, 4, 4), dtype=complex)
    h0_diag[:, 0, 0] = c - lam0
    h0_diag[:, 1, 1] = c + lam0
    h0_diag[:, 2, 2] = h0_diag[:, 3, 3] = c

    m = thermal_polarization(lam0, T)
    rho_diag = np.zeros((n, 4, 4), dtype=complex)
    rho_diag[:, 0, 0] = (1 + m) ** 2 / 4
    rho_diag[:, 1, 1] = (1 - m) ** 2 / 4
    rho_diag[:, 2, 2] = rho_diag[:, 3, 3] = (1 - m * m) / 4

    w = np.zeros((n, 4, 4), dtype=complex)
    w[:, :2, :2] = np.conj(np.swapaxes(bogoliubov_unitary(phi, h1, gamma), -1, -2)) @ bogoliubov_unitary(phi, h0, gamma)
    w[:, 2, 2] = w[:, 3, 3] = 1.0
    wh = np.conj(np.swapaxes(w, -1, -2))

    phase = np.exp(-1j * tau * c)[:, None] * np.stack(
        [np.exp(1j * tau * lam1), np.exp(-1j * tau * lam1), np.ones(n), np.ones(n)], axis=1)
    fwd = phase[:, :, None] * np.eye(4)  # exp(-i H1~ tau)
    bwd = np.conj(fwd)

    evolved = np.einsum("nij,njk,nkl,nlm,nmp->nip", w @ h0_diag @ wh, fwd, w, rho_diag, wh @ bwd)
    per_mode = np.real(np.trace(evolved, axis1=1, axis2=2)) - np.real(
        np.trace(h0_diag @ rho_diag, axis1=1, axis2=2))
    return J * grid.integrate(per_mode) / (2 * np.pi)
