"""Brute-force exact diagonalisation of small periodic XY rings.

Deliberately naive: the Hamiltonian is summed from Pauli tensor products and
diagonalised densely. Its only role is to check the momentum-space code.

Zero temperature means the ground state of the even fermion-parity sector
(``prod_j sigma^z_j = (-1)^N``). Jordan-Wigner fermions in that sector obey
antiperiodic boundary conditions, so it is reproduced exactly by the
momentum blocks on :func:`xyqcr.lattice.antiperiodic_grid`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import InvalidState, TooLarge
from .lattice import ModelParams
from .modes import TwoSiteState, _check_temperature
from .observables import pauli2

MAX_SITES = 12

_PAULI_SPARSE = {
    "X": sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex)),
    "Y": sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex)),
    "Z": sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex)),
}


def site_operator(n_sites, ops):
    """Tensor product with ``ops[j]`` (a Pauli label) on site j and identity elsewhere."""
    out = sp.identity(1, dtype=complex, format="csr")
    for j in range(n_sites):
        factor = _PAULI_SPARSE[ops[j]] if j in ops else sp.identity(2, dtype=complex, format="csr")
        out = sp.kron(out, factor, format="csr")
    return out


def spin_hamiltonian(n_sites, params):
    """Dense H = 1/2 sum_j [J((1+g)/2 XX + (1-g)/2 YY) + h Z] with site N+1 = 1."""
    J, g, h = params.J, params.gamma, params.h
    H = sp.csr_matrix((2**n_sites, 2**n_sites), dtype=complex)
    for j in range(n_sites):
        k = (j + 1) % n_sites
        H = H + 0.5 * J * (1 + g) / 2 * site_operator(n_sites, {j: "X"}) @ site_operator(n_sites, {k: "X"})
        H = H + 0.5 * J * (1 - g) / 2 * site_operator(n_sites, {j: "Y"}) @ site_operator(n_sites, {k: "Y"})
        H = H + 0.5 * J * h * site_operator(n_sites, {j: "Z"})
    return H.toarray()


def z_parity(n_sites):
    """Diagonal of prod_j sigma^z_j in the computational basis."""
    bits = np.arange(2**n_sites)
    ones = np.array([bin(b).count("1") for b in bits])
    return np.where(ones % 2 == 0, 1, -1)


@dataclass(eq=False)
class DenseSpinSystem:
    N: int
    params: ModelParams
    hamiltonian: np.ndarray = field(repr=False)

    @cached_property
    def eigen(self):
        """(energies, vectors, parity) sorted by energy, diagonalised sector by sector."""
        parity = z_parity(self.N)
        H = self.hamiltonian
        if np.max(np.abs(H[parity == 1][:, parity == -1])) > 0:
            raise InvalidState("Hamiltonian mixes z-parity sectors")
        dim = H.shape[0]
        energies, vectors, labels = [], [], []
        for sector in (1, -1):
            idx = np.flatnonzero(parity == sector)
            block = H[np.ix_(idx, idx)]
            if np.allclose(block.imag, 0):
                block = block.real
            e, v = np.linalg.eigh(block)
            full = np.zeros((dim, len(idx)), dtype=v.dtype)
            full[idx] = v
            energies.append(e)
            vectors.append(full)
            labels.append(np.full(len(idx), sector))
        e = np.concatenate(energies)
        order = np.argsort(e, kind="stable")
        return e[order], np.concatenate(vectors, axis=1)[:, order], np.concatenate(labels)[order]

    @property
    def even_sector(self):
        return (-1) ** self.N

    def ground_state(self):
        e, v, parity = self.eigen
        k = np.flatnonzero(parity == self.even_sector)[0]
        return e[k], v[:, k]


def build(N, params):
    if not 2 <= N <= MAX_SITES:
        raise TooLarge(f"dense oracle supports 2 <= N <= {MAX_SITES}, got {N}")
    return DenseSpinSystem(N, params, spin_hamiltonian(N, params))


def translation_operator(N):
    """Permutation matrix shifting every site j -> j+1 (mod N)."""
    dim = 2**N
    src = np.arange(dim)
    bits = (src[:, None] >> np.arange(N - 1, -1, -1)) & 1  # bits[:, j] is site j
    shifted = np.roll(bits, 1, axis=1)
    dst = shifted @ (1 << np.arange(N - 1, -1, -1))
    return sp.csr_matrix((np.ones(dim), (dst, src)), shape=(dim, dim))


def _weights(sys, T):
    _check_temperature(T)
    e, v, parity = sys.eigen
    if T == 0:
        _, psi = sys.ground_state()
        return psi[:, None], np.ones(1)
    p = np.exp(-(e - e[0]) / T)
    p /= p.sum()
    keep = p > 1e-18
    return v[:, keep], p[keep]


def bond_density_matrix(amplitudes, N, j=0):
    """Reduced state of sites (j, j+1 mod N) for the ensemble sum_k |a_k><a_k|."""
    k = (j + 1) % N
    a = amplitudes.reshape((2,) * N + (-1,))
    a = np.moveaxis(a, (j, k), (0, 1)).reshape(4, -1)
    return a @ np.conj(a.T)


_LABELS = {"mz": ("Z", "I"), "zm": ("I", "Z"), "cxx": ("X", "X"), "cyy": ("Y", "Y"),
           "czz": ("Z", "Z"), "cxy": ("X", "Y"), "cyx": ("Y", "X")}


def state_from_rho(rho, atol=1e-10):
    vals = {name: float(np.real(np.trace(rho @ pauli2(*ops)))) for name, ops in _LABELS.items()}
    if abs(vals["mz"] - vals["zm"]) > atol or abs(vals["cxy"] - vals["cyx"]) > atol:
        raise InvalidState(f"two-site state not symmetric: {vals}")
    return TwoSiteState(vals["mz"], vals["cxx"], vals["cyy"], vals["czz"], vals["cxy"])


def _observe(amplitudes, N, check_bonds):
    rho = bond_density_matrix(amplitudes, N, 0)
    if check_bonds:
        for j in range(1, N):
            other = bond_density_matrix(amplitudes, N, j)
            if np.max(np.abs(other - rho)) > 1e-10:
                raise InvalidState(f"bond {j} differs from bond 0 by {np.max(np.abs(other - rho)):.3e}")
    return state_from_rho(rho)


def thermal_observables(sys, T, check_bonds=True):
    """Return (TwoSiteState on sites 1,2; energy per site) of the Gibbs state."""
    v, p = _weights(sys, T)
    amps = v * np.sqrt(p)
    energy = float(np.real(np.sum(np.conj(amps) * (sys.hamiltonian @ amps)))) / sys.N
    return _observe(amps, sys.N, check_bonds), energy


def _evolved_amplitudes(sys0, sys1, T, t):
    if sys0.N != sys1.N:
        raise ValueError("systems must have the same size")
    v0, p0 = _weights(sys0, T)
    e1, v1, _ = sys1.eigen
    coeff = v1.T.conj() @ (v0 * np.sqrt(p0))
    return v1 @ (np.exp(-1j * e1 * t)[:, None] * coeff)


def evolve_observables(sys0, sys1, T, t, check_bonds=True):
    """TwoSiteState after evolving the H0 Gibbs state under H1 for time t."""
    if t == 0:
        return thermal_observables(sys0, T, check_bonds)[0]
    return _observe(_evolved_amplitudes(sys0, sys1, T, t), sys0.N, check_bonds)


def pulse_energy(sys0, sys1, T, tau):
    """Per-site energy gained after a pulse of duration tau, measured with H0."""
    if tau == 0:
        return 0.0
    v0, p0 = _weights(sys0, T)
    before = np.sum(np.conj(v0 * np.sqrt(p0)) * (sys0.hamiltonian @ (v0 * np.sqrt(p0))))
    amps = _evolved_amplitudes(sys0, sys1, T, tau)
    after = np.sum(np.conj(amps) * (sys0.hamiltonian @ amps))
    diff = (after - before) / sys0.N
    if abs(diff.imag) > 1e-12:
        raise InvalidState(f"absorbed energy has imaginary part {diff.imag:.3e}")
    return float(diff.real)
