import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xyqcr.errors import DegenerateBlock
from xyqcr.lattice import (
    ModelParams,
    MomentumGrid,
    QuenchProtocol,
    antiperiodic_grid,
    block_hamiltonian,
    bogoliubov_unitary,
    dispersion,
    even_block_matrix,
    make_grid,
)

phis = st.floats(0.01, np.pi - 0.01)
fields = st.floats(-2.0, 2.0)
gammas = st.floats(0.05, 1.0)


def test_dispersion_ising_point():
    # gamma = 1, h = 1: Lambda = 2 |cos(phi/2)|
    phi = np.linspace(0.1, 3.0, 7)
    assert np.allclose(dispersion(phi, 1.0, 1.0), 2 * np.abs(np.cos(phi / 2)), atol=1e-14)


def test_dispersion_scalar_returns_float():
    assert isinstance(dispersion(0.3, 0.5, 0.8), float)


def test_dispersion_closes_at_critical_field():
    assert dispersion(np.pi, 1.0, 0.8) == pytest.approx(0.0, abs=1e-15)


def test_block_layout():
    m = block_hamiltonian(0.7, ModelParams(0.8, 0.5)).matrix
    assert m[0, 0] == -0.5
    assert m[0, 1] == pytest.approx(1j * 0.8 * np.sin(0.7))
    assert m[1, 1] == pytest.approx(0.5 + 2 * np.cos(0.7))
    assert m[2, 2] == m[3, 3] == pytest.approx(np.cos(0.7))
    assert np.all(m[:2, 2:] == 0)


@given(phis, fields, gammas)
def test_even_block_spectrum(phi, h, g):
    ev = np.linalg.eigvalsh(even_block_matrix(phi, h, g))
    lam = dispersion(phi, h, g)
    assert np.allclose(ev, [np.cos(phi) - lam, np.cos(phi) + lam], atol=1e-12)


@given(phis, fields, gammas)
def test_bogoliubov_diagonalises(phi, h, g):
    u = bogoliubov_unitary(phi, h, g)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    d = u.conj().T @ even_block_matrix(phi, h, g) @ u
    lam = dispersion(phi, h, g)
    assert np.allclose(d, np.diag([np.cos(phi) - lam, np.cos(phi) + lam]), atol=1e-11)


def test_bogoliubov_vectorised_matches_scalar():
    phi = np.linspace(0.1, 3.0, 5)
    stacked = bogoliubov_unitary(phi, 0.3, 0.6)
    for k, p in enumerate(phi):
        assert np.allclose(stacked[k], bogoliubov_unitary(p, 0.3, 0.6))


def test_bogoliubov_degenerate():
    with pytest.raises(DegenerateBlock):
        bogoliubov_unitary(np.pi, 1.0, 0.8)


@pytest.mark.parametrize("n", [2, 17, 512])
def test_make_grid_integrates_polynomials(n):
    g = make_grid(n)
    assert g.weights.sum() == pytest.approx(np.pi, abs=1e-13)
    assert g.integrate(np.sin(g.nodes)) == pytest.approx(2.0, abs=1e-12 if n > 2 else 0.2)


def test_antiperiodic_grid():
    g = antiperiodic_grid(12)
    assert len(g) == 6
    assert np.allclose(g.nodes, np.pi * np.arange(1, 12, 2) / 12)
    assert g.weights.sum() == pytest.approx(np.pi)
    with pytest.raises(ValueError):
        antiperiodic_grid(7)


def test_grid_validation():
    with pytest.raises(ValueError):
        MomentumGrid(np.array([0.5, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        make_grid(1)


def test_parameter_validation():
    with pytest.raises(ValueError):
        ModelParams(1.5, 0.2)
    with pytest.raises(ValueError):
        ModelParams(0.5, np.nan)
    with pytest.raises(ValueError):
        ModelParams(0.5, 0.2, J=0.0)
    with pytest.raises(ValueError):
        QuenchProtocol(0.2, 1.0, pulse_duration=-1.0)
