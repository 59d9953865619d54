import numpy as np
import pytest

from glidedtc import model
from glidedtc.model import GlideModelParams


@pytest.fixture
def params():
    return GlideModelParams(alpha=17.11)


def test_params_validation():
    with pytest.raises(ValueError):
        GlideModelParams(alpha=-1.0)
    with pytest.raises(ValueError):
        GlideModelParams(alpha=1.0, omega=0.0)
    p = GlideModelParams(alpha=8.0, omega=2.0)
    assert p.Omega == 2.0
    assert abs(p.period - np.pi) < 1e-15


def test_hamiltonian_hermitian_and_matrix_free_agree(params):
    for t in np.linspace(0.0, params.period, 13):
        h = model.hamiltonian(params, t)
        assert np.linalg.norm(h - h.conj().T) < 1e-14
        psi = np.array([0.3 + 0.4j, -0.7 + 0.1j])
        assert np.linalg.norm(model.apply_hamiltonian(params, t, psi) - h @ psi) < 1e-14


def test_glide_symmetry_commutes(params):
    for t in np.linspace(0.0, 2 * params.period, 41):
        h = model.hamiltonian(params, t)
        g = model.glide_operator(params, t)
        assert np.linalg.norm(h @ g - g @ h) < 1e-13
        assert np.linalg.norm(g @ g - np.exp(-1j * params.omega * t) * np.eye(2)) < 1e-14


def test_instantaneous_eigensystem_diagonalizes(params):
    for t in np.linspace(0.1, params.period, 7):
        h = model.hamiltonian(params, t)
        eig = model.instantaneous_eigensystem(params, t)
        for phi, e in ((eig.phi_plus, eig.E_plus), (eig.phi_minus, eig.E_minus)):
            assert np.linalg.norm(h @ phi - e * phi) < 1e-13
            assert abs(np.linalg.norm(phi) - 1.0) < 1e-14


def test_eigenstate_swap_after_one_period(params):
    T = params.period
    for t in (0.0, 0.3, 1.7):
        now = model.instantaneous_eigensystem(params, t)
        later = model.instantaneous_eigensystem(params, t + T)
        assert np.linalg.norm(later.phi_plus - now.phi_minus) < 1e-13
        assert np.linalg.norm(later.phi_minus - now.phi_plus) < 1e-13


def test_bloch_vector_reconstructs_hamiltonian(params):
    t = 2.1
    b = model.bloch_vector(params, t)
    h = b.h_x * model.SIGMA_X + b.h_y * model.SIGMA_Y + b.h_z * model.SIGMA_Z
    assert np.linalg.norm(h - model.hamiltonian(params, t)) < 1e-14


def test_winding_number_is_half(params):
    assert abs(model.winding_number(params) - 0.5) < 1e-6


def test_winding_rejects_bad_epsilon(params):
    with pytest.raises(ValueError):
        model.winding_number(params, epsilon=params.period)


def test_degenerate_field_raises(params):
    field = lambda t: (model.bloch_vector(params, t).h_x,
                       model.bloch_vector(params, t).h_y)
    with pytest.raises(model.DegenerateFieldError):
        model.planar_angle_winding(field, 0.0, params.period, samples=101)


def test_chiral_symmetry_exact(params):
    ts = np.linspace(0.0, params.period, 101)
    assert model.chiral_check(params, ts) < 1e-13


def test_chiral_check_flags_broken_symmetry(params):
    broken = lambda t: model.hamiltonian(params, t) + 0.1 * model.SIGMA_Z
    assert model.chiral_check(params, [0.5], hamiltonian_fn=broken) > 0.1
