import numpy as np
import pytest

from glidedtc import backend


def test_backend_identifies_itself():
    assert backend.BACKEND in ("cython", "python")
    assert set(backend.MU_CODES) == {"x", "y", "z"}


def test_get_backend_validation():
    with pytest.raises(ValueError):
        backend.get_backend("fortran")


def _both_backends():
    py = backend.get_backend("python")
    if backend.BACKEND != "cython":
        pytest.skip("compiled extension not built")
    return backend.get_backend("cython"), py


def test_chain_apply_parity(rng):
    cy, py = _both_backends()
    for L in (1, 3, 5):
        psi = rng.normal(size=1 << L) + 1j * rng.normal(size=1 << L)
        psi = np.ascontiguousarray(psi)
        for mu in (0, 1, 2):
            a = cy.chain_apply(psi, L, 0.4, -0.2, 0.15, 0.03, mu, L > 2)
            b = py.chain_apply(psi, L, 0.4, -0.2, 0.15, 0.03, mu, L > 2)
            assert np.max(np.abs(a - b)) < 1e-13


def test_chain_evolve_parity():
    cy, py = _both_backends()
    L = 3
    psi0 = np.full(1 << L, (1 << L) ** -0.5, dtype=complex)
    ts = np.linspace(0.0, 4 * np.pi, 17)
    a = cy.chain_evolve(psi0, L, 17.11, 1.0, 0.2, 0.0, 0, False, ts, 1e-11, 10**7)
    b = py.chain_evolve(psi0, L, 17.11, 1.0, 0.2, 0.0, 0, False, ts, 1e-11, 10**7)
    # the two backends use different-order adaptive pairs; both converge
    # to the true flow within a small multiple of the tolerance
    assert np.max(np.abs(a - b)) < 1e-7


def test_chain_evolve_preserves_norm():
    be = backend.get_backend(backend.BACKEND)
    L = 4
    psi0 = np.full(1 << L, 0.25, dtype=complex)
    ts = np.linspace(0.0, 10 * 2 * np.pi, 11)
    out = be.chain_evolve(psi0, L, 40.0, 1.0, 0.2, 0.0, 0, False, ts, 1e-10, 10**8)
    norms = np.linalg.norm(out, axis=1)
    assert np.max(np.abs(norms - 1.0)) < 1e-7


def test_chain_evolve_step_budget():
    be = backend.get_backend(backend.BACKEND)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    ts = np.linspace(0.0, 1000.0, 2)
    with pytest.raises(RuntimeError):
        be.chain_evolve(psi0, 1, 80.0, 1.0, 0.0, 0.0, 0, False, ts, 1e-12, 5)


def test_dimension_mismatch_rejected():
    be = backend.get_backend(backend.BACKEND)
    with pytest.raises(ValueError):
        be.chain_apply(np.zeros(3, complex), 2, 1.0, 0.0, 0.0, 0.0, 0, False)
