"""Driven two-level model with nonsymmorphic glide symmetry.

Natural units: hbar = 1, drive frequency omega sets the timescale
(T = 2 pi / omega). The single dimensionless knob is alpha = 8 Omega / omega.
"""

from dataclasses import dataclass

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class DegenerateFieldError(ValueError):
    """Planar Bloch field vanished inside the trimmed winding window."""


@dataclass(frozen=True)
class GlideModelParams:
    alpha: float
    omega: float = 1.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")

    @property
    def Omega(self) -> float:
        """Instantaneous band amplitude, Omega = alpha * omega / 8."""
        return self.alpha * self.omega / 8.0

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega


@dataclass
class InstantaneousEigensystem:
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    E_plus: float
    E_minus: float


@dataclass(frozen=True)
class BlochVector:
    h_x: float
    h_y: float
    h_z: float = 0.0


def hamiltonian(params: GlideModelParams, t: float) -> np.ndarray:
    """H(t) = (Omega/2) sin(wt) sigma_x + Omega sin^2(wt/2) sigma_y."""
    w = params.omega
    om = params.Omega
    return 0.5 * om * np.sin(w * t) * SIGMA_X + om * np.sin(0.5 * w * t) ** 2 * SIGMA_Y


def apply_hamiltonian(params: GlideModelParams, t: float, psi: np.ndarray) -> np.ndarray:
    """Matrix-free H(t) psi for the two-level drive."""
    w = params.omega
    om = params.Omega
    # upper-right entry h_x - i h_y = Omega sin(wt/2) e^{-i wt/2}
    h = om * np.sin(0.5 * w * t) * np.exp(-0.5j * w * t)
    return np.array([h * psi[1], np.conj(h) * psi[0]])


def glide_operator(params: GlideModelParams, t: float) -> np.ndarray:
    """G(t) with rows ((0, e^{-i w t}), (1, 0)); G^2 = e^{-i w t} * identity."""
    return np.array([[0.0, np.exp(-1j * params.omega * t)], [1.0, 0.0]], dtype=complex)


def instantaneous_eigensystem(params: GlideModelParams, t: float) -> InstantaneousEigensystem:
    """phi_chi(t) = (chi e^{-i w t / 2}, 1)/sqrt(2), E_chi = chi Omega sin(wt/2)."""
    w = params.omega
    ph = np.exp(-0.5j * w * t)
    e = params.Omega * np.sin(0.5 * w * t)
    inv = 1.0 / np.sqrt(2.0)
    return InstantaneousEigensystem(
        phi_plus=inv * np.array([ph, 1.0], dtype=complex),
        phi_minus=inv * np.array([-ph, 1.0], dtype=complex),
        E_plus=e,
        E_minus=-e,
    )


def bloch_vector(params: GlideModelParams, t: float) -> BlochVector:
    w = params.omega
    om = params.Omega
    return BlochVector(
        h_x=0.5 * om * np.sin(w * t),
        h_y=om * np.sin(0.5 * w * t) ** 2,
        h_z=0.0,
    )


def planar_angle_winding(field, t0: float, t1: float, samples: int = 20001) -> float:
    """Accumulated angle (in turns) of the planar field (h_x, h_y) over [t0, t1].

    field(t) -> (h_x, h_y). The angle increment between neighboring samples
    is taken from the argument of the complex ratio, so it is insensitive to
    the overall field magnitude.
    """
    ts = np.linspace(t0, t1, samples)
    h = np.array([complex(*field(t)) for t in ts])
    mags = np.abs(h)
    if np.min(mags) < 1e-12:
        raise DegenerateFieldError(
            f"|h| = {np.min(mags):.3e} inside window [{t0}, {t1}]"
        )
    increments = np.angle(h[1:] / h[:-1])
    return float(np.sum(increments) / (2.0 * np.pi))


def winding_number(params: GlideModelParams, t_span=None, epsilon: float = None,
                   samples: int = 20001) -> float:
    """Winding of the normalized planar Bloch vector over one drive period.

    The degenerate endpoints (|h| = 0 at t = 0 and t = T) are excluded by a
    trimmed window [eps, T - eps]; the eps -> 0 limit is recovered by
    Richardson extrapolation from eps and eps/2. Returns 1/2 for this model.
    """
    T = params.period
    if t_span is None:
        t_span = (0.0, T)
    t0, t1 = t_span
    if epsilon is None:
        epsilon = (t1 - t0) / 1000.0
    if not 0.0 < epsilon < (t1 - t0) / 10.0:
        raise ValueError("epsilon must lie in (0, span/10)")

    def field(t):
        h = bloch_vector(params, t)
        return h.h_x, h.h_y

    w1 = planar_angle_winding(field, t0 + epsilon, t1 - epsilon, samples)
    w2 = planar_angle_winding(field, t0 + epsilon / 2, t1 - epsilon / 2, samples)
    # winding(eps) is linear in eps for a field whose angle has a finite
    # rate at the degenerate endpoints
    return 2.0 * w2 - w1


def chiral_check(params: GlideModelParams, t_grid, hamiltonian_fn=None) -> float:
    """Max operator norm of {sigma_z, H(t)} over the grid (0 for this model)."""
    if hamiltonian_fn is None:
        hamiltonian_fn = lambda t: hamiltonian(params, t)
    worst = 0.0
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        h = hamiltonian_fn(t)
        anti = SIGMA_Z @ h + h @ SIGMA_Z
        worst = max(worst, float(np.linalg.norm(anti, ord=2)))
    return worst
