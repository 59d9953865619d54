"""Exact instantaneous-basis coefficients of the glide-driven two-level model.

In the scaled time x = omega t / 4 the coefficient pair obeys the coupled
first-order system

    dc_+/dx = -i e^{+i alpha sin^2 x} c_-
    dc_-/dx = -i e^{-i alpha sin^2 x} c_+

whose components solve c'' - i chi alpha sin(2x) c' + c = 0. Integrating
the first-order system from c(0) = (1, 0) yields both special-function
branches at once:

    H_c^+(alpha, x) = c_+(x)
    H_c^-(alpha, x) = -i conj(c_-(x)) / sin(x)

(the second-order form with initial data (1, 0) reproduces only the chi=+1
branch; the chi=-1 branch enters through the off-diagonal amplitude).
"""

from dataclasses import dataclass

import numpy as np

from .model import GlideModelParams, instantaneous_eigensystem
from .numcore.bessel import bessel_j0
from .numcore.integrate import _solve_adaptive

# dense-output spacing resolves the fastest phase at alpha ~ 100
_MAX_DX = np.pi / 200.0


@dataclass
class HeunValue:
    alpha: float
    x: float
    chi: int
    value: complex


@dataclass
class CoefficientTrajectory:
    """c_+(x), c_-(x) on a grid, for initial data c(0) = (c0_plus, c0_minus)."""

    alpha: float
    xs: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray


def _dense_grid(x_end: float) -> np.ndarray:
    n = max(2, int(np.ceil(abs(x_end) / _MAX_DX)) + 1)
    return np.linspace(0.0, x_end, n)


def solve_system(alpha: float, xs, c0=(1.0, 0.0), tol: float = 1e-12) -> CoefficientTrajectory:
    """Integrate the coupled coefficient system over the given x grid."""
    xs = np.asarray(xs, dtype=float)

    def rhs(x, c):
        ph = np.exp(1j * alpha * np.sin(x) ** 2)
        return np.array([-1j * ph * c[1], -1j * np.conj(ph) * c[0]])

    y0 = np.array(c0, dtype=complex)
    out = _solve_adaptive(rhs, y0, xs, tol, max_steps=5_000_000)
    return CoefficientTrajectory(alpha=alpha, xs=xs, c_plus=out[:, 0], c_minus=out[:, 1])


def _branches(traj: CoefficientTrajectory):
    """(H_c^+, H_c^-) on traj.xs from an initial-data-(1,0) trajectory."""
    h_plus = traj.c_plus.copy()
    s = np.sin(traj.xs)
    h_minus = np.empty_like(h_plus)
    small = np.abs(s) < 1e-9
    h_minus[~small] = -1j * np.conj(traj.c_minus[~small]) / s[~small]
    # at sin(x) = 0 the ratio has the limit 1 at x = 0; at x = n pi > 0
    # continue with the neighboring value (measure-zero grid points)
    for i in np.where(small)[0]:
        h_minus[i] = 1.0 if i == 0 else h_minus[i - 1]
    return h_plus, h_minus


def solve_coefficients(alpha: float, chi: int, x_end: float, tol: float = 1e-12):
    """H_c^chi(alpha, x) sampled on a dense grid over [0, x_end]."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative; use conjugation for -alpha")
    if not 0.0 < x_end <= 4.0 * np.pi:
        raise ValueError("x_end must lie in (0, 4 pi]")
    if tol > 1e-10:
        raise ValueError("tol must be <= 1e-10")
    if chi not in (+1, -1):
        raise ValueError("chi must be +1 or -1")
    xs = _dense_grid(x_end)
    traj = solve_system(alpha, xs, tol=tol)
    h_plus, h_minus = _branches(traj)
    vals = h_plus if chi == +1 else h_minus
    return [HeunValue(alpha=alpha, x=float(x), chi=chi, value=complex(v))
            for x, v in zip(xs, vals)]


def heun_at(alpha: float, x: float, tol: float = 1e-12):
    """(H_c^+, H_c^-) at a single point x."""
    traj = solve_system(alpha, np.array([0.0, x]), tol=tol)
    h_plus, h_minus = _branches(traj)
    return complex(h_plus[-1]), complex(h_minus[-1])


def coefficient_matrix(alpha: float, x: float, tol: float = 1e-12) -> np.ndarray:
    """Unitary mapping c(0) -> c(x).

    Equals ((H_c^+, -i sin x H_c^-), (-i sin x conj(H_c^-), conj(H_c^+))).
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    traj = solve_system(alpha, np.array([0.0, x]), tol=tol)
    cp, cm = traj.c_plus[-1], traj.c_minus[-1]
    # column 2 follows from the SU(2) structure of the unitary flow
    return np.array([[cp, -np.conj(cm)], [cm, np.conj(cp)]])


def remain_probability(alpha: float, tol: float = 1e-12) -> float:
    """rho(T) = |H_c^-(alpha, pi/2)|^2, the stay probability after one period."""
    traj = solve_system(alpha, np.array([0.0, np.pi / 2]), tol=tol)
    return float(min(1.0, abs(traj.c_minus[-1]) ** 2))


def bessel_asymptotic(alpha: float) -> complex:
    """Large-alpha approximation e^{i alpha/2} (pi/2) J0(alpha/2) of H_c^-(alpha, pi/2)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return np.exp(0.5j * alpha) * (np.pi / 2.0) * bessel_j0(alpha / 2.0)


def dynamical_phase(alpha: float, chi: int, x: float) -> float:
    """Closed form of the accumulated band energy, int_0^t E_chi dt' = chi (alpha/2) sin^2 x."""
    return chi * 0.5 * alpha * np.sin(x) ** 2


def reconstruct_wavefunction(params: GlideModelParams, c_plus: complex,
                             c_minus: complex, t: float) -> np.ndarray:
    """Assemble Psi(t) from instantaneous-basis coefficients evaluated at x = wt/4."""
    x = params.omega * t / 4.0
    eig = instantaneous_eigensystem(params, t)
    psi = np.zeros(2, dtype=complex)
    for chi, c, phi in ((+1, c_plus, eig.phi_plus), (-1, c_minus, eig.phi_minus)):
        phase = np.exp(1j * x - 1j * dynamical_phase(params.alpha, chi, x))
        psi += c * phase * phi
    return psi


def reconstruct_trajectory(params: GlideModelParams, c0, times, tol: float = 1e-12):
    """Psi(t) on a time grid via a single coefficient-system integration."""
    times = np.asarray(times, dtype=float)
    prepend = times[0] != 0.0
    t_grid = np.concatenate(([0.0], times)) if prepend else times
    xs = params.omega * t_grid / 4.0
    traj = solve_system(params.alpha, xs, c0=c0, tol=tol)
    skip = 1 if prepend else 0
    return np.array([
        reconstruct_wavefunction(params, cp, cm, t)
        for cp, cm, t in zip(traj.c_plus[skip:], traj.c_minus[skip:], times)
    ])
