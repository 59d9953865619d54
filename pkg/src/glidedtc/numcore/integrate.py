"""Adaptive unitary ODE integration on complex state vectors.

Embedded Dormand-Prince 5(4) pair with PI step-size control, operating on
the Schrodinger equation i dpsi/dt = H(t) psi for a matrix-free Hermitian
action H. Norms are monitored but never forcibly renormalized: norm drift
is treated as an integrator failure signal.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


class IntegrationError(RuntimeError):
    """Generator returned non-finite output or norm drift exceeded bounds."""


class ToleranceError(IntegrationError):
    """Step budget exhausted before the local-error target was met."""

    def __init__(self, message, worst_error):
        super().__init__(f"{message} (worst local-error estimate {worst_error:.3e})")
        self.worst_error = worst_error


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid [t0, t1] with `samples` points (endpoints included)."""

    t0: float
    t1: float
    samples: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")

    @property
    def times(self) -> np.ndarray:
        if self.samples == 1:
            return np.array([self.t0])
        return np.linspace(self.t0, self.t1, self.samples)


# Dormand-Prince RK5(4)7M tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
# PI controller exponents for a 5th-order pair
_BETA1 = 0.7 / 5.0
_BETA2 = 0.4 / 5.0


def _solve_adaptive(rhs, y0, t_out, tol, max_steps):
    """Integrate y' = rhs(t, y) returning y at every time in t_out.

    t_out must be monotone (increasing or decreasing); t_out[0] is the
    initial time. Steps are clipped to output times, which is accurate for
    the smooth trigonometric drives used here.
    """
    t_out = np.asarray(t_out, dtype=float)
    direction = 1.0 if t_out[-1] >= t_out[0] else -1.0
    y = np.array(y0, dtype=complex)
    t = t_out[0]
    out = np.empty((len(t_out),) + y.shape, dtype=complex)
    out[0] = y

    f = rhs(t, y)
    if not np.all(np.isfinite(f.view(float))):
        raise IntegrationError("generator returned non-finite output")

    span = abs(t_out[-1] - t_out[0])
    if span == 0.0:
        out[:] = y
        return out

    # crude but safe initial step: limited by both span and RHS magnitude
    fnorm = np.linalg.norm(f)
    h = min(span / 100.0, 0.1 / fnorm if fnorm > 0 else span / 100.0)
    h = max(h, 1e3 * np.finfo(float).eps * span)

    err_prev = 1.0
    worst_err = 0.0
    k = np.empty((7,) + y.shape, dtype=complex)
    next_i = 1
    steps = 0

    while next_i < len(t_out):
        if steps >= max_steps:
            raise ToleranceError("step budget exhausted", worst_err)
        steps += 1

        t_target = t_out[next_i]
        h_step = min(h, abs(t_target - t))
        hd = direction * h_step

        k[0] = f
        for i in range(1, 7):
            yi = y + hd * (_A[i] @ k[:i])
            k[i] = rhs(t + _C[i] * hd, yi)
        y_new = y + hd * (_B5 @ k)
        err_vec = hd * (_E @ k)

        if not np.all(np.isfinite(y_new.view(float))):
            raise IntegrationError("generator returned non-finite output")

        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.sqrt(np.mean(np.abs(err_vec / scale) ** 2))
        worst_err = max(worst_err, err * tol)

        if err <= 1.0:
            t_new = t + hd
            y = y_new
            t = t_new
            f = k[6]  # FSAL
            if abs(t - t_target) <= 1e-12 * max(1.0, abs(t_target)):
                out[next_i] = y
                t = t_target
                next_i += 1
            factor = _SAFETY * err ** (-_BETA1) * err_prev**_BETA2 if err > 0 else _MAX_FACTOR
            err_prev = max(err, 1e-4)
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-_BETA1))
        h = h_step * min(_MAX_FACTOR, max(_MIN_FACTOR, factor))

    return out


def integrate_schrodinger(apply_h, psi0, grid, tol=1e-10, max_steps=10_000_000):
    """Evolve psi0 under i dpsi/dt = H(t) psi, sampling at grid.times.

    apply_h(t, psi) must return the Hermitian action H(t) psi. Returns an
    array of states, one per grid point. Norm drift beyond
    10 * tol * (periods spanned, at omega = 1) raises IntegrationError.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-14, 1e-6], got {tol}")
    psi0 = np.asarray(psi0, dtype=complex)
    n0 = np.linalg.norm(psi0)
    if abs(n0 - 1.0) > 1e-9:
        raise ValueError(f"psi0 not normalized: |psi0| = {n0}")

    def rhs(t, y):
        return -1j * apply_h(t, y)

    times = grid.times
    states = _solve_adaptive(rhs, psi0, times, tol, max_steps)

    span_periods = max(1.0, abs(times[-1] - times[0]) / TWO_PI)
    drift_limit = max(10.0 * tol * span_periods, 1e-13)
    norms = np.linalg.norm(states, axis=1)
    drift = np.max(np.abs(norms - n0))
    if drift > drift_limit:
        raise IntegrationError(
            f"norm drift {drift:.3e} exceeds {drift_limit:.3e}; "
            "generator may be non-Hermitian or tol too loose"
        )
    return states


def propagator(apply_h, grid, tol=1e-10):
    """2x2 time-evolution operator over [grid.t0, grid.t1].

    Columns are the evolutions of the basis states (1,0) and (0,1).
    """
    cols = []
    for e in (np.array([1.0, 0.0], complex), np.array([0.0, 1.0], complex)):
        states = integrate_schrodinger(apply_h, e, TimeGrid(grid.t0, grid.t1, 2), tol)
        cols.append(states[-1])
    u = np.column_stack(cols)
    defect = np.linalg.norm(u.conj().T @ u - np.eye(2))
    if defect > 1e-8:
        raise IntegrationError(f"propagator unitarity defect {defect:.3e}")
    return u
