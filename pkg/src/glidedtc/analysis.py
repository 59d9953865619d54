"""Resonance roots, Floquet operators, Berry phase, stroboscopic portraits.

Sign convention for the root phases: theta_n = arg H_c^+(alpha_n, pi/2) in
(-pi, pi]. These come out negative, theta_n -> -pi/alpha_n for large n, and
make the one-period Floquet operator exactly -i sigma_z e^{-i sigma_x
(alpha_n/2 - theta_n)}. Published tabulations quote |theta_n|.
"""

from dataclasses import dataclass

import numpy as np

from .heun import heun_at
from .model import SIGMA_X, SIGMA_Z, GlideModelParams, apply_hamiltonian, instantaneous_eigensystem
from .numcore.integrate import TimeGrid, _solve_adaptive, propagator


class RootError(RuntimeError):
    """Root refinement could not reach the requested residual."""


class NotClosedError(RuntimeError):
    """Two-period evolution is not a closed cycle at this alpha."""


@dataclass(frozen=True)
class RootEntry:
    n: int
    alpha_n: float
    theta_n: float
    residual: float


@dataclass
class StroboscopicRecord:
    n: int
    a_plus: float
    a_minus: float


@dataclass
class PeriodicityVerdict:
    kind: str  # period-1 | period-2 | ergodic-like | quasi-periodic
    cluster_count: int
    coverage_fraction: float


def _stripped(alpha: float, tol: float = 1e-12) -> complex:
    """e^{-i alpha / 2} H_c^-(alpha, pi/2)."""
    _, hm = heun_at(alpha, np.pi / 2, tol=tol)
    return np.exp(-0.5j * alpha) * hm


def _is_real_along_axis(samples=(3.0, 9.0, 20.5, 47.3)) -> bool:
    """Empirical test whether the phase-stripped H_c^- is real in alpha."""
    return all(abs(_stripped(a).imag) < 1e-9 for a in samples)


def _eval_many(alphas, tol):
    """(H_c^+, e^{-i alpha/2} H_c^-) at x = pi/2 for a batch of alphas.

    All alphas ride in one stacked coefficient system so the adaptive
    stepping cost is paid once per batch instead of once per alpha.
    """
    alphas = np.asarray(alphas, dtype=float)
    m = len(alphas)

    def rhs(x, c):
        ph = np.exp(1j * alphas * np.sin(x) ** 2)
        return np.concatenate([-1j * ph * c[m:], -1j * np.conj(ph) * c[:m]])

    y0 = np.concatenate([np.ones(m), np.zeros(m)]).astype(complex)
    out = _solve_adaptive(rhs, y0, np.array([0.0, np.pi / 2]), tol,
                          max_steps=20_000_000)
    h_plus = out[-1, :m]
    stripped = np.exp(-0.5j * alphas) * (-1j * np.conj(out[-1, m:]))
    return h_plus, stripped


def _locate_real_axis(ns, refine_tol, ode_tol=1e-13, scan_tol=1e-9, xtol=1e-12):
    """Roots for all n in ns via batched scan + lockstep bisection."""
    ns = list(ns)
    los = np.array([2 * np.pi * n - np.pi for n in ns])
    his = np.array([2 * np.pi * n for n in ns])

    lo = np.empty(len(ns))
    hi = np.empty(len(ns))
    flo = np.empty(len(ns))
    for points in (9, 33):
        grid = np.array([np.linspace(a, b, points) for a, b in zip(los, his)])
        _, stripped = _eval_many(grid.ravel(), scan_tol)
        vals = stripped.real.reshape(grid.shape)
        missing = []
        for r, n in enumerate(ns):
            for i in range(points - 1):
                if vals[r, i] == 0.0 or vals[r, i] * vals[r, i + 1] < 0:
                    lo[r], hi[r], flo[r] = grid[r, i], grid[r, i + 1], vals[r, i]
                    break
            else:
                missing.append(n)
        if not missing:
            break
    else:
        raise RootError(f"no sign change of stripped H_c^- in bracket for n={missing}")

    while np.max(hi - lo) > xtol:
        mid = 0.5 * (lo + hi)
        _, stripped = _eval_many(mid, ode_tol)
        fm = stripped.real
        same = (fm > 0) == (flo > 0)
        exact = fm == 0.0
        lo = np.where(same & ~exact, mid, lo)
        flo = np.where(same & ~exact, fm, flo)
        hi = np.where(same & ~exact, hi, mid)
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    roots = 0.5 * (lo + hi)

    h_plus, stripped = _eval_many(roots, ode_tol)
    entries = []
    for n, root, hp, res in zip(ns, roots, h_plus, np.abs(stripped)):
        if res > refine_tol:
            raise RootError(
                f"n={n}: refined residual |H_c^-| = {res:.3e} above {refine_tol:.1e}"
            )
        entries.append(RootEntry(n=n, alpha_n=float(root),
                                 theta_n=float(np.angle(hp)), residual=float(res)))
    return entries


def _bisect(f, lo, hi, xtol):
    flo = f(lo)
    if flo == 0.0:
        return lo
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_min(f, lo, hi, xtol):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def find_root(n: int, refine_tol: float = 1e-10, ode_tol: float = 1e-13,
              real_axis: bool = None) -> RootEntry:
    """Locate alpha_n in the bracket [2 pi n - pi, 2 pi n]."""
    if real_axis is None:
        real_axis = _is_real_along_axis()

    if real_axis:
        return _locate_real_axis([n], refine_tol, ode_tol=ode_tol)[0]

    # fallback when the phase-stripped branch is not real: minimize the modulus
    lo, hi = 2 * np.pi * n - np.pi, 2 * np.pi * n
    f = lambda a: abs(_stripped(a, ode_tol)) ** 2
    xs = np.linspace(lo, hi, 33)
    vs = [f(a) for a in xs]
    i = int(np.argmin(vs))
    a, b = xs[max(0, i - 1)], xs[min(len(xs) - 1, i + 1)]
    root = _golden_min(f, a, b, xtol=1e-12)

    hp, hm = heun_at(root, np.pi / 2, tol=ode_tol)
    residual = abs(hm)
    if residual > refine_tol:
        raise RootError(
            f"n={n}: refined residual |H_c^-| = {residual:.3e} above {refine_tol:.1e}"
        )
    return RootEntry(n=n, alpha_n=float(root), theta_n=float(np.angle(hp)),
                     residual=float(residual))


def find_roots(n_max: int, refine_tol: float = 1e-10) -> list:
    """First n_max resonance roots with their phases, ordered by n."""
    if n_max > 50:
        raise ValueError("n_max must be <= 50")
    if refine_tol > 1e-10:
        raise ValueError("refine_tol must be <= 1e-10")
    if n_max <= 0:
        return []
    if _is_real_along_axis():
        return _locate_real_axis(range(1, n_max + 1), refine_tol)
    return [find_root(n, refine_tol=refine_tol, real_axis=False)
            for n in range(1, n_max + 1)]


def floquet_operator(alpha: float, periods: int = 1, tol: float = 1e-12,
                     omega: float = 1.0) -> np.ndarray:
    """U(periods * T) from direct propagation of the driven two-level model."""
    if periods not in (1, 2):
        raise ValueError("periods must be 1 or 2")
    params = GlideModelParams(alpha=alpha, omega=omega)
    grid = TimeGrid(0.0, periods * params.period, 2)
    return propagator(lambda t, psi: apply_hamiltonian(params, t, psi), grid, tol=tol)


def floquet_form(alpha_n: float, theta_n: float) -> np.ndarray:
    """-i sigma_z e^{-i sigma_x (alpha_n/2 - theta_n)}, the exact U(T) at a root."""
    beta = 0.5 * alpha_n - theta_n
    exp_sx = np.cos(beta) * np.eye(2) - 1j * np.sin(beta) * SIGMA_X
    return -1j * SIGMA_Z @ exp_sx


def berry_phase(alpha: float, tol: float = 1e-12) -> float:
    """arg <Psi(0)| U(2T) |Psi(0)> for Psi(0) = phi_+(0); pi at the roots."""
    u2 = floquet_operator(alpha, periods=2, tol=tol)
    params = GlideModelParams(alpha=alpha)
    phi = instantaneous_eigensystem(params, 0.0).phi_plus
    amp = np.vdot(phi, u2 @ phi)
    if abs(amp) < 0.99:
        raise NotClosedError(
            f"|<Psi(0)|U(2T)|Psi(0)>| = {abs(amp):.4f} < 0.99: "
            f"not a closed cycle at alpha = {alpha}"
        )
    return float(np.angle(amp) % (2.0 * np.pi))


def stroboscopic_projections(alpha: float, psi0, n_periods: int,
                             tol: float = 1e-12) -> list:
    """a_pm(n) = |<phi_pm(0)| U^n(T) |psi0>| for n = 1..n_periods."""
    if n_periods > 10_000:
        raise ValueError("n_periods must be <= 10^4")
    psi = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
        raise ValueError("psi0 must be normalized")
    u = floquet_operator(alpha, periods=1, tol=tol)
    eig = instantaneous_eigensystem(GlideModelParams(alpha=alpha), 0.0)
    records = []
    for n in range(1, n_periods + 1):
        psi = u @ psi
        records.append(StroboscopicRecord(
            n=n,
            a_plus=float(abs(np.vdot(eig.phi_plus, psi))),
            a_minus=float(abs(np.vdot(eig.phi_minus, psi))),
        ))
    return records


def classify_periodicity(records, cluster_tol: float = 0.02,
                         arc_bins: int = 20) -> PeriodicityVerdict:
    """Cluster the (a_+, a_-) points and judge the periodicity of the orbit.

    Greedy clustering with radius cluster_tol; arc coverage counts occupied
    bins of the quarter-circle angle. Verdict: 1 cluster -> period-1,
    2 clusters -> period-2, coverage >= 0.8 -> ergodic-like, else
    quasi-periodic.
    """
    if len(records) < 50:
        raise ValueError("need at least 50 records")
    pts = np.array([[r.a_plus, r.a_minus] for r in records])
    centers = []
    for p in pts:
        for c in centers:
            if np.hypot(p[0] - c[0], p[1] - c[1]) <= cluster_tol:
                break
        else:
            centers.append(p)
    angles = np.arctan2(pts[:, 1], pts[:, 0])  # in [0, pi/2]
    bins = np.minimum((angles / (np.pi / 2) * arc_bins).astype(int), arc_bins - 1)
    coverage = len(np.unique(bins)) / arc_bins
    n_clusters = len(centers)
    if n_clusters == 1:
        kind = "period-1"
    elif n_clusters == 2:
        kind = "period-2"
    elif coverage >= 0.8:
        kind = "ergodic-like"
    else:
        kind = "quasi-periodic"
    return PeriodicityVerdict(kind=kind, cluster_count=n_clusters,
                              coverage_fraction=float(coverage))


def offdiagonal_observable(params: GlideModelParams, t: float) -> complex:
    """<phi_+|sigma_x|phi_-(t)> including dynamical phases:
    e^{-i alpha sin^2(wt/4)} sin(wt/2)."""
    x = params.omega * t / 4.0
    return complex(np.exp(-1j * params.alpha * np.sin(x) ** 2) * np.sin(2.0 * x))
