"""Acceptance gate: one criterion per test, one PASS/FAIL line per criterion.

Two criteria are expected to fail and are kept red rather than weakened
(full analysis in the decisions ledger kept outside the package):

* Criterion 1: the published tabulation it checks against is less precise
  than the roots computed here (deviations up to 0.063 in alpha against a
  +-0.01 gate, confirmed by two independent integration routes).
* Criterion 8, first clause: for the pinned initial state (1, 0) the two
  stroboscopic points coincide exactly (a_+ = a_- = 1/sqrt(2) for every n,
  an algebraic identity of the one-period propagator at a root), so the
  portrait can never show 2 clusters at radius 1e-6. A generic initial
  state does produce the intended 2-cluster period-2 portrait (covered in
  test_analysis).
"""

import numpy as np
import pytest
from test_manybody import _dense_chain_hamiltonian

from glidedtc import analysis, heun, manybody as mb, model
from glidedtc.model import GlideModelParams, apply_hamiltonian
from glidedtc.numcore.bessel import bessel_j0
from glidedtc.numcore.integrate import TimeGrid, _solve_adaptive, integrate_schrodinger
from glidedtc.numcore.spectrum import dft

# published reference tabulation of the first 14 resonance roots and phases
TABLE_ALPHA = [4.21, 10.73, 17.11, 23.44, 29.75, 36.07, 42.36,
               48.66, 54.95, 61.24, 67.46, 73.76, 80.07, 86.34]
TABLE_THETA = [0.391, 0.199, 0.138, 0.108, 0.0889, 0.0756, 0.0664,
               0.0592, 0.0535, 0.0483, 0.0459, 0.0424, 0.0396, 0.0371]


def _gate(num, ok, desc):
    print(f"CRITERION {num:02d}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def test_criterion_01_reference_table(root_table):
    d_alpha = max(abs(e.alpha_n - a) for e, a in zip(root_table, TABLE_ALPHA))
    d_theta = max(abs(abs(e.theta_n) - t) for e, t in zip(root_table, TABLE_THETA))
    ok = d_alpha <= 0.01 and d_theta <= 0.001
    _gate(1, ok, "14 roots match the reference table within +-0.01 / +-0.001 "
          f"(max deviations: alpha {d_alpha:.4f}, theta {d_theta:.4f})")


def test_criterion_02_asymptotics(root_table):
    ok = True
    for e in root_table[9:14]:
        ok &= abs(e.alpha_n - (2 * np.pi * e.n - np.pi / 2)) <= 0.15
        ok &= abs(abs(e.theta_n) - np.pi / e.alpha_n) <= 0.003
    _gate(2, ok, "roots 10..14 obey alpha_n ~ 2 pi n - pi/2 (+-0.15) and "
          "|theta_n| ~ pi/alpha_n (+-0.003)")


def test_criterion_03_dtc_closure(root_table):
    ok = True
    for idx in (0, 2, 4):
        alpha = root_table[idx].alpha_n
        u2 = analysis.floquet_operator(alpha, periods=2, tol=1e-12)
        ok &= np.linalg.norm(u2 + np.eye(2)) <= 1e-6
        ok &= abs(analysis.berry_phase(alpha, tol=1e-12) - np.pi) <= 1e-5
    _gate(3, ok, "U(2T) = -identity within 1e-6 and Berry phase pi +- 1e-5 "
          "at roots 1, 3, 5")


def test_criterion_04_floquet_form(root_table):
    ok = True
    for idx in (0, 2):
        e = root_table[idx]
        u = analysis.floquet_operator(e.alpha_n, periods=1, tol=1e-12)
        form = analysis.floquet_form(e.alpha_n, e.theta_n)
        ok &= np.linalg.norm(u - form) <= 1e-5
    _gate(4, ok, "U(T) equals -i sigma_z exp(-i sigma_x (alpha/2 - theta)) "
          "within 1e-5 at roots 1 and 3")


def test_criterion_05_oracle_equivalence(rng):
    worst = 0.0
    for _ in range(50):
        alpha = float(rng.uniform(0.0, 50.0))
        c0 = rng.normal(size=2) + 1j * rng.normal(size=2)
        c0 /= np.linalg.norm(c0)
        params = GlideModelParams(alpha=alpha)
        times = np.linspace(0.0, 4 * params.period, 21)
        recon = heun.reconstruct_trajectory(params, c0, times, tol=1e-11)
        direct = integrate_schrodinger(
            lambda t, p: apply_hamiltonian(params, t, p), recon[0],
            TimeGrid(0.0, times[-1], len(times)), tol=1e-11)
        worst = max(worst, float(np.max(np.abs(recon - direct))))
    _gate(5, worst <= 1e-7, "50 random reconstructed trajectories match direct "
          f"integration over [0, 4T] (worst {worst:.2e})")


def test_criterion_06_normalization_identity():
    alphas = np.linspace(0.0, 100.0, 100)
    xs = np.linspace(0.05, 3.09, 100)
    m = len(alphas)

    def rhs(x, c):
        ph = np.exp(1j * alphas * np.sin(x) ** 2)
        return np.concatenate([-1j * ph * c[m:], -1j * np.conj(ph) * c[:m]])

    y0 = np.concatenate([np.ones(m), np.zeros(m)]).astype(complex)
    out = _solve_adaptive(rhs, y0, np.concatenate(([0.0], xs)), 1e-12,
                          max_steps=20_000_000)[1:]
    # |H_c^+|^2 + sin^2 x |H_c^-|^2 = |c_+|^2 + |c_-|^2
    total = np.abs(out[:, :m]) ** 2 + np.abs(out[:, m:]) ** 2
    worst = float(np.max(np.abs(total - 1.0)))
    _gate(6, worst <= 1e-9, "normalization identity holds on a 100x100 "
          f"(alpha, x) grid (worst {worst:.2e})")


def test_criterion_07_bessel_regime():
    alphas = np.arange(40.0, 100.0 + 0.25, 0.5)
    _, stripped = analysis._eval_many(alphas, 1e-10)
    approx = np.array([(np.pi / 2) * abs(bessel_j0(a / 2)) for a in alphas])
    worst = float(np.max(np.abs(np.abs(stripped) - approx)))
    _gate(7, worst <= 0.02, "|H_c^-(alpha, pi/2)| tracks (pi/2)|J0(alpha/2)| "
          f"within 0.02 on [40, 100] (worst {worst:.3f})")


def test_criterion_08_stroboscopic_portraits(root_table):
    psi0 = np.array([1.0, 0.0], complex)
    recs = analysis.stroboscopic_projections(root_table[2].alpha_n, psi0, 300,
                                             tol=1e-12)
    tight = analysis.classify_periodicity(recs, cluster_tol=1e-6)
    recs8 = analysis.stroboscopic_projections(8.0, psi0, 300, tol=1e-12)
    loose = analysis.classify_periodicity(recs8)
    ok = tight.cluster_count == 2 and loose.coverage_fraction >= 0.8
    _gate(8, ok, "root 3 with psi0 = (1,0) gives exactly 2 clusters at radius "
          f"1e-6; alpha = 8 covers >= 0.8 of the arc (got {tight.cluster_count} "
          f"cluster(s) - the two stroboscopic points coincide identically for "
          f"this initial state - and coverage {loose.coverage_fraction:.2f})")


def test_criterion_09_winding_number():
    ok = True
    for alpha in (1.0, 4.21, 80.07):
        params = GlideModelParams(alpha=alpha)
        ok &= abs(model.winding_number(params) - 0.5) <= 1e-6
        ts = np.linspace(0.0, params.period, 1000)
        ok &= model.chiral_check(params, ts) <= 1e-13
    _gate(9, ok, "winding number 0.5 +- 1e-6 and chiral anticommutator "
          "<= 1e-13 at alpha in {1, 4.21, 80.07}")


def test_criterion_10_symmetry_suite():
    params = GlideModelParams(alpha=17.11)
    T = params.period
    ts = np.linspace(0.0, T, 1000)
    ok = True
    for t in ts:
        h = model.hamiltonian(params, t)
        g = model.glide_operator(params, t)
        ok &= np.linalg.norm(h @ g - g @ h) <= 1e-13
        ok &= np.linalg.norm(g @ g - np.exp(-1j * params.omega * t) * np.eye(2)) <= 1e-12
        # eigenvalue swap g_chi(t + T) = g_{-chi}(t)
        now = np.sort_complex(np.linalg.eigvals(g))
        later = np.sort_complex(np.linalg.eigvals(model.glide_operator(params, t + T)))
        ok &= np.max(np.abs(np.sort_complex(-now) - later)) <= 1e-12
    _gate(10, ok, "glide commutes with H, squares to exp(-i omega t), and its "
          "eigenvalues swap branches after one period (1000-point grid)")


def test_criterion_11_manybody_subharmonic(root_table):
    alpha13 = root_table[12].alpha_n
    params = mb.ChainParams(L=8, alpha=alpha13, J=0.2)
    psi0 = mb.build_initial_state(8, polarization="x")
    ev = mb.evolve_chain(params, psi0, 40, samples_per_period=16, tol=1e-10)
    # drop the endpoint sample so omega/2 falls exactly on a DFT bin
    series = type(ev.series)(times=ev.series.times[:-1],
                             values=ev.series.values[:-1])
    spec = dft(series, omega=params.omega)
    pos = spec.frequencies >= 0.0
    freqs, mags = spec.frequencies[pos], spec.magnitudes[pos]
    peak_bin = int(np.argmin(np.abs(freqs - 0.5)))
    others = np.delete(mags, peak_bin)
    dominance = float(mags[peak_bin] / np.max(others))
    Z = mb.envelope_Z(ev.stroboscopic_mx)
    ok = abs(freqs[np.argmax(mags)] - 0.5) < 1e-9 and dominance >= 5.0 \
        and bool(np.all(Z[:21] >= 0.7))
    _gate(11, ok, "L = 8 chain at root 13: spectral peak at omega/2 dominates "
          f">= 5x (got {dominance:.1f}x) and Z(n) >= 0.7 for n <= 20 "
          f"(min {float(np.min(Z[:21])):.3f})")


def _lifetimes(L, alpha, horizon, thresholds, tol=1e-10):
    params = mb.ChainParams(L=L, alpha=alpha, J=0.2)
    psi0 = mb.build_initial_state(L, polarization="x")
    ev = mb.evolve_chain(params, psi0, horizon, samples_per_period=8, tol=tol)
    Z = mb.envelope_Z(ev.stroboscopic_mx)
    return {th: mb.lifetime(Z, th) for th in thresholds}


def test_criterion_12_lifetime_scaling(root_table):
    alpha13 = root_table[12].alpha_n
    thresholds = (0.3, 0.5, 0.7)

    # exponential growth at alpha = 81.60 on the criterion's own L grid;
    # tau(L = 8) exceeds any desk-scale horizon, so censored runs enter the
    # fits as lower bounds, which can only under-estimate the slope b
    ref = {L: _lifetimes(L, 81.60, 250, thresholds) for L in (4, 6, 8)}
    taus = [ref[L][0.5][0] for L in (4, 6, 8)]
    monotone = all(a <= b for a, b in zip(taus, taus[1:])) and taus[-1] > taus[0]
    b_positive = True
    for th in thresholds:
        fit = mb.scaling_fit([(L, ref[L][th][0], ref[L][th][1]) for L in (4, 6, 8)],
                             threshold=th, censored_mode="lower-bound")
        b_positive &= fit.b > 0

    # slope comparison on a grid where lifetimes resolve at desk scale
    cmp_8160 = {L: _lifetimes(L, 81.60, 3000, (0.5,)) for L in (2, 3, 4)}
    cmp_13 = {L: _lifetimes(L, alpha13, 3000, (0.5,)) for L in (2, 3, 4)}
    b_ref = mb.scaling_fit([(L, *cmp_8160[L][0.5]) for L in (2, 3, 4)]).b
    b_13 = mb.scaling_fit([(L, *cmp_13[L][0.5]) for L in (2, 3, 4)],
                          censored_mode="lower-bound").b
    ok = monotone and b_positive and b_13 > b_ref
    _gate(12, ok, f"tau nondecreasing over L = 4, 6, 8 at alpha 81.60 {taus}, "
          "b > 0 for thresholds 0.3-0.7, and the root-13 slope exceeds it "
          f"(b {b_13:.2f} > {b_ref:.2f})")


def test_criterion_13_j0_factorization(root_table):
    alpha1 = root_table[0].alpha_n
    params = mb.ChainParams(L=4, alpha=alpha1, J=0.0)
    psi0 = mb.build_initial_state(4, polarization="x")
    ev = mb.evolve_chain(params, psi0, 20, samples_per_period=8, tol=1e-11)

    two = GlideModelParams(alpha=alpha1)
    single = mb.build_initial_state(1, polarization="x")
    states = integrate_schrodinger(
        lambda t, p: apply_hamiltonian(two, t, p), single,
        TimeGrid(0.0, 20 * two.period, 21), tol=1e-12)
    mx_two = np.array([float(np.vdot(s, np.array([s[1], s[0]])).real)
                       for s in states])
    worst = float(np.max(np.abs(ev.stroboscopic_mx - mx_two)))
    _gate(13, worst <= 1e-5, "J = 0 chain reproduces the exact two-level "
          f"stroboscopic envelope within 1e-5 (worst {worst:.2e})")


def test_criterion_14_matrix_free_oracle(rng):
    worst = 0.0
    for _ in range(100):
        L = int(rng.integers(2, 6))
        params = mb.ChainParams(L=L, alpha=float(rng.uniform(1.0, 40.0)),
                                J=float(rng.uniform(-0.5, 0.5)),
                                mu=("x", "y", "z")[int(rng.integers(3))],
                                boundary=("open", "periodic")[int(rng.integers(2))],
                                perturbation_z=float(rng.uniform(-0.1, 0.1)))
        t = float(rng.uniform(0.0, params.period))
        psi = rng.normal(size=params.dim) + 1j * rng.normal(size=params.dim)
        dense = _dense_chain_hamiltonian(params, t) @ psi
        free = mb.apply_chain_hamiltonian(params, t, psi)
        worst = max(worst, float(np.max(np.abs(dense - free))))
    _gate(14, worst <= 1e-12, "matrix-free chain action equals the dense "
          f"construction on 100 random cases, L <= 5 (worst {worst:.2e})")
