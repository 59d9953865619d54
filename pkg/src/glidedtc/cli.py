"""Command-line surface: reproducible experiments and figure-ready datasets.

Every run embeds its configuration, a config hash, and the tool version in
the output header; identical configuration and version produce byte-identical
payload sections. CSV payloads use RFC-4180 quoting, '.' decimals, and 12
significant digits; verdicts and fits are JSON.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, analysis, heun, manybody, model
from .numcore.integrate import IntegrationError, ToleranceError
from .numcore.spectrum import dft

OUTDIR_ENV = "GLIDEDTC_OUTDIR"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _fmt(value):
    """12-significant-digit text for floats; plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.12g" % value
    return str(value)


def _config_dict(args, keys):
    cfg = {k: getattr(args, k) for k in keys}
    cfg["subcommand"] = args.subcommand
    return cfg


def _config_hash(cfg) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _header_lines(cfg, wall_time=None):
    lines = [
        "# tool: glidedtc %s" % __version__,
        "# config: %s" % json.dumps(cfg, sort_keys=True),
        "# config_hash: %s" % _config_hash(cfg),
    ]
    if wall_time is not None:
        lines.append("# wall_time_s: %.3f" % wall_time)
    return lines


def write_csv(path, cfg, columns, rows, wall_time=None):
    """'#'-prefixed config header followed by an RFC-4180 payload."""
    with open(path, "w", newline="") as f:
        for line in _header_lines(cfg, wall_time):
            f.write(line + "\n")
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_json(path, cfg, payload, wall_time):
    envelope = {
        "tool": "glidedtc",
        "version": __version__,
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "wall_time_s": round(wall_time, 3),
        "payload": payload,
    }
    with open(path, "w") as f:
        json.dump(envelope, f, indent=2, sort_keys=True)
        f.write("\n")


def _emit_table(args, cfg, name, columns, rows, wall_time):
    """Write one payload table as CSV or JSON according to --format."""
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    if args.format == "csv":
        path = os.path.join(outdir, name + ".csv")
        write_csv(path, cfg, columns, rows, wall_time)
    else:
        path = os.path.join(outdir, name + ".json")
        payload = {"columns": list(columns),
                   "rows": [[_fmt(v) for v in row] for row in rows]}
        write_json(path, cfg, payload, wall_time)
    return path


def _emit_verdict(args, cfg, name, payload, wall_time):
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name + ".json")
    write_json(path, cfg, payload, wall_time)
    return path


# ---------------------------------------------------------------- subcommands

def cmd_roots(args):
    cfg = _config_dict(args, ("n_max", "tol", "seed"))
    t0 = time.perf_counter()
    entries = analysis.find_roots(args.n_max, refine_tol=args.tol)
    rows = [(e.n, e.alpha_n, e.theta_n, e.residual) for e in entries]
    path = _emit_table(args, cfg, "roots",
                       ("n", "alpha_n", "theta_n", "residual_modulus"),
                       rows, time.perf_counter() - t0)
    print(path)
    return EXIT_OK


def cmd_rho_curve(args):
    if args.steps < 1:
        raise ValueError("steps must be >= 1")
    if args.alpha_min < 0 or args.alpha_max < args.alpha_min:
        raise ValueError("need 0 <= alpha-min <= alpha-max")
    cfg = _config_dict(args, ("alpha_min", "alpha_max", "steps", "tol", "seed"))
    t0 = time.perf_counter()
    if args.steps == 1:
        alphas = np.array([args.alpha_min])
    else:
        alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    rows = []
    for a in alphas:
        rho = heun.remain_probability(float(a), tol=args.tol)
        rho_bessel = abs(heun.bessel_asymptotic(float(a))) ** 2 if a > 0 else 1.0
        rows.append((float(a), rho, rho_bessel))
    path = _emit_table(args, cfg, "rho_curve",
                       ("alpha", "rho_exact", "rho_bessel"),
                       rows, time.perf_counter() - t0)
    print(path)
    return EXIT_OK


def cmd_strobo(args):
    try:
        psi0 = np.array([complex(c) for c in args.psi0], dtype=complex)
    except ValueError as exc:
        raise ValueError(f"psi0 components must parse as complex numbers: {exc}")
    nrm = np.linalg.norm(psi0)
    if nrm < 1e-12:
        raise ValueError("psi0 must be nonzero")
    psi0 = psi0 / nrm
    cfg = _config_dict(args, ("alpha", "psi0", "n_periods", "tol", "seed"))
    t0 = time.perf_counter()
    records = analysis.stroboscopic_projections(args.alpha, psi0,
                                                args.n_periods, tol=args.tol)
    verdict = analysis.classify_periodicity(records)
    wall = time.perf_counter() - t0
    rows = [(r.n, r.a_plus, r.a_minus) for r in records]
    path = _emit_table(args, cfg, "strobo", ("n", "a_plus", "a_minus"), rows, wall)
    vpath = _emit_verdict(args, cfg, "strobo_verdict", {
        "kind": verdict.kind,
        "cluster_count": verdict.cluster_count,
        "coverage_fraction": verdict.coverage_fraction,
    }, wall)
    print(path)
    print(vpath)
    return EXIT_OK


def cmd_manybody(args):
    params = manybody.ChainParams(L=args.L, alpha=args.alpha, J=args.J,
                                  mu=args.mu, boundary=args.boundary,
                                  perturbation_z=args.perturbation_z)
    cfg = _config_dict(args, ("L", "alpha", "J", "mu", "boundary",
                              "perturbation_z", "n_periods",
                              "samples_per_period", "threshold", "tol", "seed"))
    t0 = time.perf_counter()
    psi0 = manybody.build_initial_state(args.L, polarization="x")
    if args.n_periods == 0:
        series_rows, spectrum_rows, env_rows = [], [], []
        life = {"tau_periods": None, "censored": None, "threshold": args.threshold}
    else:
        ev = manybody.evolve_chain(params, psi0, args.n_periods,
                                   samples_per_period=args.samples_per_period,
                                   tol=args.tol)
        series_rows = list(zip(ev.series.times, ev.series.values))
        spec = dft(ev.series, omega=params.omega)
        spectrum_rows = list(zip(spec.frequencies, spec.magnitudes))
        Z = manybody.envelope_Z(ev.stroboscopic_mx)
        env_rows = list(enumerate(Z))
        tau, censored = manybody.lifetime(Z, threshold=args.threshold)
        life = {"tau_periods": tau, "censored": censored,
                "threshold": args.threshold}
    wall = time.perf_counter() - t0
    paths = [
        _emit_table(args, cfg, "manybody_series", ("t", "m_x"), series_rows, wall),
        _emit_table(args, cfg, "manybody_spectrum",
                    ("frequency_over_omega", "magnitude"), spectrum_rows, wall),
        _emit_table(args, cfg, "manybody_envelope", ("n", "Z"), env_rows, wall),
        _emit_verdict(args, cfg, "manybody_lifetime", life, wall),
    ]
    for p in paths:
        print(p)
    return EXIT_OK


def _scaling_worker(job):
    """One (L, base params, horizon) lifetime measurement; runs in a worker."""
    L, alpha, J, mu, boundary, horizon, samples_per_period, tol, thresholds = job
    params = manybody.ChainParams(L=L, alpha=alpha, J=J, mu=mu, boundary=boundary)
    psi0 = manybody.build_initial_state(L, polarization="x")
    ev = manybody.evolve_chain(params, psi0, horizon,
                               samples_per_period=samples_per_period, tol=tol)
    Z = manybody.envelope_Z(ev.stroboscopic_mx)
    return L, {th: manybody.lifetime(Z, th) for th in thresholds}


def cmd_scaling(args):
    Ls = sorted(set(args.L))
    if not 0.0 < args.threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    cfg = _config_dict(args, ("L", "alpha", "J", "mu", "boundary", "horizon",
                              "samples_per_period", "threshold", "tol",
                              "workers", "seed"))
    cfg["L"] = Ls
    thresholds = sorted({0.3, args.threshold, 0.7})
    jobs = [(L, args.alpha, args.J, args.mu, args.boundary, args.horizon,
             args.samples_per_period, args.tol, tuple(thresholds)) for L in Ls]
    t0 = time.perf_counter()
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_scaling_worker, jobs))
    else:
        results = [_scaling_worker(j) for j in jobs]
    results.sort(key=lambda r: r[0])  # deterministic ordering regardless of pool
    wall = time.perf_counter() - t0

    rows = [(L, taus[args.threshold][0], taus[args.threshold][1])
            for L, taus in results]
    fit = manybody.scaling_fit(rows, threshold=args.threshold)
    sensitivity = {}
    for th in thresholds:
        entries = [(L, taus[th][0], taus[th][1]) for L, taus in results]
        try:
            sensitivity["%.2f" % th] = manybody.scaling_fit(entries, threshold=th).b
        except ValueError:
            sensitivity["%.2f" % th] = None
    path = _emit_table(args, cfg, "scaling", ("L", "tau_periods", "censored"),
                       rows, wall)
    vpath = _emit_verdict(args, cfg, "scaling_fit", {
        "b": fit.b,
        "intercept": fit.intercept,
        "threshold": fit.threshold,
        "threshold_sensitivity": sensitivity,
    }, wall)
    print(path)
    print(vpath)
    return EXIT_OK


def cmd_winding(args):
    cfg = _config_dict(args, ("alpha", "tol", "seed"))
    t0 = time.perf_counter()
    rows = []
    for a in args.alpha:
        params = model.GlideModelParams(alpha=a)
        nu = model.winding_number(params)
        t_grid = np.linspace(0.0, params.period, 1000)
        chiral = model.chiral_check(params, t_grid)
        rows.append((a, nu, chiral))
    path = _emit_table(args, cfg, "winding",
                       ("alpha", "winding_number", "chiral_residual"),
                       rows, time.perf_counter() - t0)
    print(path)
    return EXIT_OK


# ------------------------------------------------------------------- plumbing

def _apply_config_file(args):
    """--config JSON overrides parsed flag values (keys use underscores)."""
    if not args.config:
        return
    with open(args.config) as f:
        overrides = json.load(f)
    if not isinstance(overrides, dict):
        raise ValueError("--config file must hold a JSON object")
    for key, value in overrides.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise ValueError(f"unknown config key: {key}")
        setattr(args, key, value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=os.environ.get(OUTDIR_ENV, "."),
                        help="output directory (default: $%s or '.')" % OUTDIR_ENV)
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="payload table format")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="integrator / refinement tolerance")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="parallel worker count for sweeps")
    common.add_argument("--seed", type=int, default=0,
                        help="RNG seed recorded with the run")
    common.add_argument("--config", default=None,
                        help="JSON file whose entries override flags")

    parser = argparse.ArgumentParser(
        prog="glidedtc",
        description="Numerical lab for a glide-symmetry-protected discrete time crystal",
    )
    parser.add_argument("--version", action="version",
                        version="glidedtc %s" % __version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("roots", parents=[common],
                       help="resonance roots alpha_n and phases theta_n")
    p.add_argument("--n-max", type=int, default=14)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("rho-curve", parents=[common],
                       help="one-period stay probability versus alpha")
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=90.0)
    p.add_argument("--steps", type=int, default=901)
    p.set_defaults(func=cmd_rho_curve)

    p = sub.add_parser("strobo", parents=[common],
                       help="stroboscopic projections and periodicity verdict")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--psi0", nargs=2, default=("1", "0"), metavar=("C1", "C2"),
                   help="initial state components (complex literals)")
    p.add_argument("--n-periods", type=int, default=300)
    p.set_defaults(func=cmd_strobo)

    p = sub.add_parser("manybody", parents=[common],
                       help="chain evolution: m_x series, spectrum, envelope, lifetime")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--J", type=float, default=0.0)
    p.add_argument("--mu", choices=("x", "y", "z"), default="x")
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    p.add_argument("--perturbation-z", type=float, default=0.0)
    p.add_argument("--n-periods", type=int, default=40)
    p.add_argument("--samples-per-period", type=int, default=16)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_manybody)

    p = sub.add_parser("scaling", parents=[common],
                       help="lifetime-versus-L sweep with exponential fit")
    p.add_argument("--L", type=int, nargs="+", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--J", type=float, default=0.2)
    p.add_argument("--mu", choices=("x", "y", "z"), default="x")
    p.add_argument("--boundary", choices=("open", "periodic"), default="open")
    p.add_argument("--horizon", type=int, default=400)
    p.add_argument("--samples-per-period", type=int, default=8)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("winding", parents=[common],
                       help="half-integer winding number and chiral residual")
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_winding)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return args.func(args)
    except (IntegrationError, ToleranceError, analysis.RootError,
            analysis.NotClosedError, model.DegenerateFieldError,
            FloatingPointError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except RuntimeError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
