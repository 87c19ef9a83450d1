"""Command line front end: spectra, curves, eigencharges, TMS solutions, checks.

Examples:
    efimov-tms spectrum --beta 1 --n -2..2
    efimov-tms gamma --variant canonical --s 0
    efimov-tms eigenfunction --beta 1 --n 3 --format json --out rho.json
    efimov-tms verify
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from . import checks
from . import spectrum as SP
from .config import DEFAULT, QuadratureConfig, geometric_grid
from .mellin import apply_theta_operator
from .specfun import (KernelKind, SpectralCurve, Variant, eval_gamma, get_s0,
                      kernel_pair, kernel_x)

SCHEMAS = {
    "spectrum": ("beta", "n", "energy", "ratio"),
    "gamma": ("s", "value"),
    "eigenfunction": ("p", "f", "rho"),
    "tms": ("x", "theta", "residual"),
    "kernels": ("kind", "s", "closed_form", "fft", "abs_error"),
    "verify": ("check", "measured", "bound", "pass"),
}

TOLERANCES = {
    "s0_residual": 1e-12,
    "diagonalization": 1e-5,
    "eigen_residual": 1e-4,
    "tms_residual": 1e-5,
    "normalization": 1e-8,
}

UNITS = "hbar = m = 1; energies of the internal three-body Hamiltonian"


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return str(v)


def emit_table(rows, schema, fmt="csv", meta=None) -> bytes:
    """Serialize rows deterministically (fixed columns, 17 significant digits, LF)."""
    cols = SCHEMAS[schema] if isinstance(schema, str) else tuple(schema)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue().encode()
    if fmt == "json":
        env = {"version": __version__, "s0": get_s0(), "tolerances": TOLERANCES,
               "grid": DEFAULT.as_dict(), "units": UNITS}
        if meta:
            env.update(meta)
        env["columns"] = list(cols)
        env["rows"] = [[_json_value(v) for v in r] for r in rows]
        return (json.dumps(env, indent=1, sort_keys=True) + "\n").encode()
    raise UsageError("unknown format %r" % fmt)


# -- argument parsing ------------------------------------------------------------

def _n_range(text):
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        n = int(text)
        return n, n
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or a range a..b, got %r" % text)


def _curve(variant, sigma):
    v = Variant(variant)
    if v in (Variant.MINLOS_FADDEEV, Variant.HIGH_ENERGY):
        if sigma is None:
            raise UsageError("--sigma is required for regularized variants")
        return SpectralCurve(v, sigma)
    return SpectralCurve(v)


def build_parser():
    ap = argparse.ArgumentParser(prog="efimov-tms", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--beta", type=float, default=1.0)
        p.add_argument("--sigma", type=float, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--n", type=_n_range, default=None)
        p.add_argument("--variant", choices=[v.value for v in Variant], default="canonical")
        p.add_argument("--grid-pmin", type=float, default=None)
        p.add_argument("--grid-pmax", type=float, default=None)
        p.add_argument("--grid-pn", type=int, default=None)
        p.add_argument("--grid-x", type=float, default=None, help="half-width of the x grid")
        p.add_argument("--grid-xn", type=int, default=None, help="number of x nodes")
        return p

    common(sub.add_parser("spectrum", help="Efimov energies E(beta, n)"))
    g = common(sub.add_parser("gamma", help="gamma-type curves of s"))
    g.add_argument("--s", type=float, default=None, help="single s value")
    g.add_argument("--s-min", type=float, default=-10.0)
    g.add_argument("--s-max", type=float, default=10.0)
    g.add_argument("--s-step", type=float, default=0.01)
    common(sub.add_parser("eigenfunction", help="eigencharge and radial distribution"))
    t = common(sub.add_parser("solve-tms", help="solve the radial TMS equation for a bump datum"))
    t.add_argument("--c", type=float, default=0.0, help="coefficient of sin(s0 x)")
    t.add_argument("--width", type=float, default=5.0, help="support half-width of the datum")
    common(sub.add_parser("kernels", help="FFT check of the Fourier kernel pairs"))
    common(sub.add_parser("verify", help="run the invariant suite"))
    return ap


def _config(args):
    kw = {}
    if args.grid_x is not None:
        kw["x_max"] = args.grid_x
        kw["x_interior"] = min(DEFAULT.x_interior, 0.625 * args.grid_x)
    if args.grid_xn is not None:
        kw["x_n"] = args.grid_xn
    if args.grid_pmin is not None:
        kw["p_min"] = args.grid_pmin
    if args.grid_pmax is not None:
        kw["p_max"] = args.grid_pmax
    if args.grid_pn is not None:
        kw["p_n"] = args.grid_pn
    return QuadratureConfig(**kw) if kw else DEFAULT


# -- commands ------------------------------------------------------------------------

def cmd_spectrum(args):
    n_min, n_max = args.n if args.n is not None else (-2, 2)
    rows = []
    for lv in SP.efimov_levels(args.beta, n_min, n_max):
        nxt = SP.level_energy(args.beta, lv.n + 1, lv.s0)
        rows.append((lv.beta, lv.n, lv.energy, nxt / lv.energy))
    return rows, {"efimov_ratio": math.exp(2 * math.pi / get_s0())}, 0


def cmd_gamma(args):
    curve = _curve(args.variant, args.sigma)
    if args.s is not None:
        s = np.array([args.s])
    else:
        if args.s_step <= 0 or args.s_max < args.s_min:
            raise UsageError("bad s range")
        k = int(round((args.s_max - args.s_min) / args.s_step))
        s = args.s_min + args.s_step * np.arange(k + 1)
    vals = eval_gamma(curve, s)
    return list(zip(s, vals)), {"variant": curve.variant.value, "sigma": curve.sigma}, 0


def cmd_eigenfunction(args):
    n = args.n[0] if args.n is not None else 0
    level = SP.efimov_levels(args.beta, n, n)[0]
    if args.grid_pmin is None and args.grid_pmax is None and args.grid_pn is None:
        p, w = SP.level_grid(level)
    else:
        k = math.sqrt(level.binding)
        p, w = geometric_grid(args.grid_pmin if args.grid_pmin is not None else 1e-6 * k,
                              args.grid_pmax if args.grid_pmax is not None else 1e10 * k,
                              args.grid_pn if args.grid_pn is not None else 4096)
    f = SP.eigencharge(level, p, w, "unit-rho").profile
    rho = SP.radial_distribution(level, p, w)
    meta = {"beta": level.beta, "n": level.n, "energy": level.energy,
            "weights": "trapezoid in log p: w_i = p_i * dlogp, halved at the ends"}
    return list(zip(p, f.values, rho.values)), meta, 0


def cmd_solve_tms(args):
    cfg = _config(args)
    rng = np.random.default_rng(args.seed)
    datum = SP.bump_datum(rng.normal(size=3), args.width, args.lam, cfg)
    sol = SP.tms_solve(args.lam, datum, args.c, cfg)
    lhs = apply_theta_operator(SpectralCurve.canonical(), sol.theta, cfg).theta_out.values
    m = sol.theta.interior(cfg.x_interior)
    res = np.abs(lhs - datum.values)
    rows = list(zip(sol.theta.x[m], np.real(sol.theta.values[m]), res[m]))
    return rows, {"max_residual": sol.residual, "lambda": args.lam, "c": args.c}, 0


def cmd_kernels(args):
    n = args.grid_xn or 2 ** 16
    L = args.grid_x or 40.0
    h = 2 * L / n
    x = (np.arange(n) - n // 2) * h
    s = 2 * np.pi * (np.arange(n) - n // 2) / (n * h)
    m = np.abs(s) <= 8
    rows = []
    for kind in KernelKind:
        v = kernel_x(kind, x, h)
        F = (h / math.sqrt(2 * math.pi) * np.fft.fftshift(np.fft.fft(np.fft.ifftshift(v)))).real
        exact = kernel_pair(kind, s[m])
        rows += [(kind.value, a, b, c, abs(b - c)) for a, b, c in zip(s[m], exact, F[m])]
    return rows, {}, 0


def cmd_verify(args):
    res = checks.run_all(args.seed)
    rows = [(c.name, c.measured, c.bound, c.passed) for c in res]
    failed = [c for c in res if not c.passed]
    for c in failed:
        print("FAILED %s: measured %.6g, bound %.6g" % (c.name, c.measured, c.bound), file=sys.stderr)
    return rows, {"n_checks": len(res), "n_failed": len(failed)}, 1 if failed else 0


COMMANDS = {"spectrum": cmd_spectrum, "gamma": cmd_gamma, "eigenfunction": cmd_eigenfunction,
            "solve-tms": cmd_solve_tms, "kernels": cmd_kernels, "verify": cmd_verify}
SCHEMA_OF = {"solve-tms": "tms"}


def _join_negative_values(argv):
    # let "--n -2..2" through argparse, which otherwise reads -2..2 as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a == "--n" and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2].isdigit():
            out.append("--n=" + argv[i + 1])
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv=None, stdout=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = ap.parse_args(_join_negative_values(argv))
    try:
        rows, meta, status = COMMANDS[args.command](args)
        meta = dict(meta, command=args.command, grid=_config(args).as_dict())
        data = emit_table(rows, SCHEMA_OF.get(args.command, args.command), args.format, meta)
    except (UsageError, ValueError) as e:
        ap.print_usage(sys.stderr)
        print("%s: error: %s" % (ap.prog, e), file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        out = stdout if stdout is not None else sys.stdout.buffer
        try:
            out.write(data)
            out.flush()
        except BrokenPipeError:
            pass
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
