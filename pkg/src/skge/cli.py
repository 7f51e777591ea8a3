"""Command-line front end: ``skge kernel``, ``skge solve`` and ``skge verify``.

Exit codes: 0 success, 2 usage or configuration error, 3 accuracy shortfall
(output is still written, with failed cells flagged), 4 solver failure.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings

import numpy as np

from .boundary import parse_boundary
from .bvp_solver import (FieldEvaluator, GridSpec, KernelSpec, solve_halfplane,
                         solve_halfplane_general, solve_strip, solve_strip_general)
from .errors import AccuracyError, DomainError, SKGEError, SeriesDivergenceError, SingularityError
from .fields import FieldGrid
from .general_elliptic import (EllipticCoefficients, green_halfplane_general,
                               green_halfplane_general_closed, green_strip_general)
from .halfplane_kernel import green_halfplane_closed, green_halfplane_integral
from .strip_kernel import (green_strip, green_strip_integral, green_strip_laplace,
                           green_strip_series, green_strip_via_j1)

log = logging.getLogger("skge")

EXIT_OK, EXIT_CONFIG, EXIT_ACCURACY, EXIT_SOLVER = 0, 2, 3, 4

COEFF_PRESETS = {
    "canonical": dict(sigma1=1.0, sigma2=1.0),
    "anisotropic": dict(sigma1=1.0, sigma2=2.0),
    "correlated": dict(sigma1=1.0, sigma2=1.0, rho=0.6),
    "drift_x": dict(sigma1=1.0, sigma2=1.0, alpha1=0.5),
    "drift_y": dict(sigma1=1.0, sigma2=1.0, alpha2=0.5),
    "mixed": dict(sigma1=1.3, sigma2=0.9, rho=-0.4, alpha1=-0.5, alpha2=0.7),
}


class ConfigError(Exception):
    pass


# --------------------------------------------------------------------------
# parsing helpers

def parse_grid(text):
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError("--grid needs x_min,x_max,nx,y_min,y_max,ny")
    try:
        x0, x1, y0, y1 = (float(parts[i]) for i in (0, 1, 3, 4))
        nx, ny = int(parts[2]), int(parts[5])
    except ValueError:
        raise ConfigError(f"cannot parse --grid {text!r}") from None
    try:
        return GridSpec(x0, x1, nx, y0, y1, ny)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def parse_coefficients(text, r, width):
    """``canonical`` or another preset name, or ``sigma1,sigma2,rho,alpha1,alpha2``."""
    if text is None:
        return None
    if text in COEFF_PRESETS:
        kw = dict(COEFF_PRESETS[text])
    else:
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise ConfigError(f"cannot parse --coeffs {text!r}") from None
        if len(vals) != 5:
            raise ConfigError("--coeffs needs a preset name or sigma1,sigma2,rho,alpha1,alpha2")
        kw = dict(zip(("sigma1", "sigma2", "rho", "alpha1", "alpha2"), vals))
    try:
        return EllipticCoefficients(r=r, width=width, **kw)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


# --------------------------------------------------------------------------
# output

def field_to_csv(field):
    """CSV text with header ``x,y,value,err_est``; rows run over x within each y."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "value", "err_est"])
    for i, y in enumerate(field.ys):
        for j, x in enumerate(field.xs):
            w.writerow([_fmt(x), _fmt(y), _fmt(field.values[i, j]),
                        _fmt(field.err_estimates[i, j])])
    return buf.getvalue()


def _fmt(v):
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


def read_csv_field(path):
    """Inverse of :func:`field_to_csv`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["x", "y", "value", "err_est"]:
        raise ValueError("unexpected CSV header")
    data = np.array([[float(c) for c in row] for row in rows[1:]])
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    vals = data[:, 2].reshape(ys.size, xs.size)
    errs = data[:, 3].reshape(ys.size, xs.size)
    return FieldGrid(xs, ys, vals, errs)


def field_to_json(field, metadata):
    def clean(a):
        return [[None if not math.isfinite(v) else float(v) for v in row] for row in a]
    return json.dumps({"xs": field.xs.tolist(), "ys": field.ys.tolist(),
                       "values": clean(field.values), "err_estimates": clean(field.err_estimates),
                       "failed": field.failed.tolist(), "partial": field.partial,
                       "metadata": metadata}, indent=2)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_field(args, field, metadata):
    if args.format == "json":
        _write(args.out, field_to_json(field, metadata))
    else:
        _write(args.out, field_to_csv(field))


# --------------------------------------------------------------------------
# kernel

def _kernel_function(args, coeffs):
    rep, r, tol = args.rep, args.r, args.tol
    if coeffs is not None:
        if args.domain == "strip":
            if rep not in ("auto", "series"):
                raise ConfigError("general strip kernel supports --rep auto or series")
            return lambda x, y: green_strip_general(x, y, coeffs, tol, full_output=True)
        if rep in ("auto", "closed"):
            return lambda x, y: (green_halfplane_general_closed(x, y, coeffs), 0.0)
        if rep == "integral":
            return lambda x, y: green_halfplane_general(x, y, coeffs, tol, full_output=True)
        raise ConfigError(f"--rep {rep} is not available for the general half-plane")
    if args.domain == "strip":
        table = {
            "auto": lambda x, y: green_strip(x, y, r, tol, full_output=True),
            "series": lambda x, y: green_strip_series(x, y, r, tol, full_output=True),
            "integral": lambda x, y: green_strip_integral(x, y, r, tol, full_output=True),
            "j1": lambda x, y: green_strip_via_j1(x, y, r, tol, full_output=True),
        }
        if rep == "closed":
            if r != 0:
                raise ConfigError("the strip closed form exists only for r = 0")
            return lambda x, y: (green_strip_laplace(x, y), 0.0)
        return table[rep]
    if rep in ("auto", "closed"):
        return lambda x, y: (green_halfplane_closed(x, y, r), 0.0)
    if rep == "integral":
        return lambda x, y: green_halfplane_integral(x, y, r, tol, full_output=True)
    raise ConfigError(f"--rep {rep} is not available on the half-plane")


def cmd_kernel(args):
    coeffs = parse_coefficients(args.coeffs, args.r, args.width)
    grid = parse_grid(args.grid)
    height = math.inf if args.domain == "halfplane" else (args.width if coeffs else math.pi)
    xs, ys = grid.xs, grid.ys
    if ys[0] < 0 or ys[-1] > height:
        raise ConfigError(f"grid heights must lie in [0, {height}]")
    func = _kernel_function(args, coeffs)
    vals = np.full((ys.size, xs.size), np.nan)
    errs = np.full_like(vals, np.nan)
    failed = np.zeros(vals.shape, dtype=bool)
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            try:
                v, e = func(float(x), float(y))
                vals[i, j], errs[i, j] = v, e
            except (SingularityError, SeriesDivergenceError) as exc:
                log.warning("(%g, %g): %s; cell set to nan", x, y, exc)
            except AccuracyError as exc:
                vals[i, j], errs[i, j] = exc.estimate, exc.achieved_error
                failed[i, j] = True
                log.warning("(%g, %g): %s", x, y, exc)
    field = FieldGrid(xs, ys, vals, errs, failed)
    _emit_field(args, field, {"subcommand": "kernel", "domain": args.domain, "rep": args.rep,
                              "r": args.r, "tol": args.tol, "coeffs": args.coeffs})
    return EXIT_ACCURACY if field.partial else EXIT_OK


# --------------------------------------------------------------------------
# solve

def cmd_solve(args):
    coeffs = parse_coefficients(args.coeffs, args.r, args.width)
    grid = parse_grid(args.grid)
    try:
        phi = parse_boundary(args.boundary)
        top = parse_boundary(args.top) if args.top else None
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if top is not None and (args.domain != "strip" or coeffs is not None):
        raise ConfigError("--top is only supported on the canonical strip")
    kw = dict(tol=args.tol, threads=args.threads)
    if coeffs is None:
        if args.domain == "strip":
            field = solve_strip(phi, top, grid, args.r, **kw)
        else:
            field = solve_halfplane(phi, grid, args.r, **kw)
    elif args.domain == "strip":
        field = solve_strip_general(phi, grid, coeffs, **kw)
    else:
        field = solve_halfplane_general(phi, grid, coeffs, **kw)
    _emit_field(args, field, {"subcommand": "solve", "domain": args.domain,
                              "boundary": args.boundary, "top": args.top, "r": args.r,
                              "tol": args.tol, "coeffs": args.coeffs})
    if field.partial:
        log.warning("%d cells missed the tolerance", int(field.failed.sum()))
        return EXIT_ACCURACY
    return EXIT_OK


# --------------------------------------------------------------------------
# verify

def cmd_verify(args):
    from . import suites

    names = suites.SUITES if args.suite == "all" else [args.suite]
    out = {"suites": {}, "passed": True}
    for name in names:
        reports = suites.run_suite(name, r=args.r, coeffs=args.coeffs)
        ok = all(rep.passed for rep in reports)
        out["suites"][name] = {"passed": ok, "reports": [rep.to_dict() for rep in reports]}
        out["passed"] = out["passed"] and ok
        for rep in reports:
            log.info(rep.line())
    _write(args.out, json.dumps(out, indent=2) + "\n")
    return EXIT_OK if out["passed"] else EXIT_ACCURACY


# --------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="skge", description=(
        "Green functions and Dirichlet solvers for (Delta - r^2) V = 0 "
        "on the strip and the half-plane."))
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_grid=True):
        sp.add_argument("--domain", choices=("strip", "halfplane"), default="strip")
        sp.add_argument("--r", type=float, default=0.0, help="mass parameter (default 0)")
        sp.add_argument("--coeffs", default=None, help=(
            "general operator: preset (" + ", ".join(COEFF_PRESETS)
            + ") or sigma1,sigma2,rho,alpha1,alpha2"))
        sp.add_argument("--width", type=float, default=math.pi,
                        help="strip width for the general operator (default pi)")
        if need_grid:
            sp.add_argument("--grid", required=True, help="x_min,x_max,nx,y_min,y_max,ny")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--out", default="-", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads for grid evaluation")

    k = sub.add_parser("kernel", help="evaluate a Green kernel on a grid")
    common(k)
    k.add_argument("--rep", choices=("auto", "series", "integral", "closed", "j1"),
                   default="auto")
    k.set_defaults(func=cmd_kernel)

    s = sub.add_parser("solve", help="solve a Dirichlet problem on a grid")
    common(s)
    s.add_argument("--boundary", required=True,
                   help="boundary data, e.g. gaussian:mu=0,sigma=1 or step")
    s.add_argument("--top", default=None, help="data on y = pi (canonical strip only)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run oracle suites and write a JSON report")
    v.add_argument("--suite", choices=("reps", "mass", "g3914", "meanvalue", "fdoracle", "all"),
                   default="all")
    v.add_argument("--r", type=float, default=None, help="restrict suites to one r")
    v.add_argument("--coeffs", default=None,
                   help="coefficient preset for the fdoracle suite (default: all presets)")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "tol", 1.0) is not None and getattr(args, "tol", 1.0) <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except AccuracyError as exc:
        log.error("%s", exc)
        return EXIT_ACCURACY
    except DomainError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except SKGEError as exc:
        log.error("%s", exc)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
