# src/main.py
"""
Command-line front end.

    python src/main.py list
    python src/main.py verify MEHLER --points 25 --seed 7
    python src/main.py verify --all --points 3 --seed 1 --report
    python src/main.py eval qbinom --n 2 --k 1 --q 0.5
    python src/main.py expand grid.json --alpha 0.3 --q 0.5

Sweeps print one JSON object per line; eval and expand print a single object.
Exit codes: 0 success, 1 failing verification point, 2 usage or parse error,
3 pole or non-convergence, 4 grid not in the q-PDE kernel.
"""

import argparse
import json
import sys

from config import DEFAULT_Q, EPS, EXPANSION_TOL, OUTPUT_DIR, POINTS, POLE_MARGIN, RADIUS, SEED
from contour import askey_wilson
from errors import (
    DomainError,
    GridInconsistent,
    InvalidContext,
    NonConvergence,
    NotInKernel,
    PoleParameter,
    UnknownIdentity,
)
from expansion import eval_expansion, expand_in_hahn, load_grid
from hyperseries import PhiSpec, phi
from identities import get_identity, registry
from observability import log
from polynomials import hahn, hahn_hom, rogers_szego, w_poly
from qarith import INF, QContext, qbinom, qpoch_finite, qpoch_inf
from qintegral import jackson, weight
from report_generator import generate_html_report, write_reports_csv
from verify import summarize, sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_NOT_IN_KERNEL = 4


# -----------------------
# Argument types
# -----------------------
def complex_arg(text: str) -> complex:
    """Accept 0.3, 0.3+0.1j, 0.3+0.1i or re,im."""
    text = text.strip()
    try:
        if "," in text:
            re_part, im_part = text.split(",", 1)
            return complex(float(re_part), float(im_part))
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def complex_list(text: str):
    if not text.strip():
        return []
    return [complex_arg(part) for part in text.split(";")]


def unit_radius(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"radius must lie in (0, 1), got {value}")
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def order_arg(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    return nonneg_int(text)


def tolerance_override(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected ID=VALUE, got {text!r}")
    identity_id, value = text.split("=", 1)
    return identity_id.strip(), positive_float(value)


# -----------------------
# Output
# -----------------------
def pair(value):
    value = complex(value)
    return [value.real, value.imag]


def emit(obj, stream):
    stream.write(json.dumps(obj) + "\n")


def series_payload(kind, result):
    return {
        "kind": kind,
        "value": pair(result.value),
        "err_est": result.err_est,
        "terms_used": getattr(result, "terms_used", getattr(result, "nodes_used", None)),
        "converged": result.converged,
    }


def make_context(args) -> QContext:
    q = args.q if args.q is not None else DEFAULT_Q
    return QContext(q=q, eps=args.eps)


# -----------------------
# Commands
# -----------------------
def cmd_list(args, out) -> int:
    for identity_id in registry():
        out.write(f"{identity_id:22s} {get_identity(identity_id).anchor}\n")
    return EXIT_OK


def _tolerances(args):
    overrides = dict(args.tolerance or [])
    for identity_id in overrides:
        get_identity(identity_id)
    return overrides


def cmd_verify(args, out) -> int:
    if args.all == bool(args.identity):
        raise argparse.ArgumentTypeError("give exactly one of IDENTITY or --all")
    overrides = _tolerances(args)
    ctx = QContext(eps=args.eps)
    ids = registry() if args.all else [args.identity]
    for identity_id in ids:
        get_identity(identity_id)

    reports_by_id = {}
    for identity_id in ids:
        reports = sweep(
            identity_id,
            args.points,
            args.seed,
            ctx,
            radius=args.radius,
            pole_margin=args.pole_margin,
            q=args.q,
            tolerance=overrides.get(identity_id),
            progress=args.progress,
        )
        reports_by_id[identity_id] = reports
        for report in reports:
            emit(report.to_json(), out)

    summary = summarize(reports_by_id)
    if args.all:
        emit(summary.to_json(), out)
    if args.report:
        write_reports_csv(reports_by_id, args.output_dir)
        generate_html_report(reports_by_id, summary, args.output_dir)
    return EXIT_OK if summary.total_pass else EXIT_FAILED


def cmd_eval(args, out) -> int:
    ctx = make_context(args)
    kind = args.kind
    if kind == "qpoch":
        if args.n == INF:
            result = qpoch_inf(args.a, ctx)
            result.require("(a;q)_inf")
            emit(series_payload(kind, result), out)
        else:
            emit({"kind": kind, "value": pair(qpoch_finite(args.a, args.n, ctx))}, out)
        return EXIT_OK
    if kind == "qbinom":
        value = {"kind": kind, "value": pair(qbinom(args.n, args.k, ctx))}
    elif kind == "hahn":
        value = {"kind": kind, "value": pair(hahn(args.n, args.alpha, args.x, ctx))}
    elif kind == "hahn_hom":
        value = {"kind": kind, "value": pair(hahn_hom(args.n, args.alpha, args.x, args.y, ctx))}
    elif kind == "rs":
        value = {"kind": kind, "value": pair(rogers_szego(args.n, args.x, args.y, ctx))}
    elif kind == "w":
        value = {"kind": kind, "value": pair(w_poly(args.n, args.a, args.b, args.u, args.v, ctx))}
    else:
        if kind == "phi":
            result = phi(PhiSpec.balanced(args.upper, args.lower, args.z), ctx)
        elif kind == "jackson":
            integrand = weight(args.numer, args.denom, args.u, args.v, ctx, power=args.moment)
            result = jackson(integrand, args.u, args.v, ctx)
        else:
            result = askey_wilson(args.a, args.b, args.c, args.d, ctx)
        result.require(kind)
        value = series_payload(kind, result)
    emit(value, out)
    return EXIT_OK


def cmd_expand(args, out) -> int:
    grid = load_grid(args.grid)
    q = args.q if args.q is not None else DEFAULT_Q
    ctx = QContext(q=q, eps=args.eps)
    expansion = expand_in_hahn(grid, args.alpha, ctx.q, tol=args.tol)
    payload = {
        "alpha": pair(expansion.alpha),
        "order": expansion.order,
        "lambdas": [pair(lam) for lam in expansion.lambdas],
    }
    if args.at is not None:
        x, y = args.at
        payload["at"] = [pair(x), pair(y)]
        payload["expansion_value"] = pair(eval_expansion(expansion, x, y, ctx))
        payload["grid_value"] = pair(grid.evaluate(x, y))
    emit(payload, out)
    return EXIT_OK


# -----------------------
# Parser
# -----------------------
def _add_numeric(p, q_default=None):
    p.add_argument("--q", type=complex_arg, default=q_default, help="base q, |q| < 1")
    p.add_argument("--eps", type=positive_float, default=EPS, help="target relative truncation error")


def _add_eval_kinds(sub):
    kinds = sub.add_subparsers(dest="kind", required=True)

    p = kinds.add_parser("qpoch", help="(a;q)_n, n may be 'inf'")
    p.add_argument("--a", type=complex_arg, required=True)
    p.add_argument("--n", type=order_arg, required=True)

    p = kinds.add_parser("qbinom", help="Gaussian binomial [n k]_q")
    p.add_argument("--n", type=nonneg_int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = kinds.add_parser("hahn", help="Phi_n^(alpha)(x|q)")
    p.add_argument("--n", type=nonneg_int, required=True)
    p.add_argument("--alpha", type=complex_arg, required=True)
    p.add_argument("--x", type=complex_arg, required=True)

    p = kinds.add_parser("hahn_hom", help="Phi_n^(alpha)(x, y|q)")
    p.add_argument("--n", type=nonneg_int, required=True)
    p.add_argument("--alpha", type=complex_arg, required=True)
    p.add_argument("--x", type=complex_arg, required=True)
    p.add_argument("--y", type=complex_arg, required=True)

    p = kinds.add_parser("rs", help="Rogers-Szego h_n(x, y|q)")
    p.add_argument("--n", type=nonneg_int, required=True)
    p.add_argument("--x", type=complex_arg, required=True)
    p.add_argument("--y", type=complex_arg, required=True)

    p = kinds.add_parser("w", help="W_n(a, b, u, v|q)")
    p.add_argument("--n", type=nonneg_int, required=True)
    for name in ("a", "b", "u", "v"):
        p.add_argument(f"--{name}", type=complex_arg, required=True)

    p = kinds.add_parser("phi", help="basic hypergeometric series, lists separated by ';'")
    p.add_argument("--upper", type=complex_list, required=True)
    p.add_argument("--lower", type=complex_list, default=[])
    p.add_argument("--z", type=complex_arg, required=True)

    p = kinds.add_parser("jackson", help="int_u^v (qx/u, qx/v, numer x)/(denom x) x^moment d_q x")
    p.add_argument("--u", type=complex_arg, required=True)
    p.add_argument("--v", type=complex_arg, required=True)
    p.add_argument("--numer", type=complex_list, default=[])
    p.add_argument("--denom", type=complex_list, default=[])
    p.add_argument("--moment", type=nonneg_int, default=0)

    p = kinds.add_parser("aw", help="Askey-Wilson integral by quadrature")
    for name in ("a", "b", "c", "d"):
        p.add_argument(f"--{name}", type=complex_arg, required=True)

    for choice in kinds.choices.values():
        _add_numeric(choice)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcalc", description="q-calculus evaluation and identity verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="registered identities")
    p.set_defaults(handler=cmd_list)

    p = sub.add_parser("verify", help="sweep one identity or all of them")
    p.add_argument("identity", nargs="?", help="identity id (see 'list')")
    p.add_argument("--all", action="store_true")
    p.add_argument("--points", type=nonneg_int, default=POINTS)
    p.add_argument("--seed", type=nonneg_int, default=SEED)
    p.add_argument("--radius", type=unit_radius, default=RADIUS)
    p.add_argument("--pole-margin", type=positive_float, default=POLE_MARGIN)
    p.add_argument("--tolerance", type=tolerance_override, action="append", metavar="ID=VALUE")
    p.add_argument("--output", help="write JSON lines to this file instead of stdout")
    p.add_argument("--report", action="store_true", help="also write CSV and HTML reports")
    p.add_argument("--output-dir", default=OUTPUT_DIR)
    p.add_argument("--progress", action="store_true", help="progress bars on stderr")
    _add_numeric(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a primitive")
    _add_eval_kinds(p)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("expand", help="expand a coefficient grid in Hahn polynomials")
    p.add_argument("grid", help="JSON grid file")
    p.add_argument("--alpha", type=complex_arg, required=True)
    p.add_argument("--tol", type=positive_float, default=EXPANSION_TOL)
    p.add_argument("--at", type=complex_arg, nargs=2, metavar=("X", "Y"))
    _add_numeric(p)
    p.set_defaults(handler=cmd_expand)
    return parser


def _error(exc, stream, **extra):
    emit({"error": type(exc).__name__, "message": str(exc), **extra}, stream)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    stream = out
    handle = None
    if getattr(args, "output", None):
        handle = open(args.output, "w", encoding="utf-8")
        stream = handle
    try:
        return args.handler(args, stream)
    except (NotInKernel, GridInconsistent) as exc:
        extra = {"residual": exc.residual, "tol": exc.tol} if isinstance(exc, NotInKernel) else {}
        _error(exc, stream, **extra)
        return EXIT_NOT_IN_KERNEL
    except (PoleParameter, NonConvergence, OverflowError, DomainError) as exc:
        _error(exc, stream)
        return EXIT_NUMERIC
    except (UnknownIdentity, InvalidContext, argparse.ArgumentTypeError, ValueError, KeyError, OSError) as exc:
        log("cli", "error", "usage_error", error=exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if handle is not None:
            handle.close()


if __name__ == "__main__":
    sys.exit(main())
