"""Command-line front end: ``leastdoubling <subcommand> [flags]``.

Exit status 0 on success, 1 when a computation fails, 2 on invalid input.
Vertices are printed 1-based.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

from .graph import Graph, GraphError, build_named, distance_table, parse_edge_list
from .lp import FeasibilityError
from .measures import Measure, MeasureError, doubling_constant, make_measure, parse_measure_text
from .optimizer import least_doubling
from .pathsolver import (
    CERTIFYING_POLYNOMIALS,
    PathSolverError,
    least_doubling_path,
    poly_residual,
    solve_system,
)
from .roots import RootFindingError
from .spectral import SpectralError, c0_path_closed_form, power_iteration
from .window import n_window_report, z_window_report

log = logging.getLogger("leastdoubling")


class UsageError(Exception):
    """Bad flag values or unreadable input files (exit status 2)."""


COMPUTATION_ERRORS = (FeasibilityError, PathSolverError, RootFindingError, SpectralError)


# --- serialization ----------------------------------------------------------


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 0) -> str:
    """JSON with floats written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, (list, tuple)) and any(isinstance(v, (dict, list, tuple)) for v in obj):
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
    else:
        out.append((prefix, obj))
    return out


def _scalar_text(v) -> str:
    if isinstance(v, float):
        return _float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_scalar_text(x) for x in v)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(payload) + "\n"
    flat = _flatten(payload)
    if fmt == "text":
        return "".join(f"{k}: {_scalar_text(v)}\n" for k, v in flat)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([k for k, _ in flat])
    writer.writerow([_scalar_text(v) for _, v in flat])
    return buf.getvalue()


# --- input specs ------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def parse_graph_spec(spec: str) -> Graph:
    """``path:N | cycle:N | star:N | complete:N | @FILE``."""
    if spec.startswith("@"):
        return parse_edge_list(_read(spec[1:]))
    family, sep, size = spec.partition(":")
    if not sep:
        raise UsageError(f"graph spec {spec!r} must look like family:N or @FILE")
    try:
        n = int(size)
    except ValueError:
        raise UsageError(f"graph size {size!r} is not an integer") from None
    return build_named(family, n)


def parse_measure_spec(spec: str, n: int, alpha: float | None = None) -> Measure:
    """``counting | sine | lambda_alpha:A | @FILE`` on ``n`` vertices."""
    if spec.startswith("@"):
        mu = parse_measure_text(_read(spec[1:]))
        if len(mu) != n:
            raise UsageError(f"measure file has {len(mu)} weights, expected {n}")
        return mu
    kind, sep, arg = spec.partition(":")
    if kind == "lambda_alpha":
        if sep:
            try:
                alpha = float(arg)
            except ValueError:
                raise UsageError(f"alpha {arg!r} is not a number") from None
        if alpha is None:
            raise UsageError("lambda_alpha needs a parameter: lambda_alpha:A or --alpha A")
        return make_measure("lambda_alpha", n, alpha=alpha)
    if sep or kind not in ("counting", "sine"):
        raise UsageError(f"unknown measure spec {spec!r}")
    return make_measure(kind, n)


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"range {text!r} must look like A..B") from None
    if not sep or a < 2 or b < a:
        raise UsageError(f"range {text!r} needs 2 <= A <= B")
    return range(a, b + 1)


def _witness(w, offset: int = 1) -> dict | None:
    if w is None:
        return None
    return {
        "center": w.center + offset,
        "k": w.k,
        "numerator": w.numerator,
        "denominator": w.denominator,
        "ratio": w.ratio,
    }


# --- subcommands ------------------------------------------------------------


def cmd_doubling(args) -> dict:
    g = parse_graph_spec(args.graph)
    mu = parse_measure_spec(args.measure, g.n, args.alpha)
    rep = doubling_constant(distance_table(g), mu, table=args.table)
    witnesses = {
        "c_mu": _witness(rep.witness),
        "c_mu0": None if rep.witness0 is None else rep.witness0 + 1,
    }
    if rep.table is not None:
        witnesses["table"] = [_witness(w) for w in rep.table]
    return {
        "input": {"graph": args.graph, "measure": args.measure, "weights": mu.tolist()},
        "result": {"c_mu": rep.c_mu, "c_mu0": rep.c_mu0},
        "witnesses": witnesses,
        "residuals": {},
    }


def cmd_least(args) -> dict:
    g = parse_graph_spec(args.graph)
    idx = distance_table(g)
    res = least_doubling(idx, tol=args.tol)
    c_min = doubling_constant(idx, res.minimizer).c_mu
    return {
        "input": {"graph": args.graph, "tol": args.tol},
        "result": {
            "c_estimate": res.c_estimate,
            "bracket": list(res.bracket),
            "iterations": res.iterations,
            "constraint_count": res.constraint_count,
        },
        "witnesses": {"minimizer": res.minimizer.normalized("max").tolist(), "minimizer_c": c_min},
        "residuals": {
            "bracket_width": res.bracket[1] - res.bracket[0],
            "minimizer_excess": c_min - res.c_estimate,
        },
    }


def _path_payload(r, tol: float) -> dict:
    residuals = {"boundary": r.boundary_residual, "m1": r.m1_residual, "c_full_gap": abs(r.c_full - r.c)}
    if r.n in CERTIFYING_POLYNOMIALS:
        residuals["poly"] = poly_residual(r.n, r.c)
    result = {
        "n": r.n,
        "c": r.c,
        "c0": c0_path_closed_form(r.n),
        "k_star": r.k_star,
        "validated": r.validated,
        "c_full": r.c_full,
    }
    if r.global_estimate is not None:
        result["global_estimate"] = r.global_estimate
        residuals["cross_check"] = abs(r.global_estimate - r.c)
    return {
        "input": {"n": r.n, "k": r.k_star, "tol": tol},
        "result": result,
        "witnesses": {"weights": r.weights.tolist(), "scan": r.scan_log},
        "residuals": residuals,
    }


def cmd_path(args) -> dict:
    if args.n is None:
        raise UsageError("path needs --n")
    if args.k is not None:
        if args.n < 3:
            raise UsageError("--k needs n >= 3")
        try:
            r = solve_system(args.n, args.k, tol=args.tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if r is None:
            raise PathSolverError(f"no admissible root for n={args.n}, k={args.k}")
    else:
        if args.n < 2:
            raise UsageError("path needs n >= 2")
        r = least_doubling_path(args.n, tol=args.tol, cross_check=args.cross_check)
    return _path_payload(r, args.tol)


def cmd_spectral(args) -> dict:
    g = parse_graph_spec(args.graph)
    res = power_iteration(g, tol=min(args.tol, 1e-12))
    result = {"lambda1": res.lambda1, "c0": 1.0 + res.lambda1, "iterations": res.iterations}
    residuals = {"eigen": res.residual}
    if args.graph.startswith("path:") and g.n >= 2:
        result["c0_closed_form"] = c0_path_closed_form(g.n)
        residuals["closed_form"] = abs(1.0 + res.lambda1 - result["c0_closed_form"])
    return {
        "input": {"graph": args.graph, "tol": args.tol},
        "result": result,
        "witnesses": {"perron": res.perron.tolist()},
        "residuals": residuals,
    }


def cmd_window(args) -> dict:
    if args.width is None:
        raise UsageError("window needs --width")
    if args.width < 2:
        raise UsageError("--width must be >= 2")
    size = 2 * args.width + 1 if args.line == "Z" else args.width
    mu = parse_measure_spec(args.measure, size, args.alpha)
    rep = (z_window_report if args.line == "Z" else n_window_report)(args.width, mu)
    return {
        "input": {"line": args.line, "width": args.width, "measure": args.measure, "weights": mu.tolist()},
        "result": {
            "window": list(rep.window),
            "max_quotient": rep.max_quotient,
            "all_quotients_bounded": rep.all_quotients_bounded,
            "local_constant": rep.local_constant,
            "quotient_count": rep.quotient_count,
        },
        # window coordinates already match the line's labels
        "witnesses": {"max_quotient": _witness(rep.witness, offset=0), "local_constant": rep.local_witness},
        "residuals": {"excess_over_3": rep.max_quotient - 3.0},
    }


def cmd_sweep(args):
    if args.range is None:
        raise UsageError("sweep needs --range A..B")
    rows = []
    for n in parse_range(args.range):
        r = least_doubling_path(n, tol=args.tol, cross_check=False)
        rows.append({"n": n, "C": r.c, "C0": c0_path_closed_form(n), "k_star": r.k_star})
    return rows


def render_sweep(rows: list[dict], fmt: str, rng: str, tol: float) -> str:
    if fmt == "json":
        return dumps({
            "input": {"range": rng, "tol": tol},
            "result": rows,
            "witnesses": {},
            "residuals": {},
        }) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "C", "C0", "k_star"])
    for r in rows:
        writer.writerow([r["n"], _float(r["C"]), _float(r["C0"]), "" if r["k_star"] is None else r["k_star"]])
    return buf.getvalue()


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="solver tolerance (default 1e-10)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = argparse.ArgumentParser(prog="leastdoubling", description="Doubling constants of measures on finite graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("doubling", parents=[common], help="doubling constant of one measure")
    s.add_argument("--graph", required=True, help="path:N | cycle:N | star:N | complete:N | @FILE")
    s.add_argument("--measure", default="counting", help="counting | sine | lambda_alpha:A | @FILE")
    s.add_argument("--alpha", type=float)
    s.add_argument("--table", action="store_true", help="emit every (center, k) quotient")
    s.set_defaults(func=cmd_doubling)

    s = sub.add_parser("least", parents=[common], help="least doubling constant by LP bisection")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_least)

    s = sub.add_parser("path", parents=[common], help="least doubling constant of the path L_n")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int, help="solve only for this M1 radius")
    s.add_argument("--cross-check", action=argparse.BooleanOptionalAction, default=None,
                   help="compare with LP bisection (default: on for n <= 30)")
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("spectral", parents=[common], help="local constant 1 + lambda_1(A)")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("window", parents=[common], help="windowed quotients on Z or N")
    s.add_argument("--width", type=int, help="half-width N on Z (window -N..N), length N on N")
    s.add_argument("--line", choices=("Z", "N"), default="Z")
    s.add_argument("--measure", default="counting")
    s.add_argument("--alpha", type=float)
    s.set_defaults(func=cmd_window)

    s = sub.add_parser("sweep", parents=[common], help="CSV of C(L_n), C0(L_n), k* over a range of n")
    s.add_argument("--range", help="A..B")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 2
    try:
        payload = args.func(args)
        if args.command == "sweep":
            out = render_sweep(payload, args.format, args.range, args.tol)
        else:
            out = render(payload, args.format)
    except (UsageError, GraphError, MeasureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except COMPUTATION_ERRORS as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
