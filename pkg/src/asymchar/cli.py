"""Command-line front end.

Every command prints one document {config, results, provenance}.  Rationals
are written as "num/den" strings and floats with 17 significant digits, so the
same configuration and seed always give byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import __version__
from .cache import Cache, CacheError
from .rootsys import RootSystemError, build

SUBCOMMANDS = ("info", "xeval", "cmin", "cg", "bounds", "dh", "mu", "mittag", "ggr", "decay")


class UsageError(ValueError):
    pass


# -- serialization ----------------------------------------------------------------------
def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats written to 17 significant digits."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return f'"{obj}"'
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _rows_to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _table(results: dict) -> str:
    flat = []

    def walk(prefix: str, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        else:
            flat.append((prefix, dumps(obj).replace("\n", " ")))

    walk("", _plain(results))
    width = max((len(k) for k, _ in flat), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in flat) + "\n"


# -- argument helpers ------------------------------------------------------------------------
def _vector(text: str | None, name: str) -> list[Fraction] | None:
    if text is None:
        return None
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from exc


def _root_system(args):
    try:
        return build(args.type, args.rank)
    except (RootSystemError, KeyError, ValueError) as exc:
        raise UsageError(f"invalid type/rank {args.type}{args.rank}: {exc}") from exc


def _weight(rs, args, name: str = "lambda", default=None) -> list[Fraction]:
    v = _vector(getattr(args, "lambda_" if name == "lambda" else name), name)
    if v is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return list(default)
    if args.basis == "cartesian":
        try:
            v = list(rs.from_cartesian(v))
        except RootSystemError as exc:
            raise UsageError(str(exc)) from exc
    if len(v) != rs.rank:
        raise UsageError(f"--{name} needs {rs.rank} coordinates")
    return v


def _coweight(rs, args) -> list[float]:
    """--x in fundamental-coweight coordinates (or Cartesian), returned in coroot coordinates."""
    v = _vector(args.x, "x")
    if v is None:
        raise UsageError("--x is required")
    if args.basis == "cartesian":
        return [float(c) for c in rs.coweight_from_cartesian(v)]
    if len(v) != rs.rank:
        raise UsageError(f"--x needs {rs.rank} coordinates")
    fc = np.array([[float(c) for c in row] for row in rs.fundamental_coweights])
    return (np.array([float(c) for c in v]) @ fc).tolist()


def _dominant_integral(lam: Sequence[Fraction]) -> tuple[int, ...]:
    if any(v.denominator != 1 or v < 0 for v in lam):
        raise UsageError("--lambda must be dominant integral here")
    return tuple(int(v) for v in lam)


# -- commands ----------------------------------------------------------------------------
def cmd_info(args, cache):
    from .mittag import central_characters

    rs = _root_system(args)
    out = rs.to_json() if rs.is_crystallographic else {"type": rs.label}
    out.update({"rank": rs.rank, "weyl_order": rs.weyl_order, "positive_roots": rs.n_pos})
    if rs.is_crystallographic:
        out.update(
            {
                "dim": rs.dim,
                "coxeter_number": rs.coxeter_number,
                "dual_coxeter_number": rs.dual_coxeter_number,
                "rho": list(rs.rho),
                "rho_norm2": rs.norm2(rs.rho),
                "center_representatives": [list(c.rep) for c in central_characters(rs)],
            }
        )
    return out, ["root_data"], None


def cmd_xeval(args, cache):
    from .asympt import ray_samples, x_eval

    rs = _root_system(args)
    lam = [float(v) for v in _weight(rs, args)]
    x = _coweight(rs, args)
    if args.t_max is not None:
        ts = np.geomspace(args.t_min, args.t_max, args.samples) if args.log else np.linspace(args.t_min, args.t_max, args.samples)
        rows = ray_samples(rs, lam, x, ts)
        csv_text = _rows_to_csv(["t", "re", "im"], rows)
        return {"samples": [list(r) for r in rows]}, ["weyl_character_ratio"], csv_text
    val = x_eval(rs, lam, x)
    return {"X": val, "abs": abs(val), "lambda_labels": lam, "x_coroot": x}, ["weyl_character_ratio"], None


def _budget(args):
    from .optimize import Budget

    return Budget(starts=args.starts, max_evals=args.max_evals)


def cmd_cmin(args, cache):
    from .optimize import minimize_reX

    rs = _root_system(args)
    lam = [float(v) for v in _weight(rs, args, default=rs.rho)]
    key = {"cmd": "cmin", "type": rs.label, "lambda": lam, "starts": args.starts, "evals": args.max_evals, "seed": args.seed}
    res = cache.cached(key, lambda: asdict(minimize_reX(rs, lam, _budget(args), seed=args.seed)))
    res.pop("best_per_start", None)
    return res, ["multistart_simplex_descent", "weyl_character_ratio"], None


def cmd_cg(args, cache):
    from .optimize import estimate_cG

    rs = _root_system(args)
    key = {"cmd": "cg", "type": rs.label, "starts": args.starts, "evals": args.max_evals, "seed": args.seed, "step": args.step}
    res = cache.cached(
        key,
        lambda: asdict(estimate_cG(rs, _budget(args), step=args.step, seed=args.seed)),
    )
    res["grid_points"] = len(res.pop("grid"))
    return res, ["simplex_grid_pattern_search", "multistart_simplex_descent"], None


def cmd_bounds(args, cache):
    from .bounds import full_report

    rs = _root_system(args)
    if not rs.is_crystallographic:
        raise UsageError("bounds need a crystallographic type")
    key = {"cmd": "bounds", "type": rs.label}
    report = cache.cached(key, lambda: full_report(rs).entries)
    return report, ["incomplete_gamma", "lp_on_chebyshev_grid", "newton_b0"], None


def cmd_dh(args, cache):
    from .dhspline import (
        b_value,
        dh_eval_finite_n,
        dh_rho_convolution_eval,
        dh_second_moment,
        inradius,
        r_g,
    )

    rs = _root_system(args)
    mu = _vector(args.mu, "mu") or [Fraction(0)] * rs.rank
    out: dict[str, Any] = {"R_G": r_g(rs)}
    if args.lambda_ is None:
        val = dh_rho_convolution_eval(rs, args.k, mu, mode="exact")
        out.update(
            {
                "k": args.k,
                "mu": mu,
                "value_root_coordinates": val.rational,
                "density": val.density,
                "second_moment": dh_second_moment(rs),
                "B_rho": b_value(rs, rs.rho),
            }
        )
        tags = ["box_spline_recurrence", "moment_identity"]
    else:
        lam = _weight(rs, args)
        res = dh_eval_finite_n(rs, lam, mu, [int(n) for n in args.n_list.split(",")])
        out.update(
            {
                "lambda": lam,
                "mu": mu,
                "density": res.value,
                "error_estimate": res.error,
                "samples": res.samples,
                "inradius": inradius(rs, [float(v) for v in lam]),
            }
        )
        tags = ["weight_multiplicity_limit", "richardson"]
    return out, tags, None


def cmd_mu(args, cache):
    from .mucover import mu

    rs = _root_system(args)
    key = {"cmd": "mu", "type": rs.label}

    def compute():
        n, w = mu(rs, workers=args.workers)
        return {"mu": n, "witness": w.to_dict()}

    return cache.cached(key, compute), ["coweight_orbit_scan"], None


def cmd_mittag(args, cache):
    from .mittag import central_character, decompose, lattice_sum_eval

    rs = _root_system(args)
    xi = central_character(rs, args.xi)
    key = {"cmd": "mittag", "type": rs.label, "k": args.k, "xi": args.xi}
    coeffs = cache.cached(key, lambda: decompose(rs, args.k, xi).to_json())
    out: dict[str, Any] = {"coefficients": coeffs, "xi_representative": list(xi.rep)}
    if args.x is not None:
        y = [float(v) for v in _vector(args.x, "x")]
        ls = lattice_sum_eval(rs, args.k, xi, y)
        out["lattice_sum"] = {"value": ls.value, "tail_bound": ls.tail_bound, "mode": ls.mode, "radius": ls.radius}
        out["trigonometric_polynomial"] = decompose(rs, args.k, xi).evaluate(rs, y)
    if args.format == "csv":
        rows = [(mu, c) for mu, c in sorted(coeffs.items())]
        return out, ["box_spline_recurrence", "weyl_alternation"], _rows_to_csv(["mu", "coefficient"], rows)
    return coeffs if args.x is None else out, ["box_spline_recurrence", "weyl_alternation"], None


def cmd_ggr(args, cache):
    from .bounds import c_of_g, ggr_check
    from .optimize import Budget, estimate_cG

    rs = _root_system(args)
    lam = _dominant_integral(_weight(rs, args))
    c_g = args.c
    if c_g is None:
        c_g = estimate_cG(rs, Budget(starts=args.starts or 16), seed=args.seed).c
    big_c = c_of_g(rs)
    res = ggr_check(rs, lam, c_g, big_c)
    out = asdict(res)
    out.update({"c_G": c_g, "C_G": big_c})
    return out, ["character_ratio_search", "threshold"], None


def cmd_decay(args, cache):
    from .mucover import mu
    from .optimize import decay_rate_fit

    rs = _root_system(args)
    lam = [float(v) for v in _weight(rs, args)]
    x = _coweight(rs, args)
    fit = decay_rate_fit(rs, lam, x, (args.t_min, args.t_max), args.samples)
    out = {"exponent": fit.exponent, "mu_G": mu(rs)[0]}
    csv_text = _rows_to_csv(["t", "envelope"], list(zip(fit.ts, fit.envelope)))
    return out, ["envelope_log_log_fit"], csv_text


COMMANDS = {
    "info": cmd_info,
    "xeval": cmd_xeval,
    "cmin": cmd_cmin,
    "cg": cmd_cg,
    "bounds": cmd_bounds,
    "dh": cmd_dh,
    "mu": cmd_mu,
    "mittag": cmd_mittag,
    "ggr": cmd_ggr,
    "decay": cmd_decay,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", required=True, help="Cartan type letter A-I")
    common.add_argument("--rank", type=int, required=True, help="rank (m for I2(m))")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None, help="cache directory (overridden by $ASYMCHAR_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument(
        "--basis",
        choices=("fundamental", "cartesian"),
        default="fundamental",
        help="coordinates of --lambda and --x: fundamental (co)weights or the standard e_i basis",
    )

    parser = argparse.ArgumentParser(prog="asymchar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="root system data")

    p = sub.add_parser("xeval", parents=[common], help="evaluate X(lambda, x) or sample a ray")
    p.add_argument("--lambda", dest="lambda_", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--log", action="store_true", help="geometric spacing of t")

    for name, help_ in (("cmin", "minimize Re X(lambda, .)"), ("cg", "minimize over lambda as well")):
        p = sub.add_parser(name, parents=[common], help=help_)
        if name == "cmin":
            p.add_argument("--lambda", dest="lambda_", default=None)
        else:
            p.add_argument("--step", type=float, default=None, help="simplex grid step for lambda")
        p.add_argument("--starts", type=int, default=None)
        p.add_argument("--max-evals", type=int, default=400)

    sub.add_parser("bounds", parents=[common], help="explicit constants")

    p = sub.add_parser("dh", parents=[common], help="Duistermaat-Heckman densities")
    p.add_argument("--lambda", dest="lambda_", default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n-list", default="12,24,36")

    p = sub.add_parser("mu", parents=[common], help="fewest roots outside two hyperplanes")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("mittag", parents=[common], help="character expansion of F_{k,xi}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--xi", type=int, default=0, help="index into the list of P/Q representatives")
    p.add_argument("--x", default=None, help="also compare with the lattice sum at this point (coweight coordinates)")

    p = sub.add_parser("ggr", parents=[common], help="large-weight threshold and witness search")
    p.add_argument("--lambda", dest="lambda_", required=True)
    p.add_argument("--c", type=float, default=None, help="c(G) estimate; computed when omitted")
    p.add_argument("--starts", type=int, default=None)

    p = sub.add_parser("decay", parents=[common], help="decay exponent of |X(lambda, t x)|")
    p.add_argument("--lambda", dest="lambda_", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--t-min", type=float, default=20.0)
    p.add_argument("--t-max", type=float, default=2000.0)
    p.add_argument("--samples", type=int, default=200)
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("cache_dir", "no_cache")}
    if "lambda_" in cfg:
        cfg["lambda"] = cfg.pop("lambda_")
    return cfg


def dispatch(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "lambda_"):
        args.lambda_ = None
    if not hasattr(args, "x"):
        args.x = None
    cache = Cache(args.cache_dir, enabled=not args.no_cache)
    try:
        results, tags, csv_text = COMMANDS[args.command](args, cache)
    except (UsageError, RootSystemError, CacheError, ValueError) as exc:
        print(f"asymchar {args.command}: {exc}", file=stderr)
        return 2
    doc = {"config": _config(args), "results": results, "provenance": {"formula_tags": tags, "version": __version__}}
    if args.format == "csv" and csv_text is not None:
        stdout.write(csv_text)
    elif args.format == "table":
        stdout.write(_table(results))
    else:
        stdout.write(dumps(doc) + "\n")
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
