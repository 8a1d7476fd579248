"""Command-line front end.

Exit codes: 0 ok, 2 input parse error, 3 bad configuration / invalid g spec /
no constant available, 4 resource limit, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import fractions as fr
from .clt_engine import SupportTooLarge, convolve, kolmogorov_delta_at
from .distributions import DistributionError, load_distribution
from .gclass import GSpecError, parse_member
from .verify import (
    CorpusSpec,
    NoConstantAvailable,
    a1_lower_bound,
    default_corpus,
    gamma_star_constants,
    lower_bound_search,
    run_corpus,
    run_theorem2,
    theorem2_contexts,
)
from .verify.constants import GAMMA_STAR
from .verify.corpus import reports_to_csv_rows
from .verify.search import FAMILIES, SearchFamily

EXIT_OK, EXIT_PARSE, EXIT_CONFIG, EXIT_RESOURCE, EXIT_FAILED = 0, 2, 3, 4, 5


class ParseFailure(Exception):
    pass


class ConfigFailure(Exception):
    pass


def _positive(text: str) -> float:
    t = text.strip().lower()
    if t in ("gstar", "gamma*", "gamma_star"):
        return GAMMA_STAR
    try:
        value = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _nonneg(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _load_context(paths: list[str], n: int) -> fr.SumContext:
    summands = []
    for p in paths:
        try:
            summands.append(load_distribution(p))
        except FileNotFoundError as exc:
            raise ParseFailure(f"no such file: {p}") from exc
        except (OSError, json.JSONDecodeError, DistributionError) as exc:
            raise ParseFailure(f"{p}: {exc}") from exc
    if n < 1:
        raise ConfigFailure("--n must be at least 1")
    try:
        return fr.make_context(summands * n, label="+".join(Path(p).stem for p in paths) + f"^{n}")
    except fr.ContextError as exc:
        raise ConfigFailure(str(exc)) from exc


def _g(spec: str, ctx: fr.SumContext):
    try:
        return parse_member(spec, ctx.bn)
    except GSpecError as exc:
        raise ConfigFailure(str(exc)) from exc


def _num(x: float):
    return x if math.isfinite(x) else str(x)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_fraction(args) -> int:
    ctx = _load_context(args.dist, args.n)
    if args.kind in ("esseen", "rozovskii"):
        g = _g(args.g, ctx)
        params = fr.FractionParams(g, args.eps, args.gamma)
        fn = fr.esseen_fraction if args.kind == "esseen" else fr.rozovskii_fraction
        res = fn(ctx, params)
        payload = {
            "kind": args.kind,
            "g": g.spec(),
            "eps": _num(args.eps),
            "gamma": _num(args.gamma),
            "value": res.value,
            "witness": res.witness.label(),
            "witness_kind": res.witness.kind,
            "m_term": res.m_term,
            "l_term": res.l_term,
        }
    elif args.kind == "katz-petrov":
        g = _g(args.g, ctx)
        payload = {"kind": args.kind, "g": g.spec(), "value": fr.katz_petrov_fraction(ctx, g)}
    elif args.kind == "osipov":
        payload = {"kind": args.kind, "eps": _num(args.eps), "value": fr.osipov_fraction(ctx, args.eps)}
    else:
        value, w = fr.sup_zL(ctx, args.eps)
        payload = {"kind": args.kind, "eps": _num(args.eps), "value": value, "witness": w.label()}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit("".join(f"{k}: {v}\n" for k, v in payload.items()), args.out)
    return EXIT_OK


def cmd_delta(args) -> int:
    ctx = _load_context(args.dist, args.n)
    s = convolve(ctx, args.prune)
    delta, x = kolmogorov_delta_at(s)
    payload = {"delta_n": delta, "argsup_x": x, "dropped_mass": s.dropped_mass, "support": len(s), "n": ctx.n}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit("".join(f"{k}: {v}\n" for k, v in payload.items()), args.out)
    return EXIT_OK


def _write_reports(rows_header, rows, payload, fmt, out):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(rows_header)
        w.writerows(rows)
        _emit(buf.getvalue(), out)
    else:
        _emit(json.dumps(payload, indent=1) + "\n", out)


def cmd_verify(args) -> int:
    if args.only == "theorem2":
        reports = run_theorem2(theorem2_contexts())
        failures = [r for r in reports if not r.passed]
        payload = {
            "reports": [r.to_dict() for r in failures + [r for r in reports if r.passed]],
            "summary": {"checks": len(reports), "failures": len(failures)},
        }
        header = ["ctx", "eps", "gamma", "passed", "clauses"]
        rows = [[r.ctx, _num(r.eps), _num(r.gamma), r.passed, json.dumps(r.clauses)] for r in reports]
        _write_reports(header, rows, payload, args.format, args.out)
        print(f"theorem2: {len(reports)} checks, {len(failures)} failures", file=sys.stderr)
        return EXIT_FAILED if failures else EXIT_OK

    if args.corpus:
        try:
            spec = CorpusSpec.load(args.corpus)
        except FileNotFoundError as exc:
            raise ParseFailure(f"no such file: {args.corpus}") from exc
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseFailure(f"{args.corpus}: {exc}") from exc
        except ValueError as exc:
            raise ConfigFailure(f"{args.corpus}: {exc}") from exc
    else:
        spec = default_corpus()
    result = run_corpus(spec, ids=args.ids, workers=args.threads)
    header, rows = reports_to_csv_rows(result.reports)
    _write_reports(header, rows, result.to_json(), args.format, args.out)
    s = result.summary
    print(f"verify: {s['contexts']} contexts, {s['checks']} checks, {s['failures']} failures", file=sys.stderr)
    return EXIT_FAILED if s["failures"] else EXIT_OK


def cmd_constants(args) -> int:
    x0, kappa, gstar = gamma_star_constants()
    x_star, a1 = a1_lower_bound()
    payload = {"x0": x0, "kappa": kappa, "gamma_star": gstar, "a1_lower_bound": a1, "a1_argmax": x_star}
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for k, v in payload.items():
            print(f"{k} = {v!r}")
    return EXIT_OK


def cmd_search(args) -> int:
    res = lower_bound_search(
        args.id,
        SearchFamily(args.family, args.n),
        budget=args.budget,
        g=args.g,
        eps=args.eps,
        gamma=args.gamma,
        seed=args.seed,
    )
    payload = {
        "id": args.id,
        "best_ratio": res.best_ratio,
        "best_theta": list(res.best_theta),
        "ctx": res.descriptor,
        "evaluations": res.evaluations,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_profile(args) -> int:
    """CSV of z, L_n(z), z L_n(z), M_n(z) and the Esseen objective on a grid."""
    ctx = _load_context(args.dist, args.n)
    g = _g(args.g, ctx)
    gb = g(ctx.bn)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["z", "L", "zL", "M", "esseen_objective"])
    top = args.eps if math.isfinite(args.eps) else 2 * max(ctx.breakpoints)
    for k in range(1, args.points + 1):
        z = top * k / args.points
        L, m = fr.lindeberg_L(ctx, z), fr.M(ctx, z)
        obj = g(z * ctx.bn) / (z * gb) * (args.gamma * abs(m) + z * L)
        w.writerow([repr(z), repr(L), repr(z * L), repr(m), repr(obj)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lindeberg-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def ctx_args(p):
        p.add_argument("--dist", action="append", required=True, help="JSON law file; repeat for heterogeneous summands")
        p.add_argument("--n", type=int, default=1, help="copies of the listed summands")

    def out_args(p, formats=("text", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", default=None)

    p = sub.add_parser("fraction", help="evaluate a fraction")
    ctx_args(p)
    p.add_argument("--kind", choices=["esseen", "rozovskii", "katz-petrov", "osipov", "sup-zl"], default="esseen")
    p.add_argument("--g", default="identity")
    p.add_argument("--eps", type=_positive, default=1.0)
    p.add_argument("--gamma", type=_positive, default=1.0)
    out_args(p)
    p.set_defaults(func=cmd_fraction)

    p = sub.add_parser("delta", help="exact Kolmogorov distance of the normalised sum")
    ctx_args(p)
    p.add_argument("--prune", type=_nonneg, default=0.0)
    out_args(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("verify", help="run the inequality corpus or the extremal-g identity suite")
    p.add_argument("--corpus", default=None, help="corpus spec JSON (default: built-in corpus)")
    p.add_argument("--only", choices=["inequalities", "theorem2"], default="inequalities")
    p.add_argument("--ids", nargs="*", default=None)
    p.add_argument("--threads", type=int, default=None)
    out_args(p, ("json", "csv"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", help="x0, kappa, gamma*, and the A1 lower bound")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("search", help="worst-case ratio search over a family")
    p.add_argument("--id", required=True)
    p.add_argument("--family", choices=sorted(FAMILIES), default="two-point")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--g", default=None)
    p.add_argument("--eps", type=_positive, default=None)
    p.add_argument("--gamma", type=_positive, default=None)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("profile", help="plot-ready CSV of L_n, M_n and the Esseen objective")
    ctx_args(p)
    p.add_argument("--g", default="identity")
    p.add_argument("--eps", type=_positive, default=2.0)
    p.add_argument("--gamma", type=_positive, default=1.0)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_profile)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigFailure, NoConstantAvailable, GSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SupportTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    raise SystemExit(main())
