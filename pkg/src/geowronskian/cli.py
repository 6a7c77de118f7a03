"""Command-line frontend.

Exit codes: 0 success, 1 property refuted, 2 usage or parse error,
3 resource cap exceeded.  Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .dependence import DependentFamily, decide, distinct_order_reduction, rank_oracle
from .fermat import FermatConfig, degree_report, fermat_report
from .polyring import ParseError, format_poly, parse_poly, series_order
from .vandermonde import CertificationFailure, eval_V, eval_V_tilde, zero_set_certify
from .wordcomb import (
    EnumerationTooLarge,
    WordSet,
    canonical_size,
    canonical_weight,
    enumerate_full_sets,
    foliation_data,
    is_admissible,
    is_full,
    word_from_letters,
)
from .wronskian import BudgetExhausted, WronskianCombination, eval_wronskian, is_geometric

SCHEMA = "geowronskian/1"
DEFAULT_SEED = 0

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input helpers

def infer_p(exprs) -> int:
    idx = [int(m) for e in exprs for m in re.findall(r"z_?\{?(\d+)", e)]
    return max(idx, default=1)


def parse_words(text: str, p: int | None, fmt: str = "auto") -> WordSet:
    """Word set from JSON: exponent vectors or letter lists/strings.

    ``auto`` reads a list of integer lists as exponent vectors when their
    length equals ``p`` and as letter lists otherwise; strings are letters.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--set is not valid JSON: {exc}") from exc
    if isinstance(raw, dict):
        raw = raw.get("words", raw.get("set"))
    if not isinstance(raw, list):
        raise UsageError("--set must be a JSON list of words")
    if not raw:
        if p is None:
            raise UsageError("--p is required for an empty set")
        return WordSet(p, ())
    if fmt == "auto":
        if all(isinstance(w, str) for w in raw):
            fmt = "letters"
        elif p is not None and all(isinstance(w, list) and len(w) == p for w in raw):
            fmt = "exponent"
        elif p is None and len({len(w) for w in raw if isinstance(w, list)}) == 1:
            fmt = "exponent"
        else:
            fmt = "letters"
    if fmt == "exponent":
        q = p if p is not None else len(raw[0])
        return WordSet(q, tuple(tuple(int(a) for a in w) for w in raw))
    letters = [[int(c) for c in (w if isinstance(w, list) else str(w))] for w in raw]
    q = p if p is not None else max(max(w) for w in letters)
    return WordSet(q, tuple(word_from_letters(w, q) for w in letters))


def ws_json(ws: WordSet | None):
    return None if ws is None else [list(u) for u in ws.words]


def frac(x) -> str:
    return str(Fraction(x))


def emit(args, payload: dict, text: str):
    if args.format == "json":
        payload = dict(payload)
        payload["schema"] = SCHEMA
        payload["command"] = args.command
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_fullsets(args):
    sets = enumerate_full_sets(args.p, args.m, args.cap)
    emit(args, {"p": args.p, "m": args.m, "count": len(sets),
                "sets": [ws.to_json() for ws in sets]},
         "\n".join(str(ws) for ws in sets) + f"\n# {len(sets)} full sets")
    return EXIT_OK


def cmd_stats(args):
    ws = parse_words(args.set, args.p, args.word_format)
    st = ws.stats()
    out = {"words": ws_json(ws), "stats": st, "admissible": is_admissible(ws), "full": is_full(ws)}
    text = (f"{ws}\nm={st['m']} k={st['k']} w={st['w']} beta={tuple(st['beta'])} "
            f"charseq={tuple(st['charseq'])}\nadmissible={out['admissible']} full={out['full']}")
    emit(args, out, text)
    return EXIT_OK


def _load_w(args, p):
    if args.combination:
        try:
            return WronskianCombination.from_json(json.loads(args.combination), p)
        except (json.JSONDecodeError, KeyError) as exc:
            raise UsageError(f"bad --combination: {exc}") from exc
    if args.set is None:
        raise UsageError("one of --set or --combination is required")
    return WronskianCombination.pure(parse_words(args.set, p, args.word_format))


def cmd_wronskian(args):
    p = args.p or infer_p(args.exprs)
    fs = [parse_poly(e, p) for e in args.exprs]
    W = _load_w(args, p)
    if len(fs) != W.m + 1:
        raise UsageError(f"{len(fs)} expressions given, {W.m + 1} needed")
    val = eval_wronskian(W, fs)
    emit(args, {"p": p, "value": format_poly(val), "wronskian": W.to_json()}, format_poly(val))
    return EXIT_OK


def cmd_geometric(args):
    W = _load_w(args, args.p)
    res = is_geometric(W, args.mode, args.budget, args.trials, args.seed)
    emit(args, {"geometric": res.geometric, "mode": res.mode, "seed": args.seed,
                "certificate": res.certificate, "wronskian": W.to_json()},
         f"geometric={res.geometric} ({res.mode})" +
         ("" if res.geometric or "counterexample" not in res.certificate
          else "\ncounterexample: " + json.dumps(res.certificate["counterexample"])))
    return EXIT_OK if res.geometric else EXIT_REFUTED


def cmd_indep(args):
    p = args.p or infer_p(args.exprs)
    fs = [parse_poly(e, p) for e in args.exprs]
    res = decide(fs, p, args.cap, args.seed)
    out = {"independent": res["independent"], "witness": ws_json(res["witness"]),
           "rank": res["rank"], "seed": args.seed}
    text = (f"independent={res['independent']} rank={res['rank']}"
            + (f" witness={res['witness']}" if res["witness"] else ""))
    emit(args, out, text)
    return EXIT_OK


def cmd_reduce(args):
    p = args.p or infer_p(args.exprs)
    fs = [parse_poly(e, p) for e in args.exprs]
    try:
        r = distinct_order_reduction(fs)
    except DependentFamily as exc:
        raise UsageError(str(exc)) from exc
    out = {"ts": [format_poly(t) for t in r.ts],
           "orders": [list(series_order(t)) for t in r.ts],
           "A": [[frac(x) for x in row] for row in r.A], "steps": r.steps}
    text = "\n".join(f"t{i} = {format_poly(t)}" for i, t in enumerate(r.ts))
    text += "\nA = " + str([[frac(x) for x in row] for row in r.A])
    emit(args, out, text)
    return EXIT_OK


def cmd_vandermonde(args):
    ws = parse_words(args.set, args.p, args.word_format)
    try:
        cols = [[Fraction(str(x)) for x in c] for c in json.loads(args.cols)]
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"bad --cols: {exc}") from exc
    val = eval_V_tilde(ws, cols) if args.tilde else eval_V(ws, cols)
    emit(args, {"value": frac(val), "tilde": args.tilde, "set": ws_json(ws)}, frac(val))
    return EXIT_OK


def cmd_certify(args):
    variants = ["A", "B"] if args.variant == "both" else [args.variant]
    reports = []
    code = EXIT_OK
    for v in variants:
        try:
            rep = zero_set_certify(args.p, args.m, args.direction, args.samples, v,
                                   args.seed, args.grid, args.cap)
        except CertificationFailure as exc:
            print(f"REFUTED: {exc}", file=sys.stderr)
            rep = exc.report
            code = EXIT_REFUTED
        reports.append(rep)
    text = "\n".join(
        f"variant {r['variant']}: ok={r['ok']} patterns vanishing "
        f"{r['totals']['patterns_vanishing']}/{r['totals']['patterns']}, samples witnessed "
        f"{r['totals']['witnessed']}/{r['totals']['samples']}" for r in reports)
    emit(args, {"reports": reports, "seed": args.seed}, text)
    return code


def _fermat_job(job):
    N, p, delta, check, seed = job
    return fermat_report(FermatConfig(N, p, delta), check, seed)


def cmd_fermat(args):
    try:
        cfg = FermatConfig(args.N, args.p, args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    deltas = list(range(1, args.delta + 1)) if args.upto else [args.delta]
    jobs = [(args.N, args.p, d, args.check, args.seed) for d in deltas]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_fermat_job, jobs))
    else:
        reports = [_fermat_job(j) for j in jobs]
    report = reports[0] if len(reports) == 1 else {"reports": reports}
    report["degrees"] = degree_report(cfg.N, cfg.p)
    ok = all(r["ok"] for r in reports)
    lines = [f"N={cfg.N} p={cfg.p} threshold={cfg.threshold}"]
    for r in reports:
        lines.append(f"delta={r['delta']}: ok={r['ok']} meets_threshold={r['meets_threshold']} "
                     f"({len(r['sets'])} full sets)")
    emit(args, report, "\n".join(lines))
    if not ok:
        print("REFUTED: a Fermat identity failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_asymptotics(args):
    rows = []
    for n in args.n:
        m, w = canonical_size(args.p, n), canonical_weight(args.p, n)
        fol = foliation_data(args.p, args.C, n)
        rows.append({"n": n, "size": m, "weight": w,
                     "weight_ratio": frac(Fraction(w, n * m)),
                     "limit": frac(Fraction(args.p, args.p + 1)),
                     "foliation": {"r": fol["r"], "w_min": fol["w_min"],
                                   "ratio": frac(fol["ratio"])}})
    text = "\n".join(
        f"n={r['n']} |U_n|={r['size']} w={r['weight']} w/(n|U_n|)="
        f"{float(Fraction(r['weight_ratio'])):.6f} foliation_ratio="
        f"{float(Fraction(r['foliation']['ratio'])):.6f}" for r in rows)
    emit(args, {"p": args.p, "C": args.C, "rows": rows}, text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cap", type=int, default=1_000_000,
                        help="maximum number of full sets to enumerate")

    parser = argparse.ArgumentParser(prog="geowronskian",
                                     description="Generalized Wronskians toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def set_args(sp, required=True):
        sp.add_argument("--set", required=required, help="word set as JSON")
        sp.add_argument("--word-format", choices=["auto", "exponent", "letters"],
                        default="auto")

    sp = add("fullsets", cmd_fullsets, "enumerate full sets of a given size")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("stats", cmd_stats, "statistics of a word set")
    set_args(sp)
    sp.add_argument("--p", type=int)

    sp = add("wronskian", cmd_wronskian, "evaluate a Wronskian on polynomials")
    set_args(sp, required=False)
    sp.add_argument("--combination", help="Wronskian combination as JSON")
    sp.add_argument("--p", type=int)
    sp.add_argument("exprs", nargs="+")

    sp = add("geometric", cmd_geometric, "test geometricity of a Wronskian")
    set_args(sp, required=False)
    sp.add_argument("--combination")
    sp.add_argument("--p", type=int)
    sp.add_argument("--mode", choices=["exact", "randomized"], default="exact")
    sp.add_argument("--trials", type=int, default=16)
    sp.add_argument("--budget", type=int)

    sp = add("indep", cmd_indep, "decide linear independence of polynomials")
    sp.add_argument("--p", type=int)
    sp.add_argument("exprs", nargs="+")

    sp = add("reduce", cmd_reduce, "reduce a family to pairwise distinct orders")
    sp.add_argument("--p", type=int)
    sp.add_argument("exprs", nargs="+")

    sp = add("vandermonde", cmd_vandermonde, "evaluate a geometric Vandermonde")
    set_args(sp)
    sp.add_argument("--p", type=int)
    sp.add_argument("--cols", required=True, help="columns as a JSON list of p-vectors")
    sp.add_argument("--tilde", action="store_true", help="omit the row of ones")

    sp = add("certify", cmd_certify, "certify the common zero sets of the Vandermonde polynomials")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--variant", choices=["A", "B", "both"], default="both")
    sp.add_argument("--direction", choices=["forward", "converse", "both"], default="both")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--grid", type=int)

    sp = add("fermat", cmd_fermat, "Fermat-section Wronskian checks")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--check", choices=["factor", "restrict", "fminus", "all"], default="all")
    sp.add_argument("--upto", action="store_true", help="run every delta from 1 to --delta")

    sp = add("asymptotics", cmd_asymptotics, "sizes, weights and the foliation ratio")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--C", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationTooLarge, BudgetExhausted) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
