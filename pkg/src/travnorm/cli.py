"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 fuel exhausted, 3 strategies disagree.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fuzz
from .ctree import build_ctree
from .jseq import core, pview, to_json as jseq_json
from .linred import ll_reduce, normal_order, trivial_finish
from .readout import induced_tree, readout
from .stlc import TypeMismatch, Untypable, eta_long, infer, normalize_stlc
from .term import Divergence, ParseError, alpha_eq, parse, pretty, to_json
from .traversal import DEFAULT_FUEL, Mode, enumerate_maximal

STRATEGIES = ("traversal", "linear", "normal-order")


def _emit(obj):
    print(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))


def _read_term(args):
    text = args.expr if args.expr is not None else open(args.file, encoding="utf-8").read()
    return parse(text)


def _traversals(t, args):
    if args.stlc:
        ctx, ty = infer(t)
        t = eta_long(t, ty, ctx=ctx)
        return enumerate_maximal(build_ctree(t), Mode.STLC, args.fuel)
    return enumerate_maximal(build_ctree(t), Mode.NORMALIZING, args.fuel)


def _trace_traversals(travs):
    for k, tr in enumerate(travs):
        _emit({"traversal": k, "occurrences": jseq_json(tr.occs, tr.rules)})


def _linear(t, args):
    def on_step(st):
        _emit({"step": st.step, "lloc_path": list(st.lloc_path),
               "redex_binder_path": list(st.redex_binder_path),
               "argument_path": list(st.argument_path), "term": pretty(st.term)})
    qnf = ll_reduce(t, args.fuel, on_step=on_step if args.trace_linear else None)
    return trivial_finish(qnf)


def _normalize_with(strategy, t, args):
    if strategy == "traversal":
        travs = _traversals(t, args)
        if args.trace:
            _trace_traversals(travs)
        return readout(induced_tree(pview(core(tr.occs)) for tr in travs))
    if strategy == "linear":
        nf = _linear(t, args)
    else:
        nf = normal_order(t, args.fuel)
    if args.stlc:
        ctx, ty = infer(t)
        nf = eta_long(nf, ty, ctx=ctx)
    return nf


def cmd_parse(args) -> int:
    t = _read_term(args)
    if args.emit_dot:
        print(build_ctree(t).to_dot())
    elif args.json:
        _emit(to_json(t))
    else:
        print(pretty(t))
    return 0


def cmd_normalize(args) -> int:
    t = _read_term(args)
    if args.emit_dot:
        print(build_ctree(t).to_dot())
    names = STRATEGIES if args.strategy == "all" else (args.strategy,)
    results = {}
    for name in names:
        results[name] = _normalize_with(name, t, args)
    verdict = None
    if len(results) > 1:
        vals = list(results.values())
        verdict = all(alpha_eq(vals[0], v) for v in vals[1:])
    if args.json:
        out = {name: to_json(nf) for name, nf in results.items()}
        out = {"results": out, "pretty": {n: pretty(nf) for n, nf in results.items()}}
        if verdict is not None:
            out["agree"] = verdict
        _emit(out)
    elif len(results) == 1:
        print(pretty(results[names[0]]))
    else:
        for name, nf in results.items():
            print(f"{name}: {pretty(nf)}")
        print("AGREE" if verdict else "DISAGREE")
    return 3 if verdict is False else 0


def cmd_traversals(args) -> int:
    t = _read_term(args)
    travs = _traversals(t, args)
    for k, tr in enumerate(travs):
        obj = {"index": k, "length": len(tr), "occurrences": jseq_json(tr.occs, tr.rules)}
        if args.views:
            c = core(tr.occs)
            obj["core"] = jseq_json(c)
            obj["core_pview"] = jseq_json(pview(c))
        _emit(obj)
    return 0


def cmd_etalong(args) -> int:
    t = _read_term(args)
    ctx, ty = infer(t)
    long = eta_long(t, ty, ctx=ctx)
    if args.stlc:
        long = normalize_stlc(t, args.fuel)
    if args.json:
        _emit({"type": str(ty), "context": {x: str(a) for x, a in ctx.items()},
               "term": to_json(long)})
    else:
        for x, a in ctx.items():
            print(f"{x} : {a}")
        print(f"{pretty(long)} : {ty}")
    return 0


def cmd_compare(args) -> int:
    rep = fuzz.compare(seed=args.seed, count=args.count, max_size=args.size, fuel=args.fuel)
    if rep.ok:
        print(f"{rep.agreed}/{rep.checked} agree")
        return 0
    print(f"DISAGREE after {rep.agreed}/{rep.checked}")
    print(f"counterexample: {pretty(rep.counterexample)}")
    for name, nf in rep.results.items():
        print(f"{name}: {nf if isinstance(nf, str) else pretty(nf)}")
    return 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="travnorm", description="Normalize lambda terms by traversals.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
        sp.add_argument("--json", action="store_true", help="emit JSON")
        return sp

    def source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("-e", dest="expr", metavar="TERM")
        g.add_argument("-f", dest="file", metavar="FILE")

    sp = add("parse", cmd_parse, "parse and pretty-print a term")
    source(sp)
    sp.add_argument("--emit-dot", action="store_true", help="print the computation tree as DOT")

    sp = add("normalize", cmd_normalize, "print the beta-normal form")
    source(sp)
    sp.add_argument("--strategy", choices=STRATEGIES + ("all",), default="traversal")
    sp.add_argument("--stlc", action="store_true", help="eta-long normalization of a typable term")
    sp.add_argument("--trace", action="store_true", help="print the traversals as JSON lines")
    sp.add_argument("--trace-linear", action="store_true", help="print linear steps as JSON lines")
    sp.add_argument("--emit-dot", action="store_true", help="print the computation tree as DOT")

    sp = add("traversals", cmd_traversals, "list the maximal normalizing traversals")
    source(sp)
    sp.add_argument("--stlc", action="store_true", help="use the eta-long form and STLC rules")
    sp.add_argument("--views", action="store_true", help="include cores and their P-views")

    sp = add("etalong", cmd_etalong, "infer a simple type and eta-expand")
    source(sp)
    sp.add_argument("--stlc", action="store_true", help="also normalize")

    sp = add("compare", cmd_compare, "differential test on random closed terms")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--count", type=int, default=200)
    sp.add_argument("--size", type=int, default=12, help="maximum term size")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.fuel < 1:
        print("error: fuel must be at least 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ParseError, OSError, Untypable, TypeMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Divergence as e:
        print(f"diverged: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
