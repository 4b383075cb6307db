"""Command-line interface: ``modinv analyze|classify|invariants|fuzz``.

Exit codes: 0 analyzed (whatever the verdict), 1 input error, 2 the
decision methods disagree.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import analyze_group, load_input
from .errors import InputError, ModinvError
from .fuzz import FuzzConfig, fuzz_campaign, write_report_dir
from .group import closure, transvection_subgroup
from .invring import construct_tg_invariants
from .modstruct import CHAPTERS, classify_case

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2


def _emit(payload: dict, out=None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_analyze(args) -> int:
    inp = load_input(args.input)
    rep = analyze_group(inp, oracle=args.oracle, bound=args.degree_bound)
    _emit(rep.to_json(timing=not args.no_timing), args.report)
    if args.report:
        det = rep.verdict("det_criterion")
        print(f"order={rep.order} chapter={rep.chapter} |T|={rep.transvection_order} "
              f"gorenstein={det}")
    if args.plot:
        from .plotting import plot_hilbert_function
        if "hilbert" in rep.verdicts.get("hilbert_palindrome", {}):
            plot_hilbert_function(rep, args.plot)
    return EXIT_DISAGREE if rep.disagreement else EXIT_OK


def cmd_classify(args) -> int:
    inp = load_input(args.input)
    G = closure(inp.ctx, inp.generators)
    cls = classify_case(G, require_sl=not args.allow_gl)
    out = {"order": G.order, **cls.to_json(inp.ctx)}
    _emit(out)
    return EXIT_OK


def cmd_invariants(args) -> int:
    inp = load_input(args.input)
    if args.subgroup != "transvections":
        raise InputError(f"unknown subgroup {args.subgroup!r}")
    G = closure(inp.ctx, inp.generators)
    cls = classify_case(G)
    T = transvection_subgroup(G)
    pres = construct_tg_invariants(G, cls, T, args.max_degree)
    _emit({"order": G.order, "chapter": cls.chapter, **pres.to_json()})
    return EXIT_OK


def cmd_fuzz(args) -> int:
    cfg = FuzzConfig(p=args.p, s=args.s, count=args.count, seed=args.seed,
                     max_order=args.max_order,
                     chapters=tuple(args.chapter) if args.chapter else None,
                     oracle=args.oracle, bound=args.degree_bound)

    def progress(i, rep):
        if args.verbose:
            print(f"[{i:4d}] order={rep.order} chapter={rep.chapter} "
                  f"det={rep.verdict('det_criterion')}", file=sys.stderr)

    summary, reports = fuzz_campaign(cfg, progress)
    if args.report_dir:
        write_report_dir(Path(args.report_dir), summary, reports, plots=not args.no_plots)
    _emit(summary.to_json())
    return EXIT_DISAGREE if summary.disagreements else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modinv", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"modinv {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full pipeline with Gorenstein verdicts")
    a.add_argument("--input", required=True)
    a.add_argument("--oracle", action="store_true", help="also run the Hilbert-series oracle")
    a.add_argument("--degree-bound", type=int, default=None)
    a.add_argument("--report", default=None, help="write the JSON report here")
    a.add_argument("--plot", default=None, help="PNG of the Hilbert function (needs --oracle)")
    a.add_argument("--no-timing", action="store_true", help="omit timings for byte-stable output")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="stable subspaces and chapter")
    c.add_argument("--input", required=True)
    c.add_argument("--allow-gl", action="store_true", help="skip the SL check")
    c.set_defaults(func=cmd_classify)

    i = sub.add_parser("invariants", help="generators of S(V)^T(G)")
    i.add_argument("--input", required=True)
    i.add_argument("--subgroup", default="transvections")
    i.add_argument("--max-degree", type=int, default=None)
    i.set_defaults(func=cmd_invariants)

    f = sub.add_parser("fuzz", help="seeded campaign over random reducible groups")
    f.add_argument("--p", type=int, required=True)
    f.add_argument("--s", type=int, default=1)
    f.add_argument("--count", type=int, default=10)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--max-order", type=int, default=2000)
    f.add_argument("--chapter", action="append", choices=CHAPTERS)
    f.add_argument("--oracle", action="store_true")
    f.add_argument("--degree-bound", type=int, default=None)
    f.add_argument("--report-dir", default=None)
    f.add_argument("--no-plots", action="store_true")
    f.add_argument("-v", "--verbose", action="store_true")
    f.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ModinvError as exc:
        # bad field parameters, singular generators, NotSL and the like
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
