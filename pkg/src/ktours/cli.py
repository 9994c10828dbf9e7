"""Command-line entry point: ``ktours graph|find|classify|widen|verify|render``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from pathlib import Path

from ktours.boards import BoardSpec, Surface, build_graph
from ktours.homotopy import TourClass, class_of_deck
from ktours.io import Atlas, Defaults, Provenance, TourFileError, TourRecord, format_tour, read_tour, write_tour
from ktours.render import render_svg
from ktours.search import SearchBudget, Status, find_tour
from ktours.theorems import CheckBudget, TheoremId, cross_check, disagreements, unknowns

EXIT_FOUND = 0
EXIT_NONE = 10
EXIT_EXCLUDED = 11
EXIT_BUDGET = 20
EXIT_BAD_INPUT = 2


class UsageError(Exception):
    pass


def _board(args) -> BoardSpec:
    spec = BoardSpec(Surface(args.surface), args.m, args.n)
    if not spec.compact:
        raise UsageError(f"{spec.surface.value} is not a finite board")
    return spec


def cmd_graph(args) -> int:
    spec = _board(args)
    g = build_graph(spec)
    loops = sum(e.is_loop for e in g.edges)
    degrees = Counter(g.degree(q) for q in g.vertices)
    print(f"board: {spec}")
    print(f"vertices: {len(g.vertices)}")
    print(f"edges: {len(g.edges)}")
    print(f"loops: {loops}")
    print("degree count")
    for d in sorted(degrees):
        print(f"{d:6d} {degrees[d]:5d}")
    print("degrees by square (top row first):")
    for b in reversed(range(spec.n)):
        print(" ".join(f"{g.degree((a, b)):2d}" for a in range(spec.m)))
    return 0


def cmd_find(args) -> int:
    spec = _board(args)
    defaults = Defaults.load(args.config)
    cls = TourClass.parse(args.tour_class) if args.tour_class != "any" else None
    nodes = args.budget_nodes if args.budget_nodes is not None else (None if args.exhaustive else defaults.node_limit)
    budget = SearchBudget(
        node_limit=nodes,
        time_limit=args.time_limit if args.time_limit is not None else defaults.time_limit,
        parallel_width=args.parallel or defaults.parallel_width,
        exhaustive=args.exhaustive,
        restart_nodes=None if args.exhaustive else defaults.restart_nodes,
        connectivity_every=defaults.connectivity_every,
    )
    try:
        out = find_tour(build_graph(spec), cls, budget, seed=args.seed, fast_fail=args.fast_fail)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{out.status.value} ({out.nodes} nodes){': ' + out.reason if out.reason else ''}", file=sys.stderr)
    if out.status is Status.FOUND:
        record = TourRecord.of(out.lift, Provenance.SEARCHED, args.seed)
        if args.out:
            write_tour(args.out, record)
        else:
            sys.stdout.write(format_tour(record))
        if args.store:
            Atlas(args.atlas).store(record)
        return EXIT_FOUND
    print({Status.EXHAUSTED_NONE: "certified-none", Status.EXCLUDED: "excluded",
           Status.BUDGET_EXCEEDED: "budget-exceeded"}[out.status])
    return {Status.EXHAUSTED_NONE: EXIT_NONE, Status.EXCLUDED: EXIT_EXCLUDED}.get(out.status, EXIT_BUDGET)


def cmd_classify(args) -> int:
    rec = read_tour(args.input)
    g = rec.lift.holonomy()
    print(f"{class_of_deck(rec.board, g)}, ({g.k},{g.j})")
    return 0


def cmd_widen(args) -> int:
    from ktours.widening import widen_iterate

    rec = read_tour(args.input)
    if rec.board.surface is not Surface.MOBIUS:
        raise UsageError("widen applies to Mobius boards only")
    if args.times < 0:
        raise UsageError("--times must be non-negative")
    try:
        lift = widen_iterate(rec.lift, args.times)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = TourRecord.of(lift, Provenance.WIDENED if args.times else rec.provenance, rec.seed)
    if args.out:
        write_tour(args.out, out)
    else:
        sys.stdout.write(format_tour(out))
    return 0


def cmd_verify(args) -> int:
    defaults = Defaults.load(args.config)
    budget = CheckBudget(
        witness_nodes=args.budget_nodes if args.budget_nodes is not None else defaults.node_limit,
        restart_nodes=defaults.restart_nodes,
        exhaust_nodes=args.exhaust_nodes if args.exhaust_nodes is not None else defaults.exhaust_nodes,
        constructions=not args.no_constructions,
        seed=args.seed,
    )
    tid = TheoremId(args.theorem)
    verdicts = cross_check(tid, range(args.min_m, args.max_m + 1), range(args.min_n, args.max_n + 1), budget,
                           workers=args.workers)
    if args.json:
        rows = [
            {"board": str(v.board), "class": v.tour_class, "predicted": v.predicted, "observed": v.observed.value,
             "agree": v.agree, "note": v.note, "nodes": v.nodes}
            for v in verdicts
        ]
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'board':<18} {'class':<28} {'predicted':<9} {'observed':<15} {'agree':<7} note")
        for v in verdicts:
            agree = {True: "yes", False: "NO", None: "unknown"}[v.agree]
            print(f"{str(v.board):<18} {v.tour_class:<28} {str(v.predicted):<9} {v.observed.value:<15} {agree:<7} {v.note}")
        bad, unk = disagreements(verdicts), unknowns(verdicts)
        print(f"{len(verdicts)} cells, {len(bad)} disagreements, {len(unk)} unknown")
        for v in unk:
            print(f"unknown: {v.board}")
    if args.store:
        atlas = Atlas(args.atlas)
        for v in verdicts:
            if v.witness is not None:
                prov = Provenance.SEARCHED if v.observed.value == "found" else Provenance.WIDENED
                atlas.store(TourRecord.of(v.witness, prov))
    return 1 if disagreements(verdicts) else 0


def cmd_render(args) -> int:
    rec = read_tour(args.input)
    Path(args.out).write_text(render_svg(rec.lift, args.scale))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ktours", description="Knight's tours on rectangles, cylinders, "
                                "Mobius strips and Klein bottles, classified by homotopy.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--config", help="JSON file with default budgets")
    sub = p.add_subparsers(dest="command", required=True)

    def board_args(sp):
        sp.add_argument("--surface", required=True, choices=["rectangle", "cylinder", "mobius", "klein"])
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("graph", help="vertex, edge and degree counts")
    board_args(sp)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("find", help="search for a tour of a class")
    board_args(sp)
    sp.add_argument("--class", dest="tour_class", default="any",
                    help="null, gen, cyl, mob, other(k,j) or any")
    sp.add_argument("--exhaustive", action="store_true", help="unbounded search that certifies non-existence")
    sp.add_argument("--budget-nodes", type=int)
    sp.add_argument("--time-limit", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--parallel", type=int, default=0, help="worker processes over root branches")
    sp.add_argument("--fast-fail", action="store_true", help="skip search when a theorem rules the class out")
    sp.add_argument("--out")
    sp.add_argument("--store", action="store_true", help="keep the witness in the atlas")
    sp.add_argument("--atlas", help="atlas directory (default $KTOURS_ATLAS or ./atlas)")
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("classify", help="homotopy class of a tour file")
    sp.add_argument("--in", dest="input", required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("widen", help="widen a Mobius tour by 4 columns per step")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--times", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_widen)

    sp = sub.add_parser("verify", help="check a theorem against search over a grid")
    sp.add_argument("--theorem", required=True, choices=[t.value for t in TheoremId])
    sp.add_argument("--min-m", type=int, default=1)
    sp.add_argument("--min-n", type=int, default=1)
    sp.add_argument("--max-m", type=int, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--budget-nodes", type=int, help="node limit for witness searches")
    sp.add_argument("--exhaust-nodes", type=int, help="node limit for certification (default unbounded)")
    sp.add_argument("--no-constructions", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--store", action="store_true")
    sp.add_argument("--atlas")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="draw a tour file as SVG")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--scale", type=int, default=32)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, TourFileError, FileNotFoundError, ValueError) as exc:
        print(f"ktours {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
