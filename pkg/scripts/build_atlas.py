"""Search a witness tour for every class on every board up to a size and store the results in an atlas directory."""

import argparse
from itertools import product

from ktours.boards import COMPACT, BoardSpec, Surface, build_graph
from ktours.homotopy import obstruction, valid_classes
from ktours.io import Atlas, Provenance, TourRecord
from ktours.search import SearchBudget, Status, find_tour


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("atlas", help="output directory")
    ap.add_argument("--max", type=int, default=6)
    ap.add_argument("--nodes", type=int, default=500_000, help="node budget per cell")
    ap.add_argument("--surface", choices=[s.value for s in COMPACT],
                    action="append")
    args = ap.parse_args()
    atlas = Atlas(args.atlas)
    surfaces = [Surface(s) for s in args.surface] if args.surface else [Surface.MOBIUS, Surface.KLEIN]
    for surface, m, n in product(surfaces, range(1, args.max + 1), range(1, args.max + 1)):
        spec = BoardSpec(surface, m, n)
        g = build_graph(spec)
        for cls in valid_classes(surface):
            if obstruction(spec, cls):
                print(f"{spec} {cls}: excluded")
                continue
            out = find_tour(g, cls, SearchBudget(node_limit=args.nodes), seed=0)
            stored = out.status is Status.FOUND and atlas.store(TourRecord.of(out.lift, Provenance.SEARCHED, 0))
            print(f"{spec} {cls}: {out.status.value}{' (stored)' if stored else ''}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
