"""Widen a searched extendable M(m, n) tour repeatedly, timing each step.

    python3 scripts/widen_demo.py --m 4 --n 4 --times 3 --svg out/
"""

import argparse
import time
from pathlib import Path

from ktours.boards import BoardSpec, Surface, build_graph
from ktours.homotopy import TourClass
from ktours.render import render_svg
from ktours.search import enumerate_tours, is_tour, tour_class
from ktours.widening import find_extending, reroot, widen_with_induced, collection_from_indices, embed


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--class", dest="cls", default="null")
    ap.add_argument("--times", type=int, default=2)
    ap.add_argument("--svg", type=Path, help="directory for one SVG per stage")
    args = ap.parse_args()
    cls = TourClass.parse(args.cls)
    base = next((t for t in enumerate_tours(build_graph(BoardSpec(Surface.MOBIUS, args.m, args.n)), cls, 2000)
                 if find_extending(t) is not None), None)
    if base is None:
        print("no extendable base among the first 2000 tours")
        return 1
    lift, coll = base, None
    for k in range(1, args.times + 1):
        t0 = time.monotonic()
        lift, induced = widen_with_induced(lift, coll)
        dt = time.monotonic() - t0
        rooted = reroot(lift)
        ok = is_tour(build_graph(lift.board), lift)
        print(f"step {k}: {lift.board}  tour={ok}  class={tour_class(rooted)}  {dt * 1000:.1f} ms")
        if args.svg:
            args.svg.mkdir(parents=True, exist_ok=True)
            (args.svg / f"stage{k}.svg").write_text(render_svg(rooted))
        coll = collection_from_indices(embed(lift), induced)
        if coll is None and k < args.times:
            print("induced collection is not extending; stopping")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
