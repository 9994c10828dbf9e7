"""Grow nullhomotopic Mobius tours by splicing: m x 1 boards by two columns, 4 x n boards by two rows."""

import argparse

from ktours.boards import BoardSpec, Surface
from ktours.search import tour_class
from ktours.widening import find_splice_base, splice_4_by_n, splice_m_by_1


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=4)
    args = ap.parse_args()
    for start, splice in (((6, 1), splice_m_by_1), ((4, 4), splice_4_by_n)):
        chain = find_splice_base(BoardSpec(Surface.MOBIUS, *start), splice, args.steps)
        if chain is None:
            print(f"no base on M{start} survives {args.steps} splices")
            continue
        for lift in chain:
            print(f"{lift.board}: class={tour_class(lift)} end={lift.end}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
