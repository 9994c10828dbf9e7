"""Cross-check every existence predicate against search on a grid and print a summary table.

    python3 scripts/verify_theorems.py --max 6 --workers 4
"""

import argparse
import time

from ktours.theorems import TheoremId, cross_check, disagreements, unknowns


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max", type=int, default=5, help="largest m and n")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--theorem", choices=[t.value for t in TheoremId], action="append")
    args = ap.parse_args()
    chosen = [TheoremId(t) for t in args.theorem] if args.theorem else list(TheoremId)
    bad = 0
    print(f"{'theorem':<20}{'cells':>6}{'disagree':>10}{'unknown':>9}{'seconds':>9}")
    for tid in chosen:
        t0 = time.monotonic()
        v = cross_check(tid, range(1, args.max + 1), range(1, args.max + 1), workers=args.workers)
        d, u = disagreements(v), unknowns(v)
        bad += len(d)
        print(f"{tid.value:<20}{len(v):>6}{len(d):>10}{len(u):>9}{time.monotonic() - t0:>9.1f}")
        for x in d + u:
            print(f"    {x.board} {x.tour_class}: predicted {x.predicted}, observed {x.observed.value}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
