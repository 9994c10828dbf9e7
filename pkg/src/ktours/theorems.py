"""Existence theorems as predicates on board dimensions, and a harness that
checks each predicate against search and explicit constructions."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from ktours.boards import BoardSpec, DeckElement, Surface, build_graph
from ktours.homotopy import (
    CYLINDRICAL,
    GENERATING,
    MOBIUS,
    NULLHOMOTOPIC,
    LiftedPath,
    TourClass,
    class_of_deck,
    other,
)

log = logging.getLogger(__name__)


class TheoremId(str, Enum):
    SCHWENK_RECT = "schwenk-rect"
    WATKINS_MOBIUS = "watkins-mobius"
    WATKINS_KLEIN_ALL = "watkins-klein-all"
    CYL_NULL = "cyl-null"
    CYL_GEN = "cyl-gen"
    MS_NULL = "ms-null"
    MS_GEN = "ms-gen"
    KB_NULL = "kb-null"
    KB_CYL = "kb-cyl"
    KB_MOB = "kb-mob"
    RALSTON_APPLICABLE = "ralston-applicable"


class OutOfScope(ValueError):
    """The theorem says nothing about these dimensions."""


def in_scope(tid: TheoremId, m: int, n: int) -> bool:
    return not (TheoremId(tid) is TheoremId.SCHWENK_RECT and max(m, n) == 1)


def scope_note(tid: TheoremId, m: int, n: int) -> str:
    tid = TheoremId(tid)
    if tid in (TheoremId.KB_CYL, TheoremId.KB_MOB) and (m, n) == (1, 1):
        return "scope: stated only for boards with more than one square"
    return ""


def predict(tid: TheoremId, m: int, n: int) -> bool:
    """Whether theorem ``tid`` asserts a tour of its kind on the m x n board."""
    tid = TheoremId(tid)
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be positive, got {m}x{n}")
    both_odd = m % 2 == 1 and n % 2 == 1
    big = max(m, n) > 1
    if tid is TheoremId.SCHWENK_RECT:
        m, n = sorted((m, n))
        if n == 1:
            raise OutOfScope("the rectangle theorem needs a side longer than 1")
        return not (both_odd or m in (1, 2, 4) or (m == 3 and n in (4, 6, 8)))
    if tid is TheoremId.WATKINS_MOBIUS:
        return not (
            (m == 1 and n > 1)
            or (m == 2 and n % 2 == 0)
            or (m == 3 and n in (1, 4))
            or (m == 4 and n % 2 == 1)
            or (m == 5 and n == 1)
        )
    if tid is TheoremId.WATKINS_KLEIN_ALL:
        return True
    if tid is TheoremId.CYL_NULL:
        return not ((both_odd and big) or (n == 1 and m > 1) or n == 2 or (n == 4 and m % 2 == 0))
    if tid is TheoremId.CYL_GEN:
        return not (n in (1, 2, 4) or (m % 2 == 1 and n % 2 == 0))
    if tid is TheoremId.MS_NULL:
        return not (
            (both_odd and big) or (m == 1 and n > 1) or m == 2 or (m, n) == (3, 4) or (m == 4 and n % 2 == 1)
        )
    if tid is TheoremId.MS_GEN:
        return not (
            (m % 2 == 0 and n % 2 == 0) or m in (1, 2, 4) or (m == 3 and n in (1, 2, 4)) or (m, n) == (5, 1)
        )
    if tid is TheoremId.KB_NULL:
        return not ((both_odd and big) or (max(m, n) <= 2 and big))
    if tid is TheoremId.KB_CYL:
        if not big:
            return False
        return not ((m, n) == (2, 2) or (m % 2 == 1 and n % 2 == 0))
    if tid is TheoremId.KB_MOB:
        if not big:
            return False
        return m % 2 == 1 or n % 2 == 1
    if tid is TheoremId.RALSTON_APPLICABLE:
        return both_odd and min(m, n) >= 5 and max(m, n) > 5
    raise AssertionError(tid)


# what each theorem is about: surface and the classes a search must look for
_SUBJECT: dict[TheoremId, tuple[Surface, tuple[TourClass, ...] | None]] = {
    TheoremId.SCHWENK_RECT: (Surface.RECTANGLE, (NULLHOMOTOPIC,)),
    TheoremId.WATKINS_MOBIUS: (Surface.MOBIUS, None),
    TheoremId.WATKINS_KLEIN_ALL: (Surface.KLEIN, None),
    TheoremId.CYL_NULL: (Surface.CYLINDER, (NULLHOMOTOPIC,)),
    TheoremId.CYL_GEN: (Surface.CYLINDER, (other(DeckElement(1, 0)), other(DeckElement(-1, 0)))),
    TheoremId.MS_NULL: (Surface.MOBIUS, (NULLHOMOTOPIC,)),
    TheoremId.MS_GEN: (Surface.MOBIUS, (GENERATING,)),
    TheoremId.KB_NULL: (Surface.KLEIN, (NULLHOMOTOPIC,)),
    TheoremId.KB_CYL: (Surface.KLEIN, (CYLINDRICAL,)),
    TheoremId.KB_MOB: (Surface.KLEIN, (MOBIUS,)),
}


def subject(tid: TheoremId) -> tuple[Surface, tuple[TourClass, ...] | None]:
    tid = TheoremId(tid)
    if tid is TheoremId.RALSTON_APPLICABLE:
        return Surface.MOBIUS, (GENERATING,)
    return _SUBJECT[tid]


class Observed(str, Enum):
    FOUND = "found"
    EXHAUSTED_NONE = "exhausted-none"
    BUDGET_EXCEEDED = "budget-exceeded"
    CONSTRUCTED = "constructed"


@dataclass
class Verdict:
    board: BoardSpec
    tour_class: str
    predicted: bool
    observed: Observed
    agree: bool | None
    note: str = ""
    nodes: int = 0
    witness: LiftedPath | None = field(default=None, repr=False)


@dataclass(frozen=True)
class CheckBudget:
    """Node limits for the two halves of a cross-check."""

    witness_nodes: int | None = 2_000_000
    restart_nodes: int | None = 50_000
    exhaust_nodes: int | None = None
    constructions: bool = True
    seed: int = 0


# ---------------------------------------------------------------------------
# constructions used when plain search runs out of budget


def _valid(lift: LiftedPath | None, spec: BoardSpec, classes: Sequence[TourClass] | None) -> bool:
    from ktours.search import is_tour

    if lift is None or lift.board != spec or lift.start != (0, 0):
        return False
    if not is_tour(build_graph(spec), lift):
        return False
    if classes is None:
        return True
    return class_of_deck(spec, lift.holonomy()) in classes


def _search(spec: BoardSpec, cls, budget: CheckBudget):
    from ktours.search import SearchBudget, find_tour

    b = SearchBudget(node_limit=budget.witness_nodes, restart_nodes=budget.restart_nodes)
    return find_tour(build_graph(spec), cls, b, seed=budget.seed)


def _by_rectangle(spec: BoardSpec, budget: CheckBudget):
    # any rectangle tour is nullhomotopic on every quotient
    rect = BoardSpec(Surface.RECTANGLE, spec.m, spec.n)
    if rect.m * rect.n < 2:
        return None
    out = _search(rect, NULLHOMOTOPIC, budget)
    return out.lift.on(spec) if out.found else None


def _by_subsurface(spec: BoardSpec, cls: TourClass, budget: CheckBudget):
    # cylinder and Mobius tours are Klein tours with the same lift
    if spec.surface is not Surface.KLEIN:
        return None
    if cls == CYLINDRICAL:
        sub, want = BoardSpec(Surface.CYLINDER, spec.m, spec.n), [other(DeckElement(1, 0)), other(DeckElement(-1, 0))]
    elif cls == MOBIUS:
        sub, want = BoardSpec(Surface.MOBIUS, spec.m, spec.n), [GENERATING]
    elif cls == NULLHOMOTOPIC:
        sub, want = BoardSpec(Surface.MOBIUS, spec.m, spec.n), [NULLHOMOTOPIC]
    else:
        return None
    out = _search(sub, want, budget)
    return out.lift.on(spec) if out.found else None


def _by_open_rectangle_tour(spec: BoardSpec, budget: CheckBudget):
    # open tour (0,0) -> (m-3, n-1) closed by the crossing move to (m-1, n)
    from ktours.search import SearchBudget, find_open_tour

    m, n = spec.m, spec.n
    if spec.surface is not Surface.MOBIUS or m < 3 or (m - 3, n - 1) == (0, 0):
        return None
    rect = build_graph(BoardSpec(Surface.RECTANGLE, m, n))
    b = SearchBudget(node_limit=budget.witness_nodes, restart_nodes=budget.restart_nodes)
    out = find_open_tour(rect, (0, 0), (m - 3, n - 1), b, seed=budget.seed)
    if not out.found:
        return None
    return LiftedPath(spec, out.lift.steps + ((m - 1, n),))


def _by_widening(spec: BoardSpec, cls: TourClass, budget: CheckBudget):
    from ktours.search import enumerate_tours
    from ktours.widening import find_extending, widen_iterate

    if spec.surface is not Surface.MOBIUS or spec.m < 5:
        return None
    for k in range(1, (spec.m - 1) // 4 + 1):
        base_spec = BoardSpec(Surface.MOBIUS, spec.m - 4 * k, spec.n)
        try:
            bases = enumerate_tours(build_graph(base_spec), cls, cap=200, node_limit=budget.witness_nodes)
        except RuntimeError:
            out = _search(base_spec, cls, budget)
            bases = [out.lift] if out.found else []
        for base in bases:
            if find_extending(base) is not None:
                return widen_iterate(base, k)
    return None


def construct(spec: BoardSpec, cls: TourClass, budget: CheckBudget = CheckBudget()) -> tuple[LiftedPath, str] | None:
    """Build a tour of ``cls`` on ``spec`` from smaller or simpler pieces."""
    attempts = []
    if cls == NULLHOMOTOPIC:
        attempts.append(("rectangle tour", lambda: _by_rectangle(spec, budget)))
    if spec.surface is Surface.KLEIN:
        attempts.append(("sub-surface tour", lambda: _by_subsurface(spec, cls, budget)))
    if spec.surface is Surface.MOBIUS and cls in (NULLHOMOTOPIC, GENERATING):
        attempts.append(("widening", lambda: _by_widening(spec, cls, budget)))
    if spec.surface is Surface.MOBIUS and cls == GENERATING:
        attempts.append(("open rectangle tour", lambda: _by_open_rectangle_tour(spec, budget)))
    for note, make in attempts:
        lift = make()
        if _valid(lift, spec, [cls]):
            return lift, note
    return None


# ---------------------------------------------------------------------------


def check_cell(tid: TheoremId, m: int, n: int, budget: CheckBudget = CheckBudget()) -> Verdict | None:
    """Compare one prediction with search (None if out of scope)."""
    from ktours.search import SearchBudget, Status, find_tour

    tid = TheoremId(tid)
    if not in_scope(tid, m, n):
        return None
    predicted = predict(tid, m, n)
    surface, classes = subject(tid)
    spec = BoardSpec(surface, m, n)
    graph = build_graph(spec)
    label = "any" if classes is None else "|".join(str(c) for c in classes)
    note = scope_note(tid, m, n)
    if tid is TheoremId.RALSTON_APPLICABLE:
        if not predicted:
            return None  # sufficient condition only; nothing to certify
        lift = _by_open_rectangle_tour(spec, budget)
        ok = _valid(lift, spec, classes)
        obs = Observed.CONSTRUCTED if ok else Observed.BUDGET_EXCEEDED
        return Verdict(spec, label, True, obs, True if ok else None, "open rectangle tour", witness=lift if ok else None)

    if not predicted:
        out = find_tour(graph, classes, SearchBudget(node_limit=budget.exhaust_nodes, exhaustive=True))
        if out.status is Status.EXHAUSTED_NONE:
            return Verdict(spec, label, False, Observed.EXHAUSTED_NONE, True, note, out.nodes)
        if out.status is Status.FOUND:
            return Verdict(spec, label, False, Observed.FOUND, False, note, out.nodes, out.lift)
        return Verdict(spec, label, False, Observed.BUDGET_EXCEEDED, None, note, out.nodes)

    out = find_tour(graph, classes, SearchBudget(node_limit=budget.witness_nodes, restart_nodes=budget.restart_nodes),
                    seed=budget.seed)
    if out.found and _valid(out.lift, spec, classes):
        return Verdict(spec, label, True, Observed.FOUND, True, note, out.nodes, out.lift)
    if out.status is Status.EXHAUSTED_NONE:
        return Verdict(spec, label, True, Observed.EXHAUSTED_NONE, False, note, out.nodes)
    if budget.constructions and classes is not None:
        for cls in classes:
            built = construct(spec, cls, budget)
            if built is not None:
                return Verdict(spec, label, True, Observed.CONSTRUCTED, True, built[1], out.nodes, built[0])
    return Verdict(spec, label, True, Observed.BUDGET_EXCEEDED, None, note, out.nodes)


def _check_args(args):
    return check_cell(*args)


def cross_check(
    tid: TheoremId,
    ms: Iterable[int],
    ns: Iterable[int],
    budget: CheckBudget = CheckBudget(),
    workers: int = 1,
) -> list[Verdict]:
    """Verdicts for every in-scope cell of the grid ``ms x ns``."""
    cells = [(TheoremId(tid), m, n, budget) for m in ms for n in ns]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_args, cells))
    else:
        results = []
        for c in cells:
            v = check_cell(*c)
            if v is not None:
                log.info("%s %s: %s", c[0].value, v.board, v.observed.value)
            results.append(v)
    return [v for v in results if v is not None]


def disagreements(verdicts: Sequence[Verdict]) -> list[Verdict]:
    return [v for v in verdicts if v.agree is False]


def unknowns(verdicts: Sequence[Verdict]) -> list[Verdict]:
    return [v for v in verdicts if v.agree is None]
