"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import time
from itertools import product

import pytest

from ktours.boards import IDENTITY, BoardSpec, DeckElement, Surface, build_graph, cover_neighbors, deck_apply, project
from ktours.homotopy import (
    CYLINDRICAL,
    NULLHOMOTOPIC,
    endpoint_of,
    green_yellow,
    obstruction,
    valid_classes,
)
from ktours.search import SearchBudget, Status, enumerate_tours, find_tour, is_tour, tour_class
from ktours.theorems import Observed, TheoremId as T, cross_check, disagreements, predict, unknowns
from ktours.widening import (
    find_extending,
    find_splice_base,
    outer_decompose,
    reroot,
    splice_4_by_n,
    splice_m_by_1,
    widen_iterate,
)


@pytest.fixture
def report(capsys):
    def emit(number, checks):
        failed = [name for name, ok in checks if not ok]
        line = f"criterion {number}: {'PASS' if not failed else 'FAIL'}"
        if failed:
            line += " (" + "; ".join(failed) + ")"
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line
    return emit


def extended_cells(tid):
    """Predicted-true cells with 7 <= max(m, n) <= 10 and mn <= 60."""
    return [(m, n) for m, n in product(range(1, 11), repeat=2)
            if 7 <= max(m, n) <= 10 and m * n <= 60 and predict(tid, m, n)]


def witnesses_for(tid):
    verdicts = []
    for m, n in extended_cells(tid):
        verdicts.extend(cross_check(tid, [m], [n]))
    return verdicts


def test_criterion_1_ms_null(report):
    t0 = time.monotonic()
    grid = cross_check(T.MS_NULL, range(1, 7), range(1, 7))
    elapsed = time.monotonic() - t0
    ext = witnesses_for(T.MS_NULL)
    report(1, [
        ("36 cells checked", len(grid) == 36),
        ("no disagreement on 6x6", not disagreements(grid)),
        ("all 6x6 cells decided", not unknowns(grid)),
        (f"6x6 within 10 minutes ({elapsed:.1f}s)", elapsed <= 600),
        (f"every one of {len(ext)} extended predicted-true cells has a witness",
         bool(ext) and all(v.agree and v.observed in (Observed.FOUND, Observed.CONSTRUCTED) for v in ext)),
        ("extended witnesses are tours", all(is_tour(build_graph(v.board), v.witness) for v in ext)),
    ])


def test_criterion_2_ms_gen(report):
    grid = cross_check(T.MS_GEN, range(1, 7), range(1, 7))
    m32 = cross_check(T.MS_GEN, [3], [2])[0]
    m4 = cross_check(T.MS_GEN, [4], range(1, 6))
    ext = witnesses_for(T.MS_GEN)
    report(2, [
        ("no disagreement on 6x6", not disagreements(grid) and len(grid) == 36),
        ("all 6x6 cells decided", not unknowns(grid)),
        ("M(3,2) generating certified none", m32.observed is Observed.EXHAUSTED_NONE),
        ("M(4,n) generating certified none for n<=5", all(v.observed is Observed.EXHAUSTED_NONE for v in m4)),
        (f"every one of {len(ext)} extended predicted-true cells has a witness",
         bool(ext) and all(v.agree and v.observed in (Observed.FOUND, Observed.CONSTRUCTED) for v in ext)),
    ])


def test_criterion_3_klein(report):
    grids = {tid: cross_check(tid, range(1, 6), range(1, 6)) for tid in (T.KB_NULL, T.KB_CYL, T.KB_MOB)}
    k22 = build_graph(BoardSpec(Surface.KLEIN, 2, 2))
    every = enumerate_tours(k22, None, class_pruning=False)
    plain = cross_check(T.WATKINS_KLEIN_ALL, range(1, 6), range(1, 6))
    exhaustive = SearchBudget.unlimited()
    report(3, [
        *[(f"{tid.value} agrees on 5x5", len(v) == 25 and not disagreements(v) and not unknowns(v))
          for tid, v in grids.items()],
        ("K(2,2) nullhomotopic certified none", find_tour(k22, NULLHOMOTOPIC, exhaustive).status
         is Status.EXHAUSTED_NONE),
        ("K(2,2) has tours, none nullhomotopic, by full listing",
         bool(every) and all(tour_class(t) != NULLHOMOTOPIC for t in every)),
        ("K(2,2) cylindrical certified none", find_tour(k22, CYLINDRICAL, exhaustive).status
         is Status.EXHAUSTED_NONE),
        ("a tour found on every K(m,n), m,n<=5",
         len(plain) == 25 and all(v.observed is Observed.FOUND for v in plain)),
    ])


def test_criterion_4_widening(report):
    base = next(t for t in enumerate_tours(build_graph(BoardSpec(Surface.MOBIUS, 4, 4)), NULLHOMOTOPIC, 500)
                if find_extending(t) is not None)
    t0 = time.monotonic()
    one = widen_iterate(base, 1)
    first = time.monotonic() - t0
    t0 = time.monotonic()
    two, stages = widen_iterate(base, 2, keep_steps=True)
    per_step = (time.monotonic() - t0) / 2
    checks = [(f"one step took {first:.3f}s <= 1s", first <= 1.0),
              (f"two steps averaged {per_step:.3f}s <= 1s", per_step <= 1.0),
              ("first stage matches a single widening", reroot(stages[0]) == one)]
    for width, lift in ((8, one), (12, two)):
        g = build_graph(BoardSpec(Surface.MOBIUS, width, 4))
        checks += [
            (f"M({width},4) is a tour", lift.board == g.spec and is_tour(g, lift)),
            (f"M({width},4) nullhomotopic", tour_class(lift) == NULLHOMOTOPIC),
            (f"M({width},4) endpoints exactly (0,0)", lift.start == lift.end == (0, 0)),
        ]
    report(4, checks)


def test_criterion_5_splices(report):
    m_chain = find_splice_base(BoardSpec(Surface.MOBIUS, 6, 1), splice_m_by_1, 4)
    n_chain = find_splice_base(BoardSpec(Surface.MOBIUS, 4, 4), splice_4_by_n, 3)

    def valid(chain):
        return all(c.start == c.end == (0, 0) and is_tour(build_graph(c.board), c)
                   and tour_class(c) == NULLHOMOTOPIC for c in chain)

    report(5, [
        ("m x 1 chain reaches M(14,1)", m_chain is not None and m_chain[-1].board.m == 14),
        ("m x 1 chain valid and nullhomotopic", m_chain is not None and valid(m_chain)),
        ("4 x n chain reaches M(4,10)", n_chain is not None and n_chain[-1].board.n == 10),
        ("4 x n chain valid and nullhomotopic", n_chain is not None and valid(n_chain)),
    ])


def test_criterion_6_structure(report):
    k11 = build_graph(BoardSpec(Surface.KLEIN, 1, 1))
    c12 = build_graph(BoardSpec(Surface.CYLINDER, 1, 2))
    m23 = build_graph(BoardSpec(Surface.MOBIUS, 2, 3))
    cycle = len(m23.edges) == 6 and all(m23.degree(q) == 2 for q in m23.vertices) and len(
        enumerate_tours(m23, None)) == 2
    d3 = outer_decompose(BoardSpec(Surface.MOBIUS, 7, 3))
    d4 = outer_decompose(BoardSpec(Surface.MOBIUS, 7, 4))
    report(6, [
        ("Klein 1x1 has 4 edges", len(k11.edges) == 4),
        ("Cylinder 1x2 has 2 parallel edges", len(c12.edges) == 2 and c12.edge_multiplicity((0, 0), (0, 1)) == 2),
        ("Mobius 2x3 is a 6-cycle", cycle),
        ("strip outer graph has 8 components at m=7", len(d3.components) == 8),
        ("n=3 outer cycles are 2 of length 6", sorted(map(len, d3.board_cycles)) == [6, 6]),
        ("n=4 outer cycles are 4 of length 4", sorted(map(len, d4.board_cycles)) == [4, 4, 4, 4]),
    ])


def test_criterion_7_properties(report):
    spec = BoardSpec(Surface.KLEIN, 3, 2)
    els = [DeckElement(k, j) for k, j in product(range(-3, 4), repeat=2)]
    group_law = all(endpoint_of(spec, g1 * g2) == deck_apply(spec, g1, endpoint_of(spec, g2))
                    for g1, g2 in product(els, els)) and all(g * g.inverse() == IDENTITY for g in els)

    def equivariant(surface, m, n):
        s = BoardSpec(surface, m, n)
        deck = [DeckElement(k, j) for k in range(-1, 2) for j in range(-1, 2)
                if surface is Surface.KLEIN or k == 0]
        cols = range(-2 * m, 2 * m) if surface is Surface.KLEIN else range(m)
        return all(project(s, deck_apply(s, g, (a, b))) == project(s, (a, b))
                   for a in cols for b in range(-2 * n, 2 * n) for g in deck)

    def colour_law_mobius(m, n):
        s = BoardSpec(Surface.MOBIUS, m, n)
        return all((green_yellow(s, v) == green_yellow(s, w)) == (v[1] // n != w[1] // n)
                   for v in product(range(m), range(-2 * n, 2 * n)) for w in cover_neighbors(s, v))

    def colour_law_klein(m, n):
        s = BoardSpec(Surface.KLEIN, m, n)
        return all((green_yellow(s, v) == green_yellow(s, w)) == (v[0] // m != w[0] // m)
                   for v in product(range(-2 * m, 2 * m), range(-2 * n, 2 * n)) for w in cover_neighbors(s, v))

    cells = [(s, m, n, c) for s in (Surface.MOBIUS, Surface.KLEIN) for m in range(1, 25)
             for n in range(1, 24 // m + 1) for c in valid_classes(s) if obstruction(BoardSpec(s, m, n), c)]
    certified = all(find_tour(build_graph(BoardSpec(s, m, n)), c, SearchBudget.unlimited()).status
                    is Status.EXHAUSTED_NONE for s, m, n, c in cells)
    report(7, [
        ("deck group law for |k|,|j|<=3", group_law),
        ("projection equivariance on a 4-domain window",
         all(equivariant(s, m, n) for s in (Surface.MOBIUS, Surface.KLEIN) for m, n in [(3, 2), (4, 3), (1, 1)])),
        ("colouring edge law (Mobius m,n even)", all(colour_law_mobius(m, n) for m, n in [(2, 2), (4, 2), (4, 6)])),
        ("colouring edge law (Klein m odd, n even)", all(colour_law_klein(m, n) for m, n in [(3, 2), (5, 4)])),
        (f"obstruction implies certified none on all {len(cells)} cells with mn<=24", certified and len(cells) == 103),
    ])
