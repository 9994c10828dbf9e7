from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktours.boards import (
    IDENTITY,
    BoardSpec,
    DeckElement,
    Surface,
    build_graph,
    cover_neighbors,
    deck_apply,
    edge_lifts_at,
    knight_moves,
    lift_step,
    orbit_key,
    project,
    to_fundamental,
    translation_between,
)

from oracles import deck_endpoint, edge_multiset, fold

COMPACT = ["rectangle", "cylinder", "mobius", "klein"]


def board(surface, m, n):
    return BoardSpec(Surface(surface), m, n)


def quotient_pairs(g):
    return Counter(tuple(sorted(e.endpoints)) for e in g.edges)


def test_knight_moves_sorted():
    moves = knight_moves()
    assert len(moves) == 8 and list(moves) == sorted(moves)
    assert all({abs(c), abs(d)} == {1, 2} for c, d in moves)


@pytest.mark.parametrize("m, n", [(0, 3), (3, 0), (-1, 2)])
def test_nonpositive_dimensions_rejected(m, n):
    with pytest.raises(ValueError):
        BoardSpec(Surface.MOBIUS, m, n)


def test_infinite_graph_rejected():
    with pytest.raises(ValueError):
        build_graph(BoardSpec(Surface.PLANE, 3, 3))


def test_klein_1x1_has_four_loops():
    g = build_graph(board("klein", 1, 1))
    assert len(g.vertices) == 1 and len(g.edges) == 4
    assert all(e.is_loop for e in g.edges)
    assert g.degree((0, 0)) == 8


def test_cylinder_1x2_parallel_edges():
    g = build_graph(board("cylinder", 1, 2))
    assert len(g.edges) == 2
    assert g.edge_multiplicity((0, 0), (0, 1)) == 2


def test_mobius_2x3_is_six_cycle():
    g = build_graph(board("mobius", 2, 3))
    assert len(g.vertices) == 6 and len(g.edges) == 6
    assert all(g.degree(q) == 2 for q in g.vertices)
    # connected, so a single 6-cycle
    seen, stack = {(0, 0)}, [(0, 0)]
    while stack:
        q = stack.pop()
        for s in g.incidence[q]:
            if s.target not in seen:
                seen.add(s.target)
                stack.append(s.target)
    assert len(seen) == 6


def test_mobius_2x1_double_edge():
    g = build_graph(board("mobius", 2, 1))
    assert len(g.edges) == 2 and g.edge_multiplicity((0, 0), (1, 0)) == 2


def test_standard_chessboard_edges():
    assert len(build_graph(board("rectangle", 8, 8)).edges) == 168


def test_mobius_glide_uses_centre_reflection():
    # (1, 3) on the 5x2 strip lies one block up: row 1, column 5-1-1
    assert project(board("mobius", 5, 2), (1, 3)) == (3, 1)


@pytest.mark.parametrize("surface", COMPACT)
@pytest.mark.parametrize("m, n", [(m, n) for m in range(1, 7) for n in range(1, 7)])
def test_edge_multiset_matches_direct_rule(surface, m, n):
    assert quotient_pairs(build_graph(board(surface, m, n))) == edge_multiset(surface, m, n)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(COMPACT), st.integers(1, 8), st.integers(1, 8))
def test_degree_sum_is_twice_edges(surface, m, n):
    g = build_graph(board(surface, m, n))
    assert sum(g.degree(q) for q in g.vertices) == 2 * len(g.edges)


@pytest.mark.parametrize("m, n", [(1, 1), (2, 1), (3, 2), (4, 4), (5, 3), (2, 5)])
def test_containment_by_keys(m, n):
    spec = {s: board(s, m, n) for s in COMPACT}
    graphs = {s: build_graph(spec[s]) for s in COMPACT}
    rect_edges = [e.key for e in graphs["rectangle"].edges]
    for small, big in [("rectangle", "mobius"), ("mobius", "klein"), ("rectangle", "cylinder"), ("cylinder", "klein")]:
        keys = {e.key for e in graphs[big].edges}
        sources = rect_edges if small == "rectangle" else [e.key for e in graphs[small].edges]
        images = [orbit_key(spec[big], u, w)[0] for u, w in sources]
        assert set(images) <= keys
        assert len(set(images)) == len(images)  # distinct edges stay distinct


@pytest.mark.parametrize("surface", ["cylinder", "mobius", "klein"])
def test_deck_matches_hand_formula(surface):
    m, n = 3, 2
    spec = board(surface, m, n)
    for k, j in product(range(-3, 4), repeat=2):
        if surface == "cylinder" and j or surface == "mobius" and k:
            continue
        assert deck_apply(spec, DeckElement(k, j), (0, 0)) == deck_endpoint(m, n, k, j)


def test_deck_group_law_exhaustive():
    spec = board("klein", 3, 2)
    els = [DeckElement(k, j) for k, j in product(range(-3, 4), repeat=2)]
    points = [(0, 0), (2, 1), (-4, 7)]
    for g1, g2 in product(els, els):
        for v in points:
            assert deck_apply(spec, g1 * g2, v) == deck_apply(spec, g1, deck_apply(spec, g2, v))
    for g in els:
        assert g * g.inverse() == IDENTITY and g.inverse() * g == IDENTITY


def test_deck_rejects_elements_outside_group():
    with pytest.raises(ValueError):
        deck_apply(board("mobius", 3, 3), DeckElement(1, 0), (0, 0))
    with pytest.raises(ValueError):
        deck_apply(board("cylinder", 3, 3), DeckElement(0, 1), (0, 0))


@pytest.mark.parametrize("surface", ["cylinder", "mobius", "klein"])
@pytest.mark.parametrize("m, n", [(1, 1), (3, 2), (4, 3), (5, 1)])
def test_projection_equivariance_on_window(surface, m, n):
    spec = board(surface, m, n)
    ks = range(-1, 2) if surface != "mobius" else [0]
    js = range(-1, 2) if surface != "cylinder" else [0]
    deck = [DeckElement(k, j) for k in ks for j in js]
    a_range = range(-2 * m, 2 * m) if surface != "mobius" else range(m)
    b_range = range(-2 * n, 2 * n) if surface != "cylinder" else range(n)
    for a, b in product(a_range, b_range):
        v = (a, b)
        h, q = to_fundamental(spec, v)
        assert deck_apply(spec, h, v) == q
        assert q == fold(surface, m, n, a, b)[0]
        for g in deck:
            assert project(spec, deck_apply(spec, g, v)) == q


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["cylinder", "mobius", "klein"]), st.integers(1, 6), st.integers(1, 6), st.data())
def test_edge_lifts_are_consistent(surface, m, n, data):
    spec = board(surface, m, n)
    a = data.draw(st.integers(0, m - 1)) if surface == "mobius" else data.draw(st.integers(-2 * m, 2 * m))
    b = data.draw(st.integers(0, n - 1)) if surface == "cylinder" else data.draw(st.integers(-2 * n, 2 * n))
    v = (a, b)
    for w in cover_neighbors(spec, v):
        key, forward = orbit_key(spec, v, w)
        edge = next(e for e in build_graph(spec).edges if e.key == key)
        assert lift_step(spec, v, edge, forward) == w
        assert w in edge_lifts_at(spec, v, edge)
        # translating the edge keeps its key
        h = translation_between(spec, v, deck_apply(spec, to_fundamental(spec, v)[0], v))
        assert orbit_key(spec, deck_apply(spec, h, v), deck_apply(spec, h, w))[0] == key


def test_translation_between_rejects_other_squares():
    with pytest.raises(ValueError):
        translation_between(board("mobius", 3, 2), (0, 0), (1, 0))
