from itertools import product

import pytest

from ktours.boards import BoardSpec, Surface, build_graph
from ktours.homotopy import CYLINDRICAL, GENERATING, MOBIUS, NULLHOMOTOPIC, obstruction
from ktours.search import is_tour, tour_class
from ktours.theorems import (
    CheckBudget,
    Observed,
    OutOfScope,
    TheoremId as T,
    check_cell,
    construct,
    cross_check,
    disagreements,
    predict,
    scope_note,
    unknowns,
)

GRID12 = list(product(range(1, 13), repeat=2))


@pytest.mark.parametrize("tid, m, n, expected", [
    (T.MS_NULL, 3, 4, False), (T.MS_GEN, 5, 1, False), (T.KB_CYL, 2, 2, False), (T.KB_MOB, 4, 6, False),
    (T.KB_MOB, 4, 5, True), (T.MS_NULL, 1, 1, True), (T.MS_NULL, 4, 4, True), (T.MS_GEN, 3, 3, True),
    (T.SCHWENK_RECT, 5, 6, True), (T.SCHWENK_RECT, 3, 10, True), (T.SCHWENK_RECT, 8, 3, False),
    (T.WATKINS_MOBIUS, 3, 4, False), (T.WATKINS_MOBIUS, 2, 3, True), (T.CYL_NULL, 3, 3, False),
    (T.CYL_GEN, 4, 3, True), (T.KB_NULL, 2, 2, False), (T.KB_NULL, 1, 1, True),
    (T.RALSTON_APPLICABLE, 5, 7, True), (T.RALSTON_APPLICABLE, 5, 5, False),
])
def test_predict_examples(tid, m, n, expected):
    assert predict(tid, m, n) is expected


def test_schwenk_1x1_out_of_scope():
    with pytest.raises(OutOfScope):
        predict(T.SCHWENK_RECT, 1, 1)
    assert predict(T.SCHWENK_RECT, 1, 2) is False


def test_klein_classes_at_1x1():
    assert predict(T.KB_CYL, 1, 1) is False and predict(T.KB_MOB, 1, 1) is False
    assert scope_note(T.KB_CYL, 1, 1)
    assert not scope_note(T.KB_CYL, 2, 1)


def test_dimensions_not_symmetrised():
    asym = [(m, n) for m, n in GRID12 if predict(T.MS_NULL, m, n) != predict(T.MS_NULL, n, m)]
    assert (2, 3) in asym and predict(T.MS_NULL, 3, 2) and not predict(T.MS_NULL, 2, 3)


def test_bad_dimensions():
    with pytest.raises(ValueError):
        predict(T.MS_GEN, 0, 3)


@pytest.mark.parametrize("m, n", GRID12)
def test_implication_chains(m, n):
    if max(m, n) > 1 and predict(T.SCHWENK_RECT, m, n):
        assert predict(T.MS_NULL, m, n) and predict(T.KB_NULL, m, n)
    if predict(T.CYL_NULL, m, n):
        assert predict(T.KB_NULL, m, n)
    if predict(T.CYL_GEN, m, n):
        assert predict(T.KB_CYL, m, n)
    if max(m, n) > 1 and predict(T.MS_GEN, m, n):
        assert predict(T.KB_MOB, m, n)
    if predict(T.MS_NULL, m, n) or predict(T.MS_GEN, m, n):
        assert predict(T.WATKINS_MOBIUS, m, n)


PAIRS = [(Surface.MOBIUS, NULLHOMOTOPIC, T.MS_NULL), (Surface.MOBIUS, GENERATING, T.MS_GEN),
         (Surface.KLEIN, NULLHOMOTOPIC, T.KB_NULL), (Surface.KLEIN, CYLINDRICAL, T.KB_CYL),
         (Surface.KLEIN, MOBIUS, T.KB_MOB)]


@pytest.mark.parametrize("surface, cls, tid", PAIRS)
def test_obstruction_means_predicate_false(surface, cls, tid):
    for m, n in product(range(1, 21), repeat=2):
        if obstruction(BoardSpec(surface, m, n), cls):
            assert not predict(tid, m, n), (m, n)


def test_mobius_4_by_n_generating_certified_none():
    verdicts = cross_check(T.MS_GEN, [4], range(1, 6))
    assert [v.observed for v in verdicts] == [Observed.EXHAUSTED_NONE] * 5
    assert not disagreements(verdicts)


def test_mobius_3x2_generating_certified_none():
    v = check_cell(T.MS_GEN, 3, 2)
    assert v.predicted is False and v.observed is Observed.EXHAUSTED_NONE and v.agree


def test_watkins_klein_all_found():
    verdicts = cross_check(T.WATKINS_KLEIN_ALL, range(1, 6), range(1, 6))
    assert len(verdicts) == 25
    assert all(v.observed is Observed.FOUND and v.agree for v in verdicts)


@pytest.mark.parametrize("tid, size", [(T.MS_NULL, 6), (T.MS_GEN, 6), (T.KB_NULL, 5), (T.KB_CYL, 5),
                                       (T.KB_MOB, 5), (T.WATKINS_MOBIUS, 6), (T.CYL_NULL, 5),
                                       (T.SCHWENK_RECT, 6)])
def test_cross_check_grid_agrees(tid, size):
    verdicts = cross_check(tid, range(1, size + 1), range(1, size + 1))
    assert not disagreements(verdicts) and not unknowns(verdicts)
    for v in verdicts:
        if v.witness is not None:
            assert is_tour(build_graph(v.board), v.witness)


def test_ralston_cells_constructed():
    verdicts = cross_check(T.RALSTON_APPLICABLE, range(5, 10), range(5, 10))
    built = [v for v in verdicts if v.observed is Observed.CONSTRUCTED]
    assert built and len(built) == len(verdicts)
    for v in built:
        assert tour_class(v.witness) == GENERATING


def test_cross_check_parallel_matches_serial():
    a = cross_check(T.KB_MOB, range(1, 4), range(1, 4))
    b = cross_check(T.KB_MOB, range(1, 4), range(1, 4), workers=2)
    assert [(v.board, v.observed, v.agree) for v in a] == [(v.board, v.observed, v.agree) for v in b]


def test_budget_exceeded_is_unknown_not_disagreement():
    v = check_cell(T.MS_NULL, 4, 4, CheckBudget(witness_nodes=1, restart_nodes=1, constructions=False))
    assert v.observed is Observed.BUDGET_EXCEEDED and v.agree is None


@pytest.mark.parametrize("surface, m, n, cls", [
    (Surface.MOBIUS, 9, 4, NULLHOMOTOPIC), (Surface.KLEIN, 6, 5, NULLHOMOTOPIC),
    (Surface.MOBIUS, 7, 5, GENERATING), (Surface.KLEIN, 5, 6, MOBIUS),
])
def test_constructions_without_search(surface, m, n, cls):
    spec = BoardSpec(surface, m, n)
    built = construct(spec, cls, CheckBudget(witness_nodes=300_000))
    assert built is not None
    lift, note = built
    assert is_tour(build_graph(spec), lift) and tour_class(lift) == cls and note
