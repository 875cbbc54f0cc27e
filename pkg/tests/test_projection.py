from fractions import Fraction

import pytest
from hypothesis import given, settings

from oshusp import oracle
from oshusp.model import Pattern
from oshusp.projection import (I_EXT, S_EXT, extend_and_project, find_extension_items,
                               on_shelf_stats, pattern_utility_in_sequence, peu, periodical_utility,
                               project_first_level, project_pattern, rest_utility, tpeu, trsu,
                               utility_at_extension_position)
from oshusp.qmatrix import build_matrices, compute_ptsu

from conftest import P, qs, small_databases


@pytest.fixture(scope="module")
def ms(ex):
    return build_matrices(ex)


def chain_of(r, matrices):
    return project_pattern(r, matrices)


def test_utility_at_extension_position(ex):
    U = ex.utilities
    assert utility_at_extension_position(P([1], [3]), 3, qs(ex, 2, 2), U) == 9
    assert utility_at_extension_position(P([1], [3]), 4, qs(ex, 2, 2), U) == 10
    assert utility_at_extension_position(P([2], [3]), 2, qs(ex, 1, 1), U) == 7
    with pytest.raises(ValueError):
        utility_at_extension_position(P([1], [3]), 2, qs(ex, 2, 2), U)


def test_pattern_utility_in_sequence(ex):
    U = ex.utilities
    assert pattern_utility_in_sequence(P([1], [3]), qs(ex, 2, 2), U) == 10
    assert pattern_utility_in_sequence(P([2, 4]), qs(ex, 1, 1), U) == 6
    assert pattern_utility_in_sequence(P([6]), qs(ex, 1, 1), U) == 0


def test_rest_utility(ex):
    U = ex.utilities
    assert rest_utility(P([1], [1]), 2, qs(ex, 2, 2), U) == 17
    assert rest_utility(P([1], [3]), 3, qs(ex, 2, 2), U) == 10
    assert rest_utility(P([3]), 4, qs(ex, 2, 2), U) == 0


def test_peu(ex):
    U = ex.utilities
    assert peu(P([1], [3]), qs(ex, 2, 1), U) == 10
    assert peu(P([1], [3]), qs(ex, 2, 2), U) == 19
    assert peu(P([4]), qs(ex, 2, 1), U) == oracle.peu(P([4]), qs(ex, 2, 1), U) == 19
    assert peu(P([3], [4]), qs(ex, 2, 1), U) == 0


def test_tpeu(ex, ms):
    ac = chain_of(P([1], [3]), ms[2])
    assert tpeu(P([1], [3]), 2, ac) == 29
    assert tpeu(P([1], [3]), 1, ac) == 0
    assert tpeu(P([1], [3]), 3, chain_of(P([1], [3]), ms[3])) == 15
    with pytest.raises(ValueError):
        tpeu(P([1]), 2, ac)


def test_trsu(ex, ms):
    parent = chain_of(P([1], [3]), ms[2])
    assert trsu(P([1], [3], [2]), 2, parent) == 19
    assert trsu(P([1], [3], [3]), 2, parent) == 19
    assert trsu(P([1], [3], [6]), 2, parent) == 0
    with pytest.raises(ValueError):
        trsu(P([2], [3]), 2, parent)


def test_periodical_utility(ex, ms):
    assert periodical_utility(P([1], [3]), 2, chain_of(P([1], [3]), ms[2])) == 19
    assert periodical_utility(P([1], [3]), 1, chain_of(P([1], [3]), ms[1])) == 0
    assert periodical_utility(P([3]), 1, chain_of(P([3]), ms[1])) == 8


def test_on_shelf_stats(ex):
    ptsu = compute_ptsu(ex)
    assert on_shelf_stats(P([1], [3]), ex, ptsu) == (frozenset({2, 3}), 28, Fraction(28, 76))
    ot, ou, our = on_shelf_stats(P([3]), ex, ptsu)
    assert ot == {1, 2, 3} and sum(ptsu[t] for t in ot) == 110
    assert ou == sum(oracle.pu(P([3]), t, ex) for t in ot)
    assert on_shelf_stats(P([6], [6]), ex, ptsu)[1:] == (0, Fraction(0))


def test_extension_items(ex, ms):
    a = project_first_level(ms[2])[1]
    ilist, slist = find_extension_items(a)
    assert set(ilist) >= {3, 4, 5}
    assert set(slist) >= {1, 2, 3, 4, 5}
    ac = extend_and_project(a, 3, S_EXT)
    assert 2 in find_extension_items(ac)[1]
    last = chain_of(P([2, 3]), ms[2])  # b c closes QS_{2,2}
    assert find_extension_items(last) == ([], [])


def test_extend_and_project(ex, ms):
    a = project_first_level(ms[2])[1]
    ac = extend_and_project(a, 3, S_EXT)
    assert [(ul.sid, ul.peu) for ul in ac.lists] == [(1, 10), (2, 19)]
    assert [len(ul.elements) for ul in ac.lists] == [
        len(oracle.instance_utilities(P([1], [3]), qs(ex, 2, sid), ex.utilities)) for sid in (1, 2)]
    assert [len(ul.elements) for ul in ac.lists] == [1, 2]
    a_c = extend_and_project(a, 3, I_EXT)
    assert a_c.pattern == P([1, 3])
    assert [ul.sid for ul in a_c.lists] == [1]
    assert not extend_and_project(a, 6, S_EXT)
    with pytest.raises(ValueError):
        extend_and_project(a, 3, "X")


def _descendants(db, cap=3):
    return oracle.enumerate_all_patterns(db, cap)


@settings(max_examples=40, deadline=None)
@given(small_databases())
def test_chain_matches_direct_scan(db):
    ms = build_matrices(db)
    for r in _descendants(db):
        for t in db.periods:
            chain = project_pattern(r, ms[t])
            assert chain.pu() == oracle.pu(r, t, db)
            assert chain.tpeu() == oracle.tpeu(r, t, db)
            for ul in chain.lists:
                if all(e.ru == 0 for e in ul.elements):
                    assert ul.peu == 0


@settings(max_examples=40, deadline=None)
@given(small_databases())
def test_incremental_extension_matches_rebuild(db):
    ms = [m for t in sorted(build_matrices(db)) for m in build_matrices(db)[t]]
    first = project_first_level(ms)
    stack = list(first.values())
    while stack:
        chain = stack.pop()
        if len(chain.pattern) >= 3:
            continue
        i_ext, s_ext = find_extension_items(chain)
        for kind, items in ((I_EXT, i_ext), (S_EXT, s_ext)):
            for item in items:
                child = extend_and_project(chain, item, kind)
                fresh = project_pattern(child.pattern, ms)
                assert [(ul.sid, ul.time, ul.elements) for ul in child.lists] == \
                       [(ul.sid, ul.time, ul.elements) for ul in fresh.lists]
                stack.append(child)


@settings(max_examples=40, deadline=None)
@given(small_databases())
def test_trsu_at_most_parent_tpeu(db):
    ms = build_matrices(db)
    for r in _descendants(db, 2):
        if len(r) < 2:
            continue
        for t in db.periods:
            parent = project_pattern(r.parent(), ms[t])
            assert trsu(r, t, parent) == oracle.trsu(r, t, db)
            assert trsu(r, t, parent) <= parent.tpeu()


@settings(max_examples=40, deadline=None)
@given(small_databases())
def test_no_utility_outside_on_shelf_periods(db):
    for r in _descendants(db, 2):
        ot = oracle.ot_of(r, db)
        for t in db.periods - ot:
            assert oracle.pu(r, t, db) == 0
