from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oshusp import osums_plus
from oshusp.ingest import loads
from oshusp.oracle import OracleConfig, oracle_mine
from oshusp.osums import mine_osums
from oshusp.osums_plus import mine_osums_plus
from oshusp.report import Limits, MiningAborted

from conftest import P, small_databases

FLAGS = [{}, {"gdp": False}, {"gwp": False}, {"gdp": False, "gwp": False}]


def oracle_set(db, xi, mode="intersection"):
    return {(m.pattern, m.ou) for m in oracle_mine(db, OracleConfig(xi, ot_mode=mode))}


def test_same_as_osums(ex):
    assert mine_osums_plus(ex, "0.3").result_set() == mine_osums(ex, "0.3").result_set()


def test_threshold_boundary(ex):
    assert P([1], [3]) in mine_osums_plus(ex, "0.36").pattern_set()
    assert P([1], [3]) not in mine_osums_plus(ex, "0.37").pattern_set()
    assert mine_osums_plus(ex, "0.37").result_set() == oracle_set(ex, "0.37")


def test_emitted_values(ex):
    [m] = [m for m in mine_osums_plus(ex, "0.3").patterns if m.pattern == P([1], [3])]
    assert (m.ou, m.our, m.ot) == (28, Fraction(28, 76), {2, 3})


@pytest.mark.parametrize("flags", FLAGS)
@pytest.mark.parametrize("xi", ["0.05", "0.3", "0.5"])
def test_strategies_are_lossless(ex, xi, flags):
    assert mine_osums_plus(ex, xi, **flags).result_set() == oracle_set(ex, xi)


def test_a_chain_spans_periods(ex, monkeypatch):
    seen = {}
    real = osums_plus.extend_and_project

    def spy(chain, item, kind):
        child = real(chain, item, kind)
        seen[child.pattern] = child
        return child

    monkeypatch.setattr(osums_plus, "extend_and_project", spy)
    mine_osums_plus(ex, "0.05")
    ac = seen[P([1], [3])]
    assert ac.tpeu_by_period() == {2: 29, 3: 15}
    assert ac.pu_by_period() == {2: 19, 3: 9}


def test_growing_denominator_under_union():
    # item 3 is on shelf in an extra period; <{1},{3}> gains period 2 under union.
    db = loads("1 1 1:2 -1 3:1 -1 -2\n2 1 3:5 -1 -2\n", "1 1\n3 1\n", "1 1\n3 1 2\n")
    for xi in ("0.1", "0.2", "0.3", "0.5"):
        truth = oracle_set(db, xi, "union")
        assert mine_osums_plus(db, xi, ot_mode="union").result_set() == truth
    [m] = [m for m in oracle_mine(db, OracleConfig("0.1", ot_mode="union")) if m.pattern == P([1], [3])]
    assert m.ot == {1, 2} and m.our == Fraction(3, 8)


def test_memory_limit_aborts(ex):
    with pytest.raises(MiningAborted):
        mine_osums_plus(ex, "0.05", limits=Limits(max_live_bytes=10))


@settings(max_examples=60, deadline=None)
@given(small_databases(), st.sampled_from(["0.05", "0.2", "0.5"]),
       st.sampled_from(["intersection", "union"]))
def test_oracle_equivalence(db, xi, mode):
    truth = oracle_set(db, xi, mode)
    base = mine_osums_plus(db, xi, ot_mode=mode)
    assert base.result_set() == truth
    for flags in FLAGS[1:]:
        r = mine_osums_plus(db, xi, ot_mode=mode, **flags)
        assert r.result_set() == truth
        assert base.candidates_generated <= r.candidates_generated
