import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, make
from qecc.oracle import BudgetExhausted, BudgetedOracle


@pytest.fixture
def g():
    return make(4, [(0, 1), (2, 3)])


def test_query_charges_once(g):
    o = BudgetedOracle(g, 1)
    assert o.query(0, 1) == 1
    assert o.budget_used == 1
    assert o.query(1, 0) == 1
    assert o.budget_used == 1
    with pytest.raises(BudgetExhausted):
        o.query(0, 2)
    assert o.query_pairs_list() == [(0, 1), (0, 1)]


def test_rejected_query_not_recorded(g):
    o = BudgetedOracle(g, 0)
    with pytest.raises(BudgetExhausted):
        o.query(0, 1)
    assert o.transcript == [] and not o.is_known(0, 1)


def test_self_pair(g):
    with pytest.raises(ValueError):
        BudgetedOracle(g, 5).query(2, 2)


def test_remaining_budget(g):
    o = BudgetedOracle(g, 10)
    assert o.remaining_budget() == 10
    for u, v in [(0, 1), (0, 2), (0, 3)]:
        o.query(u, v)
    assert o.remaining_budget() == 7
    for _ in range(5):
        o.query(3, 0)
    assert o.remaining_budget() == 7


def test_pairs_list(g):
    o = BudgetedOracle(g, 10)
    assert o.query_pairs_list() == []
    o.query(0, 1)
    o.query(2, 3)
    assert o.query_pairs_list() == [(0, 1), (2, 3)]


def test_charge_duplicates(g):
    o = BudgetedOracle(g, 3, charge_duplicates=True)
    o.query(0, 1)
    o.query(1, 0)
    assert o.budget_used == 2
    assert [t[3] for t in o.transcript] == [True, True]
    assert o.positive_among(0, [1]) == [1]
    with pytest.raises(BudgetExhausted):
        o.query(0, 1)


def test_batch_all_or_nothing(g):
    o = BudgetedOracle(g, 2)
    with pytest.raises(BudgetExhausted):
        o.positive_among(0, [1, 2, 3])
    assert o.budget_used == 0 and o.transcript == []
    o = BudgetedOracle(g, 3)
    assert o.positive_among(2, [0, 3]) == [3]
    # (0, 2) is now cached, so only (0, 1) is charged
    assert o.positive_among(0, [2, 1]) == [1]
    assert o.budget_used == 3


def test_transcript_csv(g, tmp_path):
    o = BudgetedOracle(g, 5)
    o.query(1, 0)
    o.query(0, 2)
    o.query(0, 1)
    o.write_transcript(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().splitlines() == [
        "step,u,v,sign,charged", "0,0,1,1,1", "1,0,2,-1,1", "2,0,1,1,0"]


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8), st.integers(0, 30), st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=60))
def test_budget_and_consistency(g, q, asks):
    o = BudgetedOracle(g, q)
    seen = {}
    for u, v in asks:
        if u >= g.n or v >= g.n or u == v:
            continue
        try:
            s = o.query(u, v)
        except BudgetExhausted:
            assert o.remaining_budget() == 0 and not o.is_known(u, v)
            continue
        key = (min(u, v), max(u, v))
        assert seen.setdefault(key, s) == s
        assert s == g.sign(u, v)
        assert o.budget_used <= q
        assert o.budget_used == len(seen)
    assert len(o.transcript) >= len(seen)
