import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssforms.correspondence import orient
from ssforms.csidh import CsidhParams, act, exchange, recovery_candidates, run_trials
from ssforms.ecfp import is_isomorphic, isogeny_graph, locate, twist, twist_parameter
from ssforms.errors import DomainError
from ssforms.qform import BQF

P = CsidhParams((3, 5, 7))
TABLE = orient(P.p)
keys = st.tuples(*(st.integers(-2, 2) for _ in range(3)))


def test_params():
    assert P.p == 419 and P.start().j == 1728 % 419
    assert CsidhParams((3, 7)).p == 83
    for bad in ((3, 13), (3, 3), (2, 5)):
        with pytest.raises(DomainError):
            CsidhParams(bad)
    with pytest.raises(DomainError):
        CsidhParams((3, 7), bound=-1)
    with pytest.raises(DomainError):
        act(P, (1, 0), P.start())


def test_single_steps_are_graph_neighbours():
    E0 = P.start()
    for i, ell in enumerate(P.ells):
        G = isogeny_graph(P.p, ell)
        nbrs = set(G.neighbours(locate(E0)))
        plus = act(P, tuple(int(k == i) for k in range(3)), E0)
        minus = act(P, tuple(-int(k == i) for k in range(3)), E0)
        assert {locate(plus), locate(minus)} == nbrs


@settings(max_examples=25, deadline=None)
@given(keys, keys)
def test_action_commutes(a, b):
    E0 = P.start()
    assert is_isomorphic(act(P, a, act(P, b, E0)), act(P, b, act(P, a, E0)))


@settings(max_examples=25, deadline=None)
@given(keys)
def test_inverse_key_and_twist(a):
    E0 = P.start()
    EA = act(P, a, E0)
    neg = tuple(-x for x in a)
    assert is_isomorphic(act(P, neg, EA), E0)
    # E0 is its own twist, so [-a]E0 is the quadratic twist of [a]E0
    back = act(P, neg, E0)
    assert is_isomorphic(back, EA) if EA.j == 1728 % P.p else is_isomorphic(back, twist(EA, twist_parameter(P.p)))


def test_recovery_candidates_shape():
    cands = recovery_candidates(419, BQF(4, 0, 419), BQF(4, 0, 419))
    assert [f for f, _ in cands] == [BQF(4, 0, 419)]
    fa = TABLE.form_of(act(P, (1, 0, 0), P.start()))
    cands = recovery_candidates(419, fa, fa)
    assert 2 <= len(cands) <= 4 and len({f for f, _ in cands}) == len(cands)


def test_exchange_fixed_keys():
    t = exchange(P, (1, -1, 0), (0, 1, 1), TABLE)
    assert t.ok and t.candidates[t.matched][1] == t.j_shared
    d = t.as_dict()
    assert d["p"] == 419 and d["key_a"] == [1, -1, 0] and d["matched"] == t.matched


def test_twenty_trials():
    ts = run_trials(P, 20, seed=1)
    assert len(ts) == 20 and all(t.ok for t in ts)


def test_larger_bound():
    ts = run_trials(CsidhParams((3, 5, 7), bound=3), 5, seed=2)
    assert all(t.ok for t in ts)
