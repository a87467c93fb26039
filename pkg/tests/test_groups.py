import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckegrid.groups import Group, exact_divisors, hall_product, normalize, reduce_m, reduce_p


def test_normalize_examples():
    assert normalize(22).S == frozenset()
    assert normalize(22, [2]).S == frozenset({2})
    assert normalize(30, [2, 3]).S == frozenset({2, 3, 6})


def test_normalize_rejects_non_exact():
    with pytest.raises(ValueError):
        normalize(12, [2])


def test_reduce_p_examples():
    assert reduce_p(Group.parse("22"), 2) == Group.parse("11")
    assert reduce_p(Group.parse("22+2"), 2) == Group.parse("11")
    assert reduce_p(Group.parse("11"), 7) == Group.parse("11")


def test_reduce_m_examples():
    G = Group.parse("22")
    assert reduce_m(G, 11) == Group.parse("2")
    assert reduce_m(G, 1) == G
    assert reduce_m(G, 4) == Group.parse("11")


def test_parse_and_display():
    assert str(Group.parse("22+2")) == "22+2"
    assert str(Group.parse("30+2,3")) == "30+2,3,6"
    assert str(Group.parse("10+")) == "10+"
    assert str(Group.parse("30+2,3,5")) == "30+"


levels = st.integers(1, 400)
primes = st.sampled_from([2, 3, 5, 7, 11, 13])


@st.composite
def groups(draw):
    n = draw(levels)
    ds = [d for d in exact_divisors(n) if d > 1]
    pick = draw(st.lists(st.sampled_from(ds), max_size=3)) if ds else []
    return normalize(n, pick)


@given(groups(), primes, primes)
def test_reductions_commute(G, p, l):
    assert reduce_p(reduce_p(G, p), l) == reduce_p(reduce_p(G, l), p)


@given(groups(), st.lists(primes, max_size=4))
def test_reduce_m_order_free(G, ps):
    m = 1
    H = G
    for p in reversed(ps):
        m *= p
        H = reduce_p(H, p)
    assert reduce_m(G, m) == H


@given(groups(), primes)
def test_reduced_set_is_closed(G, p):
    H = reduce_p(G, p)
    full = set(H.S) | {1}
    for a in full:
        for b in full:
            assert hall_product(a, b) in full
            assert H.N % a == 0
