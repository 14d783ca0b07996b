"""Degree-set algebra vs. a brute-force set model on a finite window."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densdeg import setalg

WINDOW = 200


# ---------------------------------------------------------------------------
# brute-force model: every expression is mirrored by a frozenset of [1, WINDOW]


def brute_finite(members):
    return frozenset(m for m in members if 1 <= m <= WINDOW)


def brute_tail(m, start):
    return frozenset(n for n in range(start, WINDOW + 1) if n % m == 0)


def brute_product(a, b):
    return frozenset(x * y for x in a for y in b if x * y <= WINDOW)


def brute_scale(c, a):
    return frozenset(c * x for x in a if c * x <= WINDOW)


def brute_saturate(a):
    return frozenset(m * x for x in a for m in range(1, WINDOW // x + 1))


def rand_expr(rng, depth):
    """Return (DegreeSet, frozenset) built by the same random choices."""
    if depth == 0 or rng.random() < 0.3:
        kind = rng.choice(["finite", "tail", "multiples", "naturals", "complement"])
        if kind == "finite":
            members = rng.sample(range(1, 60), rng.randint(0, 8))
            return setalg.finite(members), brute_finite(members)
        if kind == "tail":
            m = rng.randint(1, 6)
            start = rng.randint(1, 40)
            return setalg.tail(m, start), brute_tail(m, ((start + m - 1) // m) * m)
        if kind == "multiples":
            m = rng.randint(1, 8)
            return setalg.multiples(m), brute_tail(m, m)
        if kind == "naturals":
            start = rng.randint(1, 30)
            return setalg.naturals(start), frozenset(range(start, WINDOW + 1))
        removed = rng.sample(range(1, 40), rng.randint(0, 6))
        start = rng.randint(1, 10)
        return (
            setalg.complement_within_naturals(removed, start=start),
            frozenset(range(start, WINDOW + 1)) - frozenset(removed),
        )
    op = rng.choice(
        ["union", "intersect", "difference", "product", "scale", "saturate"]
    )
    a, sa = rand_expr(rng, depth - 1)
    if op == "scale":
        c = rng.randint(1, 5)
        return setalg.scale(c, a), brute_scale(c, sa)
    if op == "saturate":
        return setalg.saturate(a), brute_saturate(sa)
    b, sb = rand_expr(rng, depth - 1)
    if op == "union":
        return setalg.union(a, b), sa | sb
    if op == "intersect":
        return setalg.intersect(a, b), sa & sb
    if op == "difference":
        return setalg.difference(a, b), sa - sb
    return setalg.product(a, b), brute_product(sa, sb)


def test_random_expressions_match_brute_force():
    rng = random.Random(20260815)
    for i in range(500):
        ds, model = rand_expr(rng, rng.randint(0, 4))
        assert frozenset(ds.materialize(WINDOW)) == model, f"expr #{i}: {ds.to_json()}"


def test_random_expressions_json_round_trip():
    rng = random.Random(99)
    for _ in range(100):
        ds, _ = rand_expr(rng, rng.randint(0, 4))
        j = ds.to_json()
        # canonical-JSON safe and stable through a serialize cycle
        back = setalg.from_json(json.loads(json.dumps(j)))
        assert setalg.equals_on_window(ds, back, WINDOW)


# ---------------------------------------------------------------------------
# constructors


@pytest.mark.parametrize(
    "ds,expected",
    [
        (setalg.finite([3, 1, 3, 2]), [1, 2, 3]),
        (setalg.finite([]), []),
        (setalg.naturals(1), list(range(1, 21))),
        (setalg.naturals(7), list(range(7, 21))),
        (setalg.multiples(4), [4, 8, 12, 16, 20]),
        (setalg.tail(2, 6), [6, 8, 10, 12, 14, 16, 18, 20]),
        (setalg.tail(3, 7), [9, 12, 15, 18]),  # start rounds up to a multiple
        (setalg.complement_within_naturals([2, 3, 5], start=2), [4, 6] + list(range(7, 21))),
        (setalg.complement_within_naturals([], start=4), list(range(4, 21))),
    ],
)
def test_constructors(ds, expected):
    assert ds.materialize(20) == expected


def test_finite_rejects_nonpositive():
    with pytest.raises(ValueError):
        setalg.finite([0, 2])
    with pytest.raises(ValueError):
        setalg.tail(0, 4)
    with pytest.raises(ValueError):
        setalg.naturals(0)


def test_membership_and_subset():
    evens = setalg.multiples(2)
    assert evens.contains(128)
    assert not evens.contains(127)
    assert setalg.finite([4, 10]).subset_on_window(evens, WINDOW)
    assert not evens.subset_on_window(setalg.finite([4, 10]), WINDOW)


def test_combine_dispatch():
    got = setalg.combine("union", setalg.finite([1]), setalg.finite([2]))
    assert got.materialize(5) == [1, 2]
    got = setalg.combine("scale", 3, setalg.naturals(1))
    assert got.materialize(10) == [3, 6, 9]
    got = setalg.combine("saturate", setalg.finite([4]))
    assert got.materialize(13) == [4, 8, 12]
    with pytest.raises(ValueError):
        setalg.combine("xor", setalg.finite([1]), setalg.finite([2]))


def test_from_json_rejects_garbage():
    with pytest.raises(ValueError):
        setalg.from_json({"kind": "wedge"})
    with pytest.raises(ValueError):
        setalg.from_json(["finite"])


# ---------------------------------------------------------------------------
# algebraic laws (window-relative)

sets_st = st.recursive(
    st.one_of(
        st.lists(st.integers(1, 50), max_size=6).map(setalg.finite),
        st.tuples(st.integers(1, 5), st.integers(1, 30)).map(lambda t: setalg.tail(*t)),
        st.integers(1, 20).map(setalg.naturals),
    ),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: setalg.union(*t)),
        st.tuples(inner, inner).map(lambda t: setalg.intersect(*t)),
        st.tuples(st.integers(1, 4), inner).map(lambda t: setalg.scale(*t)),
        inner.map(setalg.saturate),
    ),
    max_leaves=6,
)


@settings(max_examples=120, deadline=None)
@given(sets_st)
def test_saturate_idempotent(ds):
    once = setalg.saturate(ds)
    assert setalg.equals_on_window(setalg.saturate(once), once, WINDOW)


@settings(max_examples=120, deadline=None)
@given(sets_st)
def test_saturate_extensive_and_multiplicative(ds):
    sat = setalg.saturate(ds)
    assert ds.subset_on_window(sat, WINDOW)
    members = sat.materialize(WINDOW)
    have = set(members)
    for x in members:
        for m in range(2, WINDOW // x + 1):
            assert m * x in have


@settings(max_examples=100, deadline=None)
@given(sets_st, sets_st)
def test_union_intersect_laws(a, b):
    assert setalg.equals_on_window(setalg.union(a, b), setalg.union(b, a), WINDOW)
    assert setalg.equals_on_window(setalg.intersect(a, b), setalg.intersect(b, a), WINDOW)
    assert setalg.intersect(a, b).subset_on_window(a, WINDOW)
    assert a.subset_on_window(setalg.union(a, b), WINDOW)


@settings(max_examples=100, deadline=None)
@given(sets_st)
def test_json_round_trip_property(ds):
    assert setalg.equals_on_window(setalg.from_json(ds.to_json()), ds, WINDOW)
