from collections import Counter
from functools import lru_cache
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from sympy.functions.combinatorial.numbers import partition as sp_partition_count
from sympy.utilities.iterables import partitions as sp_partitions

from tauforge.partitions import (
    EMPTY,
    Partition,
    add_border_strips,
    border_strips,
    conjugate,
    enumerate_partitions,
    hooks_and_contents,
    intersection,
    kappa,
    parse,
    partition_count,
    partitions_up_to,
    subpartitions,
    z_factor,
)

partition_st = st.lists(st.integers(1, 7), max_size=6).map(lambda xs: Partition(sorted(xs, reverse=True)))


def test_enumerate_examples():
    assert enumerate_partitions(0) == (EMPTY,)
    assert enumerate_partitions(4) == tuple(Partition(p) for p in [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])
    assert len(enumerate_partitions(8)) == 22


@pytest.mark.parametrize("d", range(0, 16))
def test_enumeration_against_sympy(d):
    ours = set(enumerate_partitions(d))
    theirs = {Partition(sorted(Counter(p).elements(), reverse=True)) for p in
              (dict(q) for q in sp_partitions(d))} if d else {EMPTY}
    assert ours == theirs
    assert len(ours) == sp_partition_count(d) == partition_count(d)


def test_enumeration_is_reverse_lex():
    ps = enumerate_partitions(7)
    assert list(ps) == sorted(ps, reverse=True)


@pytest.mark.parametrize("mu,want", [((), 0), ((2,), 2), ((1, 1), -2), ((3, 1), 4)])
def test_kappa(mu, want):
    assert kappa(mu) == want


@pytest.mark.parametrize("mu,want", [((1, 1), 2), ((3,), 3), ((2, 1), 2), ((), 1), ((2, 2, 1), 8)])
def test_z_factor(mu, want):
    assert z_factor(mu) == want


def test_conjugate_examples():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()
    assert conjugate((2, 2)) == (2, 2)


def test_hooks_and_contents():
    def summary(mu):
        hc = hooks_and_contents(mu)
        return sorted(h for _, h, _ in hc), sorted(c for _, _, c in hc)

    assert summary((2,)) == ([1, 2], [0, 1])
    assert summary((1, 1)) == ([1, 2], [-1, 0])
    assert summary((2, 1)) == ([1, 1, 3], [-1, 0, 1])


def test_border_strips_examples():
    assert border_strips((1,), 1) == ((EMPTY, 0),)
    assert border_strips((2, 1), 3) == ((EMPTY, 1),)
    assert border_strips((2, 2), 3) == ((Partition((1,)), 1),)
    assert [nu for nu, _ in add_border_strips((), 2)] == [(2,), (1, 1)]
    assert [h for _, h in add_border_strips((), 2)] == [0, 1]


def test_subpartitions_and_intersection():
    assert intersection((3, 1), (2, 2, 1)) == (2, 1)
    assert subpartitions((2, 1)) == [(), (1,), (2,), (1, 1), (2, 1)]


def test_parse():
    assert parse("3,1") == (3, 1)
    assert parse("") == ()
    assert parse("[1,2]") == (2, 1)


def test_invalid_partition():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        enumerate_partitions(-1)


@settings(max_examples=200, deadline=None)
@given(partition_st)
def test_kappa_is_twice_content_sum(mu):
    assert kappa(mu) == 2 * sum(c for _, _, c in hooks_and_contents(mu))
    assert kappa(conjugate(mu)) == -kappa(mu)
    assert conjugate(conjugate(mu)) == mu


@settings(max_examples=200, deadline=None)
@given(partition_st)
def test_hook_length_formula(mu):
    # number of standard tableaux two ways: hook formula vs branching recursion
    prod = 1
    for _, h, _ in hooks_and_contents(mu):
        prod *= h

    @lru_cache(maxsize=None)
    def f(lam):
        if not lam:
            return 1
        return sum(f(nu) for nu, _ in border_strips(lam, 1))

    assert factorial(mu.size) // prod * prod == factorial(mu.size)
    assert f(mu) == factorial(mu.size) // prod


@settings(max_examples=150, deadline=None)
@given(partition_st, st.integers(1, 5))
def test_border_strips_inverse(mu, k):
    for lam, h in add_border_strips(mu, k):
        assert lam.size == mu.size + k and lam.contains(mu)
        assert (mu, h) in border_strips(lam, k)
    for nu, h in border_strips(mu, k):
        assert (mu, h) in add_border_strips(nu, k)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 9))
def test_z_factor_class_sizes(d):
    # sum over classes of n!/z = n!
    assert sum(sp.Rational(1, z_factor(mu)) for mu in enumerate_partitions(d)) == 1
