from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from tauforge.scalars import (
    LaurentV,
    OrderUnderflow,
    QuadraticNumber,
    RatFunV,
    RegimeError,
    USeriesL,
    bracket,
    expand_u,
    expand_v_adic,
    from_json,
    lift,
    q_power,
    root_for,
    specialize_q,
    to_json,
)

from conftest import V, to_sympy

U = sp.Symbol("u")


def sympy_u_series(expr_v, order, root=1):
    """Oracle: substitute v = exp(u/(2 root)) and expand with sympy."""
    e = expr_v.subs(V, sp.exp(U / (2 * root)))
    s = sp.series(e, U, 0, order + 1).removeO()
    return {int(k): Fraction(str(c)) for k, c in sp.Poly(sp.expand(s * U ** 40), U).as_dict().items()
            for k in [k[0] - 40]}


fractions_st = st.fractions(min_value=-20, max_value=20, max_denominator=12)
laurent_st = st.dictionaries(st.integers(-4, 4), fractions_st, max_size=4).map(LaurentV)
nonzero_laurent_st = laurent_st.filter(bool)
ratfun_st = st.builds(RatFunV, laurent_st, nonzero_laurent_st)


def test_rational_example():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)


def test_bracket_square():
    one = bracket(1)
    assert one * one == LaurentV({2: 1, 0: -2, -2: 1})


def test_bracket_basics():
    assert bracket(1) == LaurentV({1: 1, -1: -1})
    assert not bracket(0)
    assert bracket(-2) == -LaurentV({2: 1, -2: -1})


def test_self_quotient_is_one():
    assert RatFunV(bracket(1), bracket(1)) == 1


@pytest.mark.parametrize("m", range(1, 11))
def test_bracket_inversion_symmetry(m):
    assert bracket(m).invert_v() == -bracket(m)


def test_canonical_denominator():
    x = RatFunV(LaurentV({0: 2}), LaurentV({1: -4, 3: 4}))  # 2/(4v^3 - 4v)
    assert x.den.coeff(0) == 1
    assert x == RatFunV(LaurentV({-1: -Fraction(1, 2)}), LaurentV({0: 1, 2: -1}))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RatFunV(1) / RatFunV(0)
    with pytest.raises(ZeroDivisionError):
        USeriesL(1, 3, {2: 1}) / USeriesL(0, 3, {})


def test_order_underflow_is_explicit():
    with pytest.raises(OrderUnderflow):
        USeriesL(3, 2)
    s = USeriesL(-1, 2, {-1: 1})
    with pytest.raises(OrderUnderflow):
        s.coeff(5)


def test_expand_u_inverse_bracket():
    s = expand_u(RatFunV(1, bracket(1)), 3)
    assert s.low == -1 and s.high == 3
    assert s.items() == [(-1, 1), (1, Fraction(-1, 24)), (3, Fraction(7, 5760))]


def test_expand_u_against_series_oracle():
    x = RatFunV(bracket(2), bracket(1))
    oracle = sympy_u_series(to_sympy(x), 4)
    got = expand_u(x, 4)
    assert dict(got.items()) == {k: c for k, c in oracle.items() if c and k <= 4}
    assert got.coeff(0) == 2 and got.coeff(2) == Fraction(1, 4)


def test_expand_u_constant():
    assert expand_u(RatFunV(1), 5).items() == [(0, 1)]


def test_expand_u_root_regime():
    # q^(1/4) with root 2 is w = v^(1/2); u-expansion of e^(u/4)
    x = RatFunV(LaurentV.mono(1))
    s = expand_u(x, 3, root=2)
    assert s.items() == [(0, 1), (1, Fraction(1, 4)), (2, Fraction(1, 32)), (3, Fraction(1, 384))]


def test_expand_v_adic_examples():
    geo = RatFunV(1, LaurentV({0: 1, 2: -1}))
    assert expand_v_adic(geo, 4) == [(0, 1), (1, 1), (2, 1)]
    inv = RatFunV(1, bracket(1))
    assert expand_v_adic(inv, 5) == [(Fraction(1, 2), -1), (Fraction(3, 2), -1), (Fraction(5, 2), -1)]
    assert expand_v_adic(RatFunV(0), 5) == []


def test_q_power_and_roots():
    assert q_power(Fraction(1, 2)) == LaurentV.mono(1)
    assert q_power(Fraction(1, 4), 2) == LaurentV.mono(1)
    with pytest.raises(RegimeError):
        q_power(Fraction(1, 4))
    assert root_for([Fraction(1, 4), Fraction(9, 16)]) == 8
    assert lift(RatFunV(1, bracket(1)), 2) == RatFunV(1, bracket(2))


def test_specialize_q_quadratic():
    x = RatFunV(1, bracket(1))  # 1/(v - 1/v)
    val = specialize_q(x, Fraction(2))
    assert isinstance(val, QuadraticNumber)
    # 1/(sqrt2 - 1/sqrt2) = sqrt2
    assert val == QuadraticNumber(0, 1, 2)
    assert specialize_q(x, Fraction(4)) == Fraction(2, 3)


def test_json_round_trip():
    for x in (Fraction(-3, 7), bracket(3), RatFunV(bracket(2), bracket(1)), expand_u(RatFunV(1, bracket(1)), 3)):
        assert from_json(to_json(x)) == x
    assert to_json(Fraction(4)) == "4"
    assert to_json(bracket(1)) == [[-1, "-1"], [1, "1"]]


@settings(max_examples=350, deadline=None)
@given(ratfun_st, ratfun_st, ratfun_st)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * a.inverse() == 1


@settings(max_examples=350, deadline=None)
@given(fractions_st, fractions_st, fractions_st)
def test_rational_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    if a:
        assert a * (1 / a) == 1


@settings(max_examples=300, deadline=None)
@given(ratfun_st, ratfun_st)
def test_ratfun_matches_sympy(a, b):
    assert sp.simplify(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=100, deadline=None)
@given(ratfun_st.filter(bool), ratfun_st.filter(bool))
def test_expand_u_multiplicative(x, y):
    N = 4
    prod = expand_u(x * y, N)
    sx, sy = expand_u(x, N), expand_u(y, N)
    assert prod.agrees_with(sx * sy)


@settings(max_examples=100, deadline=None)
@given(ratfun_st.filter(bool), ratfun_st.filter(bool))
def test_v_adic_multiplicative(x, y):
    N = 6
    ex, ey = dict(expand_v_adic(x, N + 20)), dict(expand_v_adic(y, N + 20))
    conv = {}
    for a, ca in ex.items():
        for b, cb in ey.items():
            conv[a + b] = conv.get(a + b, 0) + ca * cb
    want = {k: c for k, c in conv.items() if c and k <= Fraction(N, 2)}
    got = dict(expand_v_adic(x * y, N))
    low = min(min(ex), 0) + min(min(ey), 0)
    assert {k: c for k, c in got.items() if k >= low} == {k: c for k, c in want.items() if k >= low}
