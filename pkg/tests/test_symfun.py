from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from tauforge.partitions import EMPTY, Partition, enumerate_partitions, partitions_up_to
from tauforge.scalars import LaurentV, RatFunV, bracket
from tauforge.symfun import (
    Alphabet,
    MissingImage,
    SymFun,
    e_in_p,
    graded_exp,
    graded_log,
    h_in_p,
    hook_content_spec,
    lr_coefficient,
    minus_half_shifted,
    mn_character,
    multiply,
    newton_e_to_p,
    principal,
    schur_in_p,
    skew_schur_in_p,
    skew_schur_via_lr,
    specialize,
    to_schur_basis,
)

from conftest import V, to_sympy

P = Partition


def frobenius_character(lam, mu):
    """Oracle: chi_lam(mu) = [x^(lam+delta)] Delta(x) p_mu(x), computed with sympy."""
    n = max(len(lam), 1)
    xs = sp.symbols(f"x0:{n}")
    poly = sp.Poly(1, *xs)
    for i in range(n):
        for j in range(i + 1, n):
            poly = poly * sp.Poly(xs[i] - xs[j], *xs)
    for k in mu:
        poly = poly * sp.Poly(sum(x ** k for x in xs), *xs)
    lam = list(lam) + [0] * (n - len(lam))
    exps = tuple(lam[i] + n - 1 - i for i in range(n))
    return int(poly.coeff_monomial(sp.prod([x ** e for x, e in zip(xs, exps)])))


@pytest.mark.parametrize("nu,mu,want", [((3,), (1, 1, 1), 1), ((1, 1, 1), (2, 1), -1), ((2, 1), (3,), -1)])
def test_character_examples(nu, mu, want):
    assert mn_character(nu, mu) == want


@pytest.mark.parametrize("d", range(1, 7))
def test_characters_against_frobenius(d):
    for lam in enumerate_partitions(d):
        for mu in enumerate_partitions(d):
            assert mn_character(lam, mu) == frobenius_character(lam, mu)


@pytest.mark.parametrize("d", range(1, 8))
def test_character_orthogonality(d):
    from tauforge.partitions import z_factor

    ps = enumerate_partitions(d)
    for a in ps:
        for b in ps:
            s = sum(Fraction(mn_character(a, mu) * mn_character(b, mu), z_factor(mu)) for mu in ps)
            assert s == (1 if a == b else 0)


def test_schur_in_p_examples():
    assert schur_in_p((1,)) == SymFun.p((1,))
    assert schur_in_p((2,)) == SymFun({P((1, 1)): Fraction(1, 2), P((2,)): Fraction(1, 2)})
    assert schur_in_p((2, 1)) == SymFun({P((1, 1, 1)): Fraction(1, 3), P((3,)): Fraction(-1, 3)})


def test_skew_schur_examples():
    assert skew_schur_in_p((2, 1), (1,)) == SymFun.p((1, 1))
    assert skew_schur_in_p((3, 1), (3, 1)) == SymFun.one()
    assert skew_schur_in_p((1,), (2,)) == SymFun()


@pytest.mark.parametrize("mu", [m for m in partitions_up_to(6) if m])
def test_skew_schur_two_routes(mu):
    from tauforge.partitions import subpartitions

    for rho in subpartitions(mu):
        assert skew_schur_in_p(mu, rho) == skew_schur_via_lr(mu, rho)


def test_lr_examples():
    assert lr_coefficient((2, 1), (1,), (2,)) == 1
    assert lr_coefficient((3, 2, 1), (2, 1), (2, 1)) == 2


def test_multiply_examples():
    p1 = SymFun.p((1,))
    assert multiply(p1, p1) == SymFun.p((1, 1))
    assert multiply(schur_in_p((1,)), schur_in_p((1,))) == schur_in_p((2,)) + schur_in_p((1, 1))
    f = schur_in_p((2, 1))
    assert multiply(f, SymFun.one()) == f


def test_graded_exp_log():
    assert graded_exp(SymFun(), 4) == SymFun.one()
    f = SymFun.one() + SymFun.p((1,))
    want = SymFun({P((1,)): 1, P((1, 1)): Fraction(-1, 2), P((1, 1, 1)): Fraction(1, 3)})
    assert graded_log(f, 3) == want
    with pytest.raises(ValueError):
        graded_log(SymFun.p((1,)), 3)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from(partitions_up_to(4)[1:]),
                       st.fractions(min_value=-3, max_value=3, max_denominator=5), max_size=4))
def test_exp_log_inverse(terms):
    g = SymFun(terms)
    assert graded_log(graded_exp(g, 5), 5) == g.truncate(5)


def test_schur_basis_round_trip():
    for mu in partitions_up_to(5):
        assert to_schur_basis(schur_in_p(mu)) == {mu: 1}
    # h_n = s_(n), e_n = s_(1^n)
    assert to_schur_basis(h_in_p(4)) == {P((4,)): 1}
    assert to_schur_basis(e_in_p(4)) == {P((1, 1, 1, 1)): 1}


def test_alphabet_images():
    A = principal()
    for n in range(1, 6):
        assert A(n) == RatFunV(1, LaurentV({0: 1, 2 * n: -1}))
    A4 = minus_half_shifted()
    for n in range(1, 6):
        # oracle: closed-form geometric sum of (-v^(2k+1))^n
        want = (-1) ** n * V ** n / (1 - V ** (2 * n))
        assert sp.simplify(to_sympy(A4(n)) - want) == 0
    with pytest.raises(MissingImage):
        Alphabet("finite", None, {1: 1}).image(2)


def test_principal_specialization_examples():
    q = V ** 2
    s2 = to_sympy(specialize(schur_in_p((2,)), principal()))
    assert sp.simplify(s2 - 1 / ((1 - q) * (1 - q ** 2))) == 0
    assert sp.simplify(to_sympy(hook_content_spec((1,))) - 1 / (1 - q)) == 0
    assert sp.simplify(to_sympy(hook_content_spec((1, 1))) - q / ((1 - q) * (1 - q ** 2))) == 0


@pytest.mark.parametrize("nu", [m for m in partitions_up_to(6) if m])
def test_hook_content_matches_specialization(nu):
    assert specialize(schur_in_p(nu), principal()) == hook_content_spec(nu)


def test_finite_alphabet_against_sympy():
    # s_(2,1)(x, y, z) by brute force in sympy
    x, y, z = sp.symbols("x y z")
    vals = {x: 2, y: 3, z: 5}
    A = Alphabet("2,3,5", lambda n: Fraction(2 ** n + 3 ** n + 5 ** n))
    n = 3
    xs = [x, y, z]
    num = sp.Matrix(n, n, lambda i, j: xs[j] ** ((2, 1, 0)[i] + n - 1 - i))
    den = sp.Matrix(n, n, lambda i, j: xs[j] ** (n - 1 - i))
    oracle = sp.cancel(num.det() / den.det()).subs(vals)
    assert specialize(schur_in_p((2, 1)), A) == Fraction(int(oracle))


def test_newton_identities():
    # alphabet (1, 2): e = 1, 3, 2 ; p1 = 3, p2 = 5
    assert newton_e_to_p([1, 3, 2])[1:] == [3, 5]
