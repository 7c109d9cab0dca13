from fractions import Fraction

import pytest
import sympy as sp

from tauforge.partitions import EMPTY, Partition
from tauforge.quantumdim import a4, w_two_key
from tauforge.scalars import LaurentV, RatFunV, RegimeError, bracket, lift, q_power, specialize_q
from tauforge.symfun import schur_in_p, specialize
from tauforge.tau import (
    DegreeError,
    TauSeries,
    _shifted,
    calibrate_toda_constant,
    conifold_tau,
    connected_coefficients,
    connected_exact,
    kappa_symmetry_check,
    kp_hirota_pde_check,
    kp_root,
    kp_tau_series,
    specialize_series,
    toda_equation_check,
    toda_tau_sequence,
    toric_tau,
    toric_toda_sequence,
    trivial_sequence,
)

from conftest import V, to_sympy

P = Partition
Q = V ** 2
U = sp.Symbol("u")


def u_series_oracle(expr, order):
    """sympy expansion of expr(u) as {power: Fraction}."""
    s = sp.series(expr, U, 0, order + 1).removeO()
    poly = sp.Poly(sp.expand(s * U ** 20), U)
    return {k[0] - 20: Fraction(str(c)) for k, c in poly.as_dict().items() if c}


# ---------------------------------------------------------------------------
# the series container


def test_series_arithmetic():
    x = TauSeries.mono((1,), degree=3)
    one = TauSeries.one(1, 3)
    assert (one + x) * (one - x) == one - x * x
    assert (x * x * x * x).terms == {}
    assert x.derivative(1) == TauSeries.one(1, 2)
    assert (x * x).rescale(Fraction(2)).coefficient((1, 1)) == 4
    with pytest.raises(ValueError):
        TauSeries(1, 2, {((1,), (1,)): 1})


def test_series_json_round_trip():
    tau = kp_tau_series(Fraction(1, 3), 3)
    assert tau.root == 3
    doc = tau.to_json()
    assert doc["schema"] == "tauforge.series.v1" and doc["root"] == 3
    assert TauSeries.from_json(doc) == tau
    assert "root" not in kp_tau_series(1, 2).to_json()
    with pytest.raises(ValueError):
        TauSeries.from_json({"schema": "other"})


# ---------------------------------------------------------------------------
# one-partition series


def test_kp_degree_zero_and_errors():
    assert kp_tau_series(1, 0) == 1
    with pytest.raises(DegreeError):
        kp_tau_series(1, -1)
    with pytest.raises(ValueError):
        kp_tau_series(1, 2, route="other")


@pytest.mark.parametrize("r", [-1, 0, 1, 2, Fraction(1, 2)])
def test_kp_routes_agree(r):
    assert kp_tau_series(r, 4, "sum") == kp_tau_series(r, 4, "vev")


def test_kp_p1_coefficient():
    # single nu = (1) term: s_(1)(A) = sum_k (-q^(k+1/2)) = -q^(1/2)/(1-q)
    c = kp_tau_series(3, 3).coefficient((1,))
    assert sp.simplify(to_sympy(c) - (-V / (1 - Q))) == 0
    assert c == RatFunV(1, bracket(1))


@pytest.mark.parametrize("r", [-2, -1, 1, 3])
def test_kp_p2_coefficient(r):
    tau = kp_tau_series(r, 3)
    s2 = specialize(schur_in_p((2,)), a4())
    s11 = specialize(schur_in_p((1, 1)), a4())
    want = (q_power(r + 1) * s2 - q_power(-(r + 1)) * s11) * Fraction(1, 2)
    assert tau.coefficient((2,)) == want
    assert connected_exact(tau, (2,)) == want


def test_connected_p1_is_r_independent():
    oracle = u_series_oracle(1 / (2 * sp.sinh(U / 2)), 5)
    for r in (-2, -1, 0, 1, 2, Fraction(1, 2)):
        tau = kp_tau_series(r, 4)
        assert connected_exact(tau, (1,)) == RatFunV(1, bracket(1))
        s = connected_coefficients(tau, (1,), 5)
        assert dict(s.items()) == oracle
    assert oracle == {-1: 1, 1: Fraction(-1, 24), 3: Fraction(7, 5760), 5: Fraction(-31, 967680)}


def test_connected_empty_and_degree_guard():
    tau = kp_tau_series(1, 3)
    assert connected_coefficients(tau, (), 4).items() == []
    with pytest.raises(DegreeError):
        connected_coefficients(tau, (4,), 2)


def test_conifold_is_r_minus_one():
    tau = conifold_tau(5)
    assert tau == kp_tau_series(-1, 5)
    assert tau.constant_term() == 1
    assert sp.simplify(to_sympy(tau.coefficient((1,))) + V / (1 - Q)) == 0


def test_kp_roots():
    assert kp_root(1) == 1 and kp_root(Fraction(1, 2)) == 1
    assert kp_root(Fraction(1, 3)) == 3


def test_kappa_symmetry_needs_sign_flip():
    for r in (1, 2):
        rep = kappa_symmetry_check(r, 4)
        assert rep["equal_after_negating_p"]
        assert not rep["literal_equal"] and rep["literal_differences"] > 0


# ---------------------------------------------------------------------------
# Hirota bilinear equation of KP


def test_kp_hirota_trivial_and_control():
    assert kp_hirota_pde_check(TauSeries.one(1, 6))["pass"]
    bad = TauSeries.one(1, 6) + TauSeries.mono((1, 1), degree=6)
    rep = kp_hirota_pde_check(bad)
    assert not rep["pass"] and rep["nonzero_residuals"] > 0
    with pytest.raises(DegreeError):
        kp_hirota_pde_check(TauSeries.one(1, 3))


def test_kp_hirota_group_orbit():
    # <0|Gamma_+(t) Gamma_-(s0)|0> with s0 = (1, 0, ...) is exp(p_1)
    D = 6
    tau = TauSeries.one(1, D)
    term = TauSeries.one(1, D)
    for k in range(1, D + 1):
        term = term * TauSeries.mono((1,), degree=D) * Fraction(1, k)
        tau = tau + term
    assert kp_hirota_pde_check(tau)["pass"]


@pytest.mark.parametrize("r", [-2, -1, 0, 1, Fraction(1, 2)])
def test_kp_hirota_exact(r):
    assert kp_hirota_pde_check(kp_tau_series(r, 5))["pass"]


def test_specialize_series():
    tau = kp_tau_series(1, 3)
    num = specialize_series(tau, Fraction(4))
    assert num.coefficient((1,)) == specialize_q(tau.coefficient((1,)), Fraction(4)) == Fraction(2, 3)
    with pytest.raises(RegimeError):
        specialize_series(kp_tau_series(Fraction(1, 3), 2), 2)


# ---------------------------------------------------------------------------
# two-partition series and 2-Toda


def test_toric_p1p1_coefficient():
    tau = toric_tau(3)
    c = tau.coefficient((1,), (1,))
    assert c == w_two_key((1,), (1,))
    assert sp.simplify(to_sympy(c) - (Q / (1 - Q) ** 2 + 1)) == 0
    assert toric_tau(3, "vev") == tau


def test_toda_prefactor_exponents():
    r = Fraction(2)
    seq = toda_tau_sequence(r, 0, 1, 2, vev_route=False)
    assert seq.prefactor_exponent(0) == 0
    assert seq.prefactor_exponent(1) == (r + 1 / r + 2) / 8
    toric = toric_toda_sequence(0, 1, 2, vev_route=False)
    assert toric.prefactor_exponent(1) == Fraction(1, 4)
    assert toric.root == 4
    # n = 0 is the base series itself
    assert toric.shifted[0] == toric.base


def test_toda_sequence_r_zero_rejected():
    with pytest.raises(ValueError):
        toda_tau_sequence(0, 0, 1, 2)


@pytest.mark.parametrize("r", [2, Fraction(1, 2), -2])
def test_shift_formula_matches_vev(r):
    seq = toda_tau_sequence(r, -1, 2, 3)
    assert all(not d for d in seq.route_differences().values())


def test_uniform_rescaling_does_not_match():
    # rescaling both families by q^{(1/r+1)n} disagrees with the charge-n vev
    seq = toda_tau_sequence(2, 1, 1, 3)
    wrong = _shifted(seq.base, seq.b, seq.b, 1, seq.root)
    wrong = wrong * q_power((seq.b - seq.a) * Fraction(1, 8), seq.root)  # same prefactor as the right one
    assert seq.taus[1].differences(wrong)


def test_trivial_sequence_calibration():
    taus = trivial_sequence(-1, 1, 4)
    # every charge sector gives exp(sum p+_k p-_k / k)
    assert taus[-1] == taus[0] == taus[1]
    assert taus[0].coefficient((1,), (1,)) == 1
    assert calibrate_toda_constant(4) == 1
    assert toda_equation_check(taus, 4)["pass"]


def test_toda_equation_on_sequences():
    seq = toda_tau_sequence(2, -1, 1, 4)
    rep = toda_equation_check(seq)
    assert rep["pass"] and rep["constant"] == "1"
    assert toda_equation_check(toric_toda_sequence(-1, 1, 4))["pass"]


def test_toda_equation_rejects_perturbation():
    seq = toric_toda_sequence(-1, 1, 4)
    taus = dict(seq.taus)
    bump = TauSeries.one(2, 4, seq.root) + TauSeries.mono((1,), (1,), families=2, degree=4, root=seq.root)
    taus[0] = taus[0] * bump
    rep = toda_equation_check(taus, 4)
    assert not rep["pass"]
    with pytest.raises(ValueError):
        toda_equation_check({0: taus[0]}, 4)
