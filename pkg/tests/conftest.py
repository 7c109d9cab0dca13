import sympy as sp
import pytest

from tauforge.scalars import LaurentV, RatFunV


V = sp.Symbol("v")


def to_sympy(x):
    """Exact value of a LaurentV / RatFunV as a sympy expression in v."""
    if isinstance(x, LaurentV):
        return sum((sp.Rational(c.numerator, c.denominator) * V ** k for k, c in x.items()), sp.Integer(0))
    if isinstance(x, RatFunV):
        return to_sympy(x.num) / to_sympy(x.den)
    return sp.Rational(x.numerator, x.denominator) if hasattr(x, "numerator") else sp.nsimplify(x)


@pytest.fixture
def v():
    return V
