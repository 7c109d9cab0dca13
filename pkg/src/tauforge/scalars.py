"""Exact coefficient rings.

Everything here works in the formal variable ``v = q^(1/2)``.  A few
computations need finer roots of ``q``; for those the same classes are
reused with the variable reinterpreted as ``w = q^(1/(2m))`` (see
:func:`lift` and :func:`q_power`).  The integer ``m`` is called the *root*
of the regime and is always carried by the caller.

Rationals are :class:`fractions.Fraction`.  Polynomial arithmetic and gcds
are delegated to FLINT's ``fmpq_poly``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, gcd
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

import flint

Rational = Fraction


class ScalarError(ArithmeticError):
    pass


class OrderUnderflow(ScalarError):
    """A truncated u-series ended up with no reliable coefficients."""


class RegimeError(ScalarError):
    """A power of q is not representable in the active root regime."""


def _fq(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _to_fmpq(c) -> flint.fmpq:
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) or isinstance(x, _RationalABC)


def rational_str(c: Fraction) -> str:
    """``"a/b"`` in lowest terms, ``"a"`` when the denominator is one."""
    return str(Fraction(c))


# ---------------------------------------------------------------------------
# Laurent polynomials in v


class LaurentV:
    """Finite sum ``sum c_k v^k`` with rational coefficients.

    Stored as ``v^shift * poly(v)`` where ``poly`` has nonzero constant term
    (the zero polynomial has ``shift == 0``).
    """

    __slots__ = ("_shift", "_poly", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        if not terms:
            self._set(0, flint.fmpq_poly())
            return
        items = {int(k): Fraction(c) for k, c in terms.items() if c}
        if not items:
            self._set(0, flint.fmpq_poly())
            return
        lo = min(items)
        hi = max(items)
        coeffs = [0] * (hi - lo + 1)
        for k, c in items.items():
            coeffs[k - lo] = _to_fmpq(c)
        self._set(lo, flint.fmpq_poly(coeffs))

    def _set(self, shift, poly):
        self._shift = shift
        self._poly = poly
        self._hash = None

    @classmethod
    def _raw(cls, shift: int, poly: flint.fmpq_poly) -> "LaurentV":
        obj = cls.__new__(cls)
        if poly.is_zero():
            obj._set(0, poly)
            return obj
        # strip factors of v
        k = 0
        while poly[k] == 0:
            k += 1
        if k:
            poly = poly.right_shift(k)
        obj._set(shift + k, poly)
        return obj

    @classmethod
    def const(cls, c) -> "LaurentV":
        return cls({0: c})

    @classmethod
    def mono(cls, k: int, c=1) -> "LaurentV":
        return cls({k: c})

    # -- inspection ---------------------------------------------------------

    def __bool__(self):
        return not self._poly.is_zero()

    def low(self) -> int:
        if not self:
            raise ValueError("zero has no lowest exponent")
        return self._shift

    def high(self) -> int:
        if not self:
            raise ValueError("zero has no highest exponent")
        return self._shift + self._poly.degree()

    def terms(self) -> dict[int, Fraction]:
        out = {}
        for i, c in enumerate(self._poly.coeffs()):
            if c != 0:
                out[self._shift + i] = _fq(c)
        return out

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self.terms().items())

    def coeff(self, k: int) -> Fraction:
        i = k - self._shift
        if not self or i < 0 or i > self._poly.degree():
            return Fraction(0)
        return _fq(self._poly[i])

    def is_constant(self) -> bool:
        return not self or (self._shift == 0 and self._poly.degree() == 0)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeff(0)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentV):
            return other
        if _is_rational(other):
            return LaurentV.const(other)
        return None

    def __add__(self, other):
        o = LaurentV._coerce(other)
        if o is None:
            return NotImplemented
        if not self:
            return o
        if not o:
            return self
        s = min(self._shift, o._shift)
        a = self._poly.left_shift(self._shift - s) if self._shift > s else self._poly
        b = o._poly.left_shift(o._shift - s) if o._shift > s else o._poly
        return LaurentV._raw(s, a + b)

    __radd__ = __add__

    def __neg__(self):
        return LaurentV._raw(self._shift, -self._poly)

    def __sub__(self, other):
        o = LaurentV._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = LaurentV._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_rational(other):
            return LaurentV._raw(self._shift, self._poly * _to_fmpq(other))
        if not isinstance(other, LaurentV):
            return NotImplemented
        return LaurentV._raw(self._shift + other._shift, self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (k, c), = self.terms().items()
                return LaurentV.mono(k * n, c ** n)
            raise ScalarError("negative power of a non-monomial LaurentV")
        return LaurentV._raw(self._shift * n, self._poly ** n)

    def __truediv__(self, other):
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("LaurentV division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        o = LaurentV._coerce(other)
        if o is None:
            if isinstance(other, RatFunV):
                return other == self
            return NotImplemented
        return self._shift == o._shift and self._poly == o._poly

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.coeff(0))
            else:
                self._hash = hash((self._shift, tuple(str(c) for c in self._poly.coeffs())))
        return self._hash

    # -- transformations ----------------------------------------------------

    def is_monomial(self) -> bool:
        return bool(self) and self._poly.degree() == 0

    def shift(self, k: int) -> "LaurentV":
        """Multiply by ``v^k``."""
        if not self:
            return self
        return LaurentV._raw(self._shift + k, self._poly)

    def invert_v(self) -> "LaurentV":
        """Substitute ``v -> 1/v``."""
        return LaurentV({-k: c for k, c in self.terms().items()})

    def lift(self, m: int) -> "LaurentV":
        """Substitute ``v -> v^m``."""
        if m == 1 or not self:
            return self
        return LaurentV({k * m: c for k, c in self.terms().items()})

    def exponent_gcd(self) -> int:
        g = 0
        for k in self.terms():
            g = gcd(g, k)
        return g

    def evaluate(self, v):
        acc = 0
        for k, c in self.items():
            acc = acc + c * (v ** k)
        return acc

    def __repr__(self):
        if not self:
            return "0"
        parts = []
        for k, c in self.items():
            if k == 0:
                mono = str(c)
            else:
                var = "v" if k == 1 else f"v^{k}"
                if c == 1:
                    mono = var
                elif c == -1:
                    mono = "-" + var
                else:
                    mono = f"{c}*{var}"
            parts.append(mono)
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Rational functions in v


def _poly_from_laurent(x: LaurentV) -> tuple[int, flint.fmpq_poly]:
    return x._shift, x._poly


class RatFunV:
    """Quotient ``num/den`` in canonical form.

    ``den`` is a polynomial with constant term exactly 1 and is coprime to
    the polynomial part of ``num``; all powers of ``v`` live in ``num``.
    """

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, num=0, den=1):
        n = _as_laurent(num)
        d = _as_laurent(den)
        if not d:
            raise ZeroDivisionError("RatFunV with zero denominator")
        self._init_reduced(n._shift - d._shift, n._poly, d._poly)

    def _init_reduced(self, shift: int, npoly, dpoly):
        self._hash = None
        if npoly.is_zero():
            self._num = LaurentV()
            self._den = flint.fmpq_poly([1])
            return
        if dpoly.degree() > 0:
            g = npoly.gcd(dpoly)
            if g.degree() > 0:
                npoly = npoly // g
                dpoly = dpoly // g
        c0 = dpoly[0]
        if c0 != 1:
            npoly = npoly / c0
            dpoly = dpoly / c0
        self._num = LaurentV._raw(shift, npoly)
        self._den = dpoly

    @classmethod
    def _make(cls, shift, npoly, dpoly) -> "RatFunV":
        obj = cls.__new__(cls)
        # normalise powers of v out of the denominator
        k = 0
        while dpoly[k] == 0:
            k += 1
        if k:
            dpoly = dpoly.right_shift(k)
            shift -= k
        obj._init_reduced(shift, npoly, dpoly)
        return obj

    @property
    def num(self) -> LaurentV:
        return self._num

    @property
    def den(self) -> LaurentV:
        return LaurentV._raw(0, self._den)

    def __bool__(self):
        return bool(self._num)

    def is_laurent(self) -> bool:
        return self._den.degree() == 0

    def as_laurent(self) -> LaurentV:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self._num

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunV):
            return other
        if isinstance(other, LaurentV) or _is_rational(other):
            return RatFunV(other)
        return None

    def __add__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        if not self:
            return o
        if not o:
            return self
        s = min(self._num._shift, o._num._shift)
        a = self._num._poly.left_shift(self._num._shift - s)
        b = o._num._poly.left_shift(o._num._shift - s)
        if self._den == o._den:
            return RatFunV._make(s, a + b, self._den)
        g = self._den.gcd(o._den)
        if g.degree() > 0:
            da = self._den // g
            db = o._den // g
            return RatFunV._make(s, a * db + b * da, da * o._den)
        return RatFunV._make(s, a * o._den + b * self._den, self._den * o._den)

    __radd__ = __add__

    def __neg__(self):
        obj = RatFunV.__new__(RatFunV)
        obj._num = -self._num
        obj._den = self._den
        obj._hash = None
        return obj

    def __sub__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_rational(other):
            if other == 0:
                return RatFunV()
            obj = RatFunV.__new__(RatFunV)
            obj._num = self._num * other
            obj._den = self._den
            obj._hash = None
            return obj
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        if not self or not o:
            return RatFunV()
        # cross cancellation keeps the polynomials small
        a, db = self._num._poly, o._den
        b, da = o._num._poly, self._den
        if da.degree() > 0 and b.degree() > 0:
            g = b.gcd(da)
            if g.degree() > 0:
                b, da = b // g, da // g
        if db.degree() > 0 and a.degree() > 0:
            g = a.gcd(db)
            if g.degree() > 0:
                a, db = a // g, db // g
        obj = RatFunV.__new__(RatFunV)
        obj._hash = None
        d = da * db
        n = a * b
        c0 = d[0]
        if c0 != 1:
            n = n / c0
            d = d / c0
        obj._num = LaurentV._raw(self._num._shift + o._num._shift, n)
        obj._den = d
        return obj

    __rmul__ = __mul__

    def inverse(self) -> "RatFunV":
        if not self:
            raise ZeroDivisionError("inverse of zero RatFunV")
        return RatFunV._make(-self._num._shift, self._den, self._num._poly)

    def __truediv__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("RatFunV division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        obj = RatFunV.__new__(RatFunV)
        obj._num = self._num ** n
        obj._den = self._den ** n
        obj._hash = None
        return obj

    def __eq__(self, other):
        o = RatFunV._coerce(other)
        if o is None:
            return NotImplemented
        return self._num == o._num and self._den == o._den

    def __hash__(self):
        if self._hash is None:
            if self.is_laurent():
                self._hash = hash(self._num)
            else:
                self._hash = hash((self._num, tuple(str(c) for c in self._den.coeffs())))
        return self._hash

    # -- transformations ----------------------------------------------------

    def invert_v(self) -> "RatFunV":
        return RatFunV(self._num.invert_v(), self.den.invert_v())

    def lift(self, m: int) -> "RatFunV":
        if m == 1:
            return self
        return RatFunV(self._num.lift(m), self.den.lift(m))

    def exponent_gcd(self) -> int:
        return gcd(self._num.exponent_gcd(), self.den.exponent_gcd())

    def descend(self, m: int) -> "RatFunV":
        """Inverse of :meth:`lift`; requires every exponent divisible by m."""
        if m == 1:
            return self
        num, den = self._num.terms(), self.den.terms()
        if any(k % m for k in num) or any(k % m for k in den):
            raise RegimeError(f"cannot descend {self} by {m}")
        return RatFunV(LaurentV({k // m: c for k, c in num.items()}),
                       LaurentV({k // m: c for k, c in den.items()}))

    def evaluate(self, v):
        return self._num.evaluate(v) / self.den.evaluate(v)

    def __repr__(self):
        if self.is_laurent():
            return repr(self._num)
        return f"({self._num!r})/({self.den!r})"


def _as_laurent(x) -> LaurentV:
    if isinstance(x, LaurentV):
        return x
    if _is_rational(x):
        return LaurentV.const(x)
    raise TypeError(f"cannot interpret {x!r} as LaurentV")


def ratfun(x) -> RatFunV:
    if isinstance(x, RatFunV):
        return x
    return RatFunV(x)


# ---------------------------------------------------------------------------
# elements a + b*sqrt(d) with rational a, b, d


class QuadraticNumber:
    """Element ``a + b*sqrt(d)`` of a real quadratic field (d not a square).

    Used when q is specialised to a rational number while the computation
    still needs ``v = q^(1/2)``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ScalarError("mixing different quadratic fields")
            return other
        if _is_rational(other):
            return QuadraticNumber(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber(self.a * o.a + self.b * o.b * self.d,
                               self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.a * o.a - o.b * o.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        conj = QuadraticNumber(o.a / norm, -o.b / norm, self.d)
        return self * conj

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadraticNumber(1, 0, self.d) / (self ** (-n))
        acc = QuadraticNumber(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def _rational_sqrt(x: Fraction) -> Fraction | None:
    from math import isqrt

    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def specialize_q(x, q0):
    """Evaluate an exact scalar at ``q = q0`` (rational, positive).

    Returns a Fraction when ``q0`` is a rational square or ``x`` only uses
    even powers of v, otherwise a :class:`QuadraticNumber` in
    ``Q(sqrt(q0))``.
    """
    q0 = Fraction(q0)
    if _is_rational(x):
        return Fraction(x)
    if isinstance(x, LaurentV):
        x = RatFunV(x)
    root = _rational_sqrt(q0)
    vval = root if root is not None else QuadraticNumber(0, 1, q0)
    val = x.evaluate(vval)
    if isinstance(val, QuadraticNumber) and val.b == 0:
        return val.a
    return val


# ---------------------------------------------------------------------------
# truncated Laurent series in u, q = e^u


class USeriesL:
    """``sum_{low <= e <= high} c_e u^e + O(u^(high+1))``."""

    __slots__ = ("low", "high", "_coeffs")

    def __init__(self, low: int, high: int, coeffs: Mapping[int, object] | None = None):
        if low > high:
            raise OrderUnderflow(f"empty reliable window [{low}, {high}]")
        self.low = low
        self.high = high
        self._coeffs = {}
        for e, c in (coeffs or {}).items():
            if e < low:
                if c:
                    raise ValueError(f"coefficient at u^{e} below low={low}")
                continue
            if e <= high and c:
                self._coeffs[e] = Fraction(c)

    def coeff(self, e: int) -> Fraction:
        if e > self.high:
            raise OrderUnderflow(f"u^{e} beyond reliable order {self.high}")
        return self._coeffs.get(e, Fraction(0))

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._coeffs.items())

    def valuation(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    def _coerce(self, other):
        if isinstance(other, USeriesL):
            return other
        if _is_rational(other):
            return USeriesL(0, max(self.high, 0), {0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        low = min(self.low, o.low)
        high = min(self.high, o.high)
        out = dict(self._coeffs)
        for e, c in o._coeffs.items():
            out[e] = out.get(e, 0) + c
        return USeriesL(low, high, out)

    __radd__ = __add__

    def __neg__(self):
        return USeriesL(self.low, self.high, {e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if _is_rational(other):
            return USeriesL(self.low, self.high, {e: c * other for e, c in self._coeffs.items()})
        if not isinstance(other, USeriesL):
            return NotImplemented
        low = self.low + other.low
        high = min(self.high + other.low, other.high + self.low)
        out: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if e <= high:
                    out[e] = out.get(e, 0) + c1 * c2
        return USeriesL(low, high, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_rational(other):
            if other == 0:
                raise ZeroDivisionError("USeriesL division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, USeriesL):
            return NotImplemented
        b0 = other._coeffs.get(other.low, 0)
        if not b0:
            raise ZeroDivisionError("divisor's lowest coefficient is zero")
        inv_high = other.high - other.low
        inv = _invert_series([other._coeffs.get(other.low + j, Fraction(0))
                              for j in range(inv_high + 1)], inv_high)
        inv_series = USeriesL(-other.low, inv_high - other.low,
                              {j - other.low: c for j, c in enumerate(inv)})
        return self * inv_series

    def __eq__(self, other):
        if not isinstance(other, USeriesL):
            return NotImplemented
        return (self.low, self.high, self._coeffs) == (other.low, other.high, other._coeffs)

    def agrees_with(self, other: "USeriesL") -> bool:
        """Equality on the common reliable window."""
        high = min(self.high, other.high)
        lo = min(self.low, other.low)
        return all(self._coeffs.get(e, 0) == other._coeffs.get(e, 0) for e in range(lo, high + 1))

    def truncate(self, high: int) -> "USeriesL":
        if high > self.high:
            raise OrderUnderflow(f"cannot extend reliable order {self.high} to {high}")
        return USeriesL(self.low, high, self._coeffs)

    def __hash__(self):
        return hash((self.low, self.high, tuple(self.items())))

    def __repr__(self):
        terms = " + ".join(f"{c}*u^{e}" for e, c in self.items()) or "0"
        return f"{terms} + O(u^{self.high + 1})"


def _invert_series(b: list[Fraction], n: int) -> list[Fraction]:
    """Coefficients of 1/B through index n, assuming B[0] != 0."""
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / b[0]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, min(k, len(b) - 1) + 1):
            acc += b[j] * out[k - j]
        out[k] = -acc / b[0]
    return out


# ---------------------------------------------------------------------------
# named constructions


def bracket(m: int) -> LaurentV:
    """Quantum integer ``[m] = v^m - v^-m``."""
    if m == 0:
        return LaurentV()
    return LaurentV({m: 1, -m: -1})


def q_power(a, root: int = 1) -> LaurentV:
    """Monomial ``q^a`` in the variable ``q^(1/(2*root))``."""
    k = Fraction(a) * 2 * root
    if k.denominator != 1:
        raise RegimeError(f"q^{a} needs a finer root than q^(1/{2 * root})")
    return LaurentV.mono(int(k))


def root_for(exponents: Iterable) -> int:
    """Smallest root m such that every ``q^a`` is a power of ``q^(1/(2m))``."""
    m = 1
    for a in exponents:
        den = (Fraction(a) * 2).denominator
        m = m * den // gcd(m, den)
    return m


def lift(x, m: int):
    if m == 1 or _is_rational(x):
        return x
    return x.lift(m)


def _laurent_u_coeffs(x: LaurentV, n: int, scale: Fraction) -> list[Fraction]:
    """Coefficients of ``x(e^(scale*u))`` for u^0..u^n."""
    terms = x.items()
    out = []
    for j in range(n + 1):
        acc = Fraction(0)
        for k, c in terms:
            acc += c * (k * scale) ** j
        out.append(acc / factorial(j))
    return out


def expand_u(x, order: int, root: int = 1) -> USeriesL:
    """Laurent expansion in u of ``x`` under ``v = e^(u/(2*root))``, i.e. ``q = e^u``."""
    x = ratfun(x)
    if not x:
        return USeriesL(0, order)
    scale = Fraction(1, 2 * root)
    num = x.num
    den = x.den
    # valuation of den(e^(scale u)) is at most its degree
    span = den.high() - den.low() + 1
    bcoef = _laurent_u_coeffs(den, span, scale)
    d = next(j for j, c in enumerate(bcoef) if c)
    nspan = num.high() - num.low() + 1
    acoef_probe = _laurent_u_coeffs(num, nspan, scale)
    nval = next(j for j, c in enumerate(acoef_probe) if c)
    low = nval - d
    if low > order:
        return USeriesL(min(order, 0), order)
    need = order + d
    acoef = _laurent_u_coeffs(num, need, scale)
    bcoef = _laurent_u_coeffs(den, need + d, scale)[d:]
    inv = _invert_series(bcoef, need)
    out: dict[int, Fraction] = {}
    for i in range(need + 1):
        acc = Fraction(0)
        for j in range(i + 1):
            if acoef[j]:
                acc += acoef[j] * inv[i - j]
        if acc:
            out[i - d] = acc
    return USeriesL(low, order, out)


def expand_v_adic(x, order: int) -> list[tuple[Fraction, Fraction]]:
    """Ascending expansion at ``v = 0`` through ``v^order``.

    Returns ``(q-exponent, coefficient)`` pairs; the q-exponent is
    ``k/2`` for the ``v^k`` term.
    """
    return [(Fraction(k, 2), c) for k, c in v_adic_terms(x, order)]


def v_adic_terms(x, order: int) -> list[tuple[int, Fraction]]:
    x = ratfun(x)
    if not x:
        return []
    s = x.num.low()
    n = order - s
    if n < 0:
        return []
    npoly = x.num._poly
    den = [_fq(c) for c in x._den.coeffs()]
    inv = _invert_series(den, n)
    out = []
    ncoef = [_fq(c) for c in npoly.coeffs()]
    for i in range(n + 1):
        acc = Fraction(0)
        for j in range(min(i, len(ncoef) - 1) + 1):
            if ncoef[j]:
                acc += ncoef[j] * inv[i - j]
        if acc:
            out.append((s + i, acc))
    return out


# ---------------------------------------------------------------------------
# canonical JSON


def to_json(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if _is_rational(x):
        return rational_str(Fraction(x))
    if isinstance(x, LaurentV):
        return [[k, rational_str(c)] for k, c in x.items()]
    if isinstance(x, RatFunV):
        return {"num": to_json(x.num), "den": to_json(x.den)}
    if isinstance(x, USeriesL):
        return {"low": x.low, "high": x.high,
                "coeffs": [[e, rational_str(c)] for e, c in x.items()]}
    if isinstance(x, QuadraticNumber):
        return {"rational": rational_str(x.a), "sqrt_coeff": rational_str(x.b),
                "radicand": rational_str(x.d)}
    raise TypeError(f"no canonical JSON form for {type(x).__name__}")


def from_json(obj):
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, list):
        return LaurentV({int(k): Fraction(c) for k, c in obj})
    if isinstance(obj, dict):
        if "num" in obj:
            return RatFunV(from_json(obj["num"]), from_json(obj["den"]))
        if "coeffs" in obj:
            return USeriesL(obj["low"], obj["high"],
                            {int(e): Fraction(c) for e, c in obj["coeffs"]})
        if "radicand" in obj:
            return QuadraticNumber(Fraction(obj["rational"]), Fraction(obj["sqrt_coeff"]),
                                   Fraction(obj["radicand"]))
    raise ValueError(f"unrecognised scalar JSON: {obj!r}")
