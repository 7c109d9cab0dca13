"""KP and 2-Toda tau functions built from W and the Fock engine, with Hirota checks.

Variables: ``p_n`` (one family) or ``p+_n, p-_n`` (two families), with
``t_n = p_n / n``.  Grading counts ``deg p_n = n`` and, for two families,
the total of both.  Scalars live in the variable ``q^(1/(2 root))`` where
``root`` is chosen so that every power of q that occurs is integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb

from .fock import QK, Gamma, Y, vev
from .partitions import EMPTY, Partition, as_partition, kappa, partitions_up_to, sort_key
from .quantumdim import a4, w_two_key
from .scalars import (
    RatFunV,
    _is_rational,
    expand_u,
    from_json,
    lift,
    q_power,
    rational_str,
    root_for,
    specialize_q,
    to_json as scalar_json,
)
from .symfun import SymFun, graded_log, schur_in_p, specialize

SCHEMA = "tauforge.series.v1"
REPORT_SCHEMA = "tauforge.report.v1"


class DegreeError(ValueError):
    pass


def _union(a: Partition, b: Partition) -> Partition:
    return Partition(sorted(a + b, reverse=True))


def _key(item):
    (plus, minus), _ = item
    return (plus.size + minus.size, tuple(-x for x in plus), tuple(-x for x in minus))


class TauSeries:
    """``sum c_{mu+, mu-} p+_{mu+} p-_{mu-}`` through total degree ``degree``."""

    __slots__ = ("families", "degree", "terms", "root")

    def __init__(self, families: int, degree: int, terms=None, root: int = 1):
        if families not in (1, 2):
            raise ValueError("families must be 1 or 2")
        self.families = families
        self.degree = degree
        self.root = root
        self.terms: dict[tuple[Partition, Partition], object] = {}
        for (plus, minus), c in (terms or {}).items():
            plus, minus = as_partition(plus), as_partition(minus)
            if families == 1 and minus:
                raise ValueError("one-family series has no minus variables")
            if plus.size + minus.size <= degree and c:
                self.terms[(plus, minus)] = c

    @classmethod
    def one(cls, families: int = 1, degree: int = 0, root: int = 1) -> "TauSeries":
        return cls(families, degree, {(EMPTY, EMPTY): Fraction(1)}, root)

    @classmethod
    def mono(cls, plus=(), minus=(), coeff=Fraction(1), families: int = 1, degree: int = 0,
             root: int = 1) -> "TauSeries":
        return cls(families, degree, {(as_partition(plus), as_partition(minus)): coeff}, root)

    @classmethod
    def from_symfun(cls, f: SymFun, degree: int, root: int = 1) -> "TauSeries":
        return cls(1, degree, {(mu, EMPTY): c for mu, c in f.terms.items()}, root)

    def to_symfun(self) -> SymFun:
        if self.families != 1:
            raise ValueError("only one-family series convert to SymFun")
        return SymFun({plus: c for (plus, _), c in self.terms.items()})

    def _new(self, terms, degree=None) -> "TauSeries":
        return TauSeries(self.families, self.degree if degree is None else degree, terms, self.root)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, plus=(), minus=()):
        return self.terms.get((as_partition(plus), as_partition(minus)), 0)

    def constant_term(self):
        return self.coefficient()

    def items(self):
        return sorted(self.terms.items(), key=_key)

    def truncate(self, degree: int) -> "TauSeries":
        return self._new(self.terms, min(self.degree, degree))

    def map_coeffs(self, f) -> "TauSeries":
        return self._new({k: f(c) for k, c in self.terms.items()})

    def _check(self, other: "TauSeries"):
        if self.families != other.families:
            raise ValueError("series have different numbers of families")

    def __add__(self, other):
        if not isinstance(other, TauSeries):
            return self + self._new({(EMPTY, EMPTY): other})
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TauSeries(self.families, min(self.degree, other.degree), out, max(self.root, other.root))

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TauSeries):
            return self._new({k: c * other for k, c in self.terms.items()})
        self._check(other)
        D = min(self.degree, other.degree)
        out: dict = {}
        for (a1, b1), x in self.terms.items():
            s1 = a1.size + b1.size
            for (a2, b2), y in other.terms.items():
                if s1 + a2.size + b2.size > D:
                    continue
                k = (_union(a1, a2), _union(b1, b2))
                val = x * y
                out[k] = out[k] + val if k in out else val
        return TauSeries(self.families, D, out, max(self.root, other.root))

    def __rmul__(self, other):
        return self._new({k: other * c for k, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TauSeries):
            return self == self._new({(EMPTY, EMPTY): other}) if _is_rational(other) or other == 0 else NotImplemented
        keys = set(self.terms) | set(other.terms)
        D = min(self.degree, other.degree)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0)
                   for k in keys if k[0].size + k[1].size <= D)

    __hash__ = None

    def differences(self, other: "TauSeries") -> dict:
        keys = set(self.terms) | set(other.terms)
        D = min(self.degree, other.degree)
        out = {}
        for k in keys:
            if k[0].size + k[1].size > D:
                continue
            d = self.terms.get(k, 0) - other.terms.get(k, 0)
            if d:
                out[k] = d
        return out

    def derivative(self, k: int, family: int = +1) -> "TauSeries":
        """``d/dp_k`` in the plus (``family=+1``) or minus family; degree drops by k."""
        out: dict = {}
        for (plus, minus), c in self.terms.items():
            part = plus if family > 0 else minus
            mult = part.count(k)
            if not mult:
                continue
            rest = list(part)
            rest.remove(k)
            rest = Partition(rest)
            key = (rest, minus) if family > 0 else (plus, rest)
            out[key] = c * mult
        return self._new(out, self.degree - k)

    def rescale(self, scale_plus=None, scale_minus=None) -> "TauSeries":
        """Substitute ``p+_k -> s+^k p+_k`` and ``p-_k -> s-^k p-_k``."""
        out = {}
        for (plus, minus), c in self.terms.items():
            if scale_plus is not None and plus.size:
                c = c * scale_plus ** plus.size
            if scale_minus is not None and minus.size:
                c = c * scale_minus ** minus.size
            out[(plus, minus)] = c
        return self._new(out)

    def lifted(self, root: int) -> "TauSeries":
        if root % self.root:
            raise ValueError("target root must be a multiple of the current one")
        m = root // self.root
        out = TauSeries(self.families, self.degree, {k: lift(c, m) for k, c in self.terms.items()}, root)
        return out

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "families": self.families, "degree": self.degree}
        if self.root != 1:
            out["root"] = self.root
        out["terms"] = [{"mu_plus": list(plus), "mu_minus": list(minus), "coeff": scalar_json(c)}
                        for (plus, minus), c in self.items()]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TauSeries":
        if obj.get("schema") != SCHEMA:
            raise ValueError("not a tauforge.series.v1 document")
        terms = {(Partition(t["mu_plus"]), Partition(t["mu_minus"])): from_json(t["coeff"])
                 for t in obj["terms"]}
        return cls(obj["families"], obj["degree"], terms, obj.get("root", 1))

    def __repr__(self):
        return f"TauSeries(families={self.families}, degree={self.degree}, terms={len(self.terms)})"


# ---------------------------------------------------------------------------
# formal variables


def formal_t(family: int, families: int, degree: int, root: int = 1):
    """``n -> t_n = p_n/n`` as monomials of a TauSeries family."""

    def t(n: int) -> TauSeries:
        if n > degree:
            return 0
        part = Partition((n,))
        key = (part, EMPTY) if family > 0 else (EMPTY, part)
        return TauSeries(families, degree, {key: Fraction(1, n)}, root)

    return t


def gamma_formal(sign: int, family: int, families: int, degree: int, root: int = 1) -> Gamma:
    return Gamma(sign, formal_t(family, families, degree, root), graded=True,
                 name=f"Gamma{'+' if sign > 0 else '-'}(t{'+' if family > 0 else '-'})")


# ---------------------------------------------------------------------------
# one-partition series


def _lifted_a4(nu: Partition, root: int):
    return lift(_a4_schur(nu), root)


@lru_cache(maxsize=None)
def _a4_schur(nu: Partition) -> RatFunV:
    from .scalars import ratfun

    return ratfun(specialize(schur_in_p(nu), a4()))


def kp_root(r) -> int:
    return root_for([Fraction(r) + 1])


def kp_tau_series(r, D: int, route: str = "sum") -> TauSeries:
    """``sum_nu q^{kappa_nu (r+1)/2} s_nu(x) s_nu(A)`` with ``A = (-q^1/2, -q^3/2, ...)``.

    ``route="sum"`` assembles the sum directly; ``route="vev"`` evaluates
    ``<0|Y_+(x) q^{(r+1)K} Y_-(A)|0>`` in the Fock engine.
    """
    r = Fraction(r)
    if D < 0:
        raise DegreeError("degree must be nonnegative")
    m = kp_root(r)
    if route == "sum":
        out = TauSeries(1, D, {}, m)
        for nu in partitions_up_to(D):
            c = q_power((r + 1) * kappa(nu) / 2, m) * _lifted_a4(nu, m)
            out = out + TauSeries.from_symfun(schur_in_p(nu), D, m) * c
        return out
    if route == "vev":
        word = [gamma_formal(+1, +1, 1, D, m), QK(r + 1, m), Y(-1, a4(), m)]
        value = vev(word, 0, degree=D, cutoff=D)
        if not isinstance(value, TauSeries):
            value = TauSeries.one(1, D, m) * value
        value.root = m
        return value
    raise ValueError("route must be 'sum' or 'vev'")


def conifold_tau(D: int, route: str = "sum") -> TauSeries:
    """Relative invariants of the resolved conifold: the r = -1 series."""
    return kp_tau_series(-1, D, route)


def connected_coefficients(tau: TauSeries, mu, order: int):
    """Coefficient of ``p_mu`` in ``log tau`` as a Laurent series in u (q = e^u)."""
    mu = as_partition(mu)
    if mu.size > tau.degree:
        raise DegreeError(f"series known through degree {tau.degree}, need {mu.size}")
    log = graded_log(tau.to_symfun(), tau.degree)
    c = log.coeff(mu)
    return expand_u(c if c else RatFunV(0), order, tau.root)


def connected_exact(tau: TauSeries, mu):
    mu = as_partition(mu)
    if mu.size > tau.degree:
        raise DegreeError(f"series known through degree {tau.degree}, need {mu.size}")
    return graded_log(tau.to_symfun(), tau.degree).coeff(mu)


# ---------------------------------------------------------------------------
# Hirota bilinear forms


def _to_t_poly(tau: TauSeries) -> dict:
    """Polynomial in ``t_1..t_D`` (exponent tuples) from a one-family series."""
    D = tau.degree
    out = {}
    for (plus, _), c in tau.terms.items():
        exps = [0] * D
        factor = 1
        for part in plus:
            exps[part - 1] += 1
            factor *= part
        out[tuple(exps)] = c * factor
    return out


def _weight(exps) -> int:
    return sum((i + 1) * e for i, e in enumerate(exps))


def _poly_derivative(poly: dict, alpha: tuple) -> dict:
    out = {}
    for exps, c in poly.items():
        new = list(exps)
        factor = 1
        for i, a in enumerate(alpha):
            if a > exps[i]:
                factor = 0
                break
            for j in range(a):
                factor *= exps[i] - j
            new[i] -= a
        if factor:
            out[tuple(new)] = c * factor
    return out


def hirota_bilinear(poly: dict, alpha: tuple, max_weight: int) -> dict:
    """``D^alpha f.f`` through weight ``max_weight``."""
    out: dict = {}
    ranges = [range(a + 1) for a in alpha]
    for beta in iproduct(*ranges):
        rest = tuple(a - b for a, b in zip(alpha, beta))
        coef = 1
        for a, b in zip(alpha, beta):
            coef *= comb(a, b)
        if sum(b for b in beta) % 2:
            coef = -coef
        left = _poly_derivative(poly, rest)
        right = _poly_derivative(poly, beta)
        for e1, c1 in left.items():
            w1 = _weight(e1)
            if w1 > max_weight:
                continue
            for e2, c2 in right.items():
                if w1 + _weight(e2) > max_weight:
                    continue
                k = tuple(x + y for x, y in zip(e1, e2))
                val = c1 * c2 * coef
                out[k] = out[k] + val if k in out else val
    return {k: c for k, c in out.items() if c}


def _residual_summary(residuals: dict) -> str:
    if not residuals:
        return "0"
    vals = list(residuals.values())
    if all(_is_rational(v) for v in vals):
        return rational_str(max(abs(Fraction(v)) for v in vals))
    first = sorted(residuals.items(), key=lambda kv: str(kv[0]))[0][1]
    return str(first)


def _report(check: str, params: dict, window, residuals: dict, extra=None) -> dict:
    out = {"schema": REPORT_SCHEMA, "check": check, "params": params,
           "certified_window": window, "max_residual": _residual_summary(residuals),
           "nonzero_residuals": len(residuals), "pass": not residuals}
    if extra:
        out.update(extra)
    return out


def kp_hirota_residuals(tau: TauSeries) -> dict:
    """Nonzero coefficients of ``(D1^4 + 3 D2^2 - 4 D1 D3) tau.tau`` through degree D - 4."""
    D = tau.degree
    if tau.families != 1:
        raise ValueError("KP check needs a one-family series")
    if D < 4:
        raise DegreeError("the KP equation needs degree at least 4")
    poly = _to_t_poly(tau)
    top = D - 4
    total: dict = {}

    def alpha(**powers):
        a = [0] * D
        for name, e in powers.items():
            a[int(name[1:]) - 1] = e
        return tuple(a)

    for coef, a in ((1, alpha(t1=4)), (3, alpha(t2=2)), (-4, alpha(t1=1, t3=1))):
        for k, c in hirota_bilinear(poly, a, top).items():
            val = c * coef
            total[k] = total[k] + val if k in total else val
    return {k: c for k, c in total.items() if c}


def kp_hirota_pde_check(tau: TauSeries, D: int | None = None, label: str = "kp-pde",
                        params: dict | None = None) -> dict:
    if D is not None:
        tau = tau.truncate(D)
    res = kp_hirota_residuals(tau)
    shown = {",".join(map(str, k)): str(v) for k, v in sorted(res.items())}
    return _report(label, params or {"degree": tau.degree}, tau.degree - 4, res,
                   {"equation": "(D1^4 + 3 D2^2 - 4 D1 D3) tau.tau = 0",
                    "residuals": shown})


def specialize_series(tau: TauSeries, q0) -> TauSeries:
    """Evaluate every coefficient at the rational value ``q = q0``."""
    if tau.root != 1:
        from .scalars import RegimeError

        raise RegimeError("numeric specialization needs the q^(1/2) regime")
    return tau.map_coeffs(lambda c: specialize_q(c, q0))


# ---------------------------------------------------------------------------
# two-partition series and 2-Toda sequences


def toda_constant(n: int) -> Fraction:
    """``n(4n^2 - 1)/24``."""
    return Fraction(n * (4 * n * n - 1), 24)


@dataclass
class TodaSequence:
    """Charge-n tau functions of ``<n|Y_+(x+) q^{aK} Y_-(A) Y_+(A) q^{bK} Y_-(x-)|n>``.

    ``taus`` come from the charge-n vev; ``shifted`` from the base series by
    ``tau_n = q^{(a+b) n(4n^2-1)/24} tau_0(q^{a n} x+, q^{b n} x-)``.
    """

    a: Fraction
    b: Fraction
    degree: int
    root: int
    base: TauSeries
    taus: dict = field(default_factory=dict)
    shifted: dict = field(default_factory=dict)
    label: str = ""

    def prefactor_exponent(self, n: int) -> Fraction:
        return (self.a + self.b) * toda_constant(n)

    def route_differences(self) -> dict:
        return {n: self.taus[n].differences(self.shifted[n]) for n in self.taus if n in self.shifted}


def toda_root(a, b, ns) -> int:
    exps = [Fraction(a), Fraction(b)]
    for n in ns:
        c = toda_constant(n)
        exps += [a * c, b * c, (a + b) * c, Fraction(a) / 2, Fraction(b) / 2]
    return root_for(exps)


def two_family_base(a, b, D: int, root: int) -> TauSeries:
    """``sum s_{nu+}(x+) q^{(a-1)kappa+/2 + (b-1)kappa-/2} W_{nu+,nu-} s_{nu-}(x-)``."""
    a, b = Fraction(a), Fraction(b)
    out = TauSeries(2, D, {}, root)
    for nu_p in partitions_up_to(D):
        sp = schur_in_p(nu_p)
        for nu_m in partitions_up_to(D - nu_p.size):
            sm = schur_in_p(nu_m)
            w = lift(w_two_key(nu_p, nu_m), root)
            c = w * q_power((a - 1) * kappa(nu_p) / 2 + (b - 1) * kappa(nu_m) / 2, root)
            terms = {}
            for mu_p, x in sp.terms.items():
                for mu_m, y in sm.terms.items():
                    terms[(mu_p, mu_m)] = c * (x * y)
            out = out + TauSeries(2, D, terms, root)
    return out


def two_family_vev(a, b, n: int, D: int, root: int) -> TauSeries:
    word = [gamma_formal(+1, +1, 2, D, root), QK(a, root), Y(-1, a4(), root),
            Y(+1, a4(), root), QK(b, root), gamma_formal(-1, -1, 2, D, root)]
    value = vev(word, n, degree=D, cutoff=D)
    if not isinstance(value, TauSeries):
        value = TauSeries.one(2, D, root) * value
    value.root = root
    return value


def _shifted(base: TauSeries, a, b, n: int, root: int) -> TauSeries:
    pre = q_power((a + b) * toda_constant(n), root)
    return base.rescale(q_power(a * n, root), q_power(b * n, root)) * pre


def _sequence(a, b, n_min: int, n_max: int, D: int, label: str, vev_route: bool = True) -> TodaSequence:
    a, b = Fraction(a), Fraction(b)
    ns = range(n_min, n_max + 1)
    m = toda_root(a, b, ns)
    base = two_family_base(a, b, D, m)
    seq = TodaSequence(a, b, D, m, base, label=label)
    for n in ns:
        seq.shifted[n] = _shifted(base, a, b, n, m)
        if vev_route:
            seq.taus[n] = two_family_vev(a, b, n, D, m)
        else:
            seq.taus[n] = seq.shifted[n]
    return seq


def toda_tau_sequence(r, n_min: int, n_max: int, D: int, vev_route: bool = True) -> TodaSequence:
    """Two-partition sequence with exponents ``a = r + 1`` and ``b = 1/r + 1``."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("r must be nonzero")
    return _sequence(r + 1, 1 / r + 1, n_min, n_max, D, f"toda r={r}", vev_route)


def toric_tau(D: int, route: str = "sum") -> TauSeries:
    """``sum s_{nu+}(x+) W_{nu+,nu-} s_{nu-}(x-)``."""
    if route == "sum":
        return two_family_base(1, 1, D, 1)
    if route == "vev":
        return two_family_vev(1, 1, 0, D, 1)
    raise ValueError("route must be 'sum' or 'vev'")


def toric_toda_sequence(n_min: int, n_max: int, D: int, vev_route: bool = True) -> TodaSequence:
    """``tau_n = q^{n(4n^2-1)/12} K(q^n x+, q^n x-)`` together with the charge-n vevs."""
    return _sequence(1, 1, n_min, n_max, D, "toric", vev_route)


def trivial_sequence(n_min: int, n_max: int, D: int) -> dict:
    """``<n|Gamma_+(t+) Gamma_-(t-)|n>`` for each n."""
    out = {}
    for n in range(n_min, n_max + 1):
        word = [gamma_formal(+1, +1, 2, D), gamma_formal(-1, -1, 2, D)]
        value = vev(word, n, degree=D, cutoff=D)
        out[n] = value
    return out


def _toda_sides(taus: dict, n: int, D: int) -> tuple[TauSeries, TauSeries]:
    tau = taus[n].truncate(D)
    dp = tau.derivative(1, +1)
    dm = tau.derivative(1, -1)
    dpm = dp.derivative(1, -1)
    lhs = tau * dpm - dp * dm
    rhs = taus[n + 1].truncate(D) * taus[n - 1].truncate(D)
    return lhs.truncate(D - 2), rhs.truncate(D - 2)


@lru_cache(maxsize=None)
def calibrate_toda_constant(D: int = 4) -> Fraction:
    """The constant c with ``tau d+d- tau - d+tau d-tau = c tau_{n+1} tau_{n-1}``
    read off the trivial sequence and confirmed on all its coefficients."""
    taus = trivial_sequence(-2, 2, D)
    lhs, rhs = _toda_sides(taus, 0, D)
    c = Fraction(lhs.constant_term()) / Fraction(rhs.constant_term())
    for n in (-1, 0, 1):
        lhs, rhs = _toda_sides(taus, n, D)
        if lhs.differences(rhs * c):
            raise ArithmeticError("trivial sequence does not fix a single constant")
    return c


def toda_equation_check(seq, D: int | None = None, c=None, label: str = "toda-eq",
                        params: dict | None = None) -> dict:
    """First 2-Toda equation on every interior charge of ``seq`` through degree D - 2."""
    taus = seq.taus if isinstance(seq, TodaSequence) else seq
    ns = sorted(taus)
    if D is None:
        D = min(t.degree for t in taus.values())
    if c is None:
        c = calibrate_toda_constant(D)
    residuals = {}
    interior = [n for n in ns if n - 1 in taus and n + 1 in taus]
    if not interior:
        raise ValueError("sequence needs charges n-1, n, n+1")
    for n in interior:
        lhs, rhs = _toda_sides(taus, n, D)
        for k, d in lhs.differences(rhs * c).items():
            residuals[(n,) + k] = d
    shown = {f"n={k[0]} {list(k[1])}|{list(k[2])}": str(v) for k, v in residuals.items()}
    return _report(label, params or {"degree": D, "charges": interior}, D - 2, residuals,
                   {"equation": "tau d+d- tau - d+tau d-tau = c tau_{n+1} tau_{n-1} (t1 derivatives)",
                    "constant": rational_str(Fraction(c)), "residuals": shown})


# ---------------------------------------------------------------------------
# conjugation symmetry


def kp_tau_series_mirrored(r, D: int) -> TauSeries:
    """The one-partition sum with ``(r+1) -> -(r+1)`` and ``v -> 1/v`` in the alphabet images."""
    r = Fraction(r)
    m = kp_root(r)
    out = TauSeries(1, D, {}, m)
    for nu in partitions_up_to(D):
        spec = lift(_a4_schur(nu).invert_v(), m)
        c = q_power(-(r + 1) * kappa(nu) / 2, m) * spec
        out = out + TauSeries.from_symfun(schur_in_p(nu), D, m) * c
    return out


def negate_variables(tau: TauSeries) -> TauSeries:
    """``p_n -> -p_n`` in every family."""
    return tau._new({(a, b): (c if (len(a) + len(b)) % 2 == 0 else -c)
                     for (a, b), c in tau.terms.items()})


def kappa_symmetry_check(r, D: int) -> dict:
    """Compare the mirrored series with the original, with and without ``p -> -p``."""
    tau = kp_tau_series(r, D)
    mirrored = kp_tau_series_mirrored(r, D)
    literal = mirrored.differences(tau)
    signed = mirrored.differences(negate_variables(tau))
    return {"r": str(Fraction(r)), "degree": D,
            "literal_equal": not literal, "equal_after_negating_p": not signed,
            "literal_differences": len(literal)}
