"""The rational functions W_mu(q) and W_{mu,nu}(q), each by several routes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .partitions import Partition, as_partition, intersection, kappa, subpartitions
from .scalars import LaurentV, RatFunV, bracket, expand_v_adic, ratfun
from .symfun import (
    Alphabet,
    minus_half_shifted,
    newton_e_to_p,
    principal,
    principal_inverse,
    schur_in_p,
    skew_schur_in_p,
    specialize,
)

ROUTES = ("product", "principal-spec", "key-sum", "E-alphabet", "fock-vev")


class RouteMismatch(AssertionError):
    """Two evaluation routes disagree; carries both values."""

    def __init__(self, label: str, first: "WValue", second: "WValue"):
        self.label = label
        self.first = first
        self.second = second
        super().__init__(f"{label}: route {first.route} gave {first.value}, "
                         f"route {second.route} gave {second.value}")

    def report(self) -> dict:
        from .scalars import to_json

        return {"label": self.label,
                "routes": [{"route": w.route, "value": to_json(w.value)}
                           for w in (self.first, self.second)]}


@dataclass(frozen=True)
class WValue:
    value: object
    route: str

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")


def agree(label: str, *values: WValue) -> WValue:
    """Return the first value if every route agrees, else raise :class:`RouteMismatch`."""
    first = values[0]
    for other in values[1:]:
        if ratfun(first.value) != ratfun(other.value):
            raise RouteMismatch(label, first, other)
    return first


# module-level alphabets so that their image caches are shared
_PRINCIPAL = principal()
_PRINCIPAL_INV = principal_inverse()
_A4 = minus_half_shifted()


def a4() -> Alphabet:
    """The alphabet ``(-q^1/2, -q^3/2, ...)``."""
    return _A4


def _vpow(k: int) -> LaurentV:
    return LaurentV.mono(k)


@lru_cache(maxsize=None)
def w_one_product(mu) -> RatFunV:
    """Product formula: ``q^{kappa/4} prod_{i<j} [mu_i-mu_j+j-i]/[j-i] prod_i prod_v 1/[v-i+l]``."""
    mu = as_partition(mu)
    ell = len(mu)
    num = _vpow(kappa(mu) // 2)
    den = LaurentV.const(1)
    for i in range(1, ell + 1):
        for j in range(i + 1, ell + 1):
            num = num * bracket(mu[i - 1] - mu[j - 1] + j - i)
            den = den * bracket(j - i)
        for v in range(1, mu[i - 1] + 1):
            den = den * bracket(v - i + ell)
    return RatFunV(num, den)


@lru_cache(maxsize=None)
def w_one_spec(mu, variant: int = 1) -> RatFunV:
    """``q^{-|mu|/2} s_mu(1, q^-1, ...)`` (variant 1) or
    ``(-1)^{|mu|} q^{kappa/2 + |mu|/2} s_mu(1, q, ...)`` (variant 2)."""
    mu = as_partition(mu)
    s = schur_in_p(mu)
    if variant == 1:
        return ratfun(specialize(s, _PRINCIPAL_INV)) * _vpow(-mu.size)
    if variant == 2:
        sign = -1 if mu.size % 2 else 1
        return ratfun(specialize(s, _PRINCIPAL)) * _vpow(kappa(mu) + mu.size) * sign
    raise ValueError("variant must be 1 or 2")


def _t_series_mul(a: list, b: list, N: int) -> list:
    out = [0] * (N + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), N + 1 - i)):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out


@lru_cache(maxsize=None)
def e_mu_coefficients(mu, N: int) -> tuple:
    """``e_0, ..., e_N``: the t-coefficients of E_mu(q, t)."""
    mu = as_partition(mu)
    one = RatFunV(1)
    series = [one] + [RatFunV(0)] * N
    # 1 + sum_n t^n / prod_{i<=n} (q^i - 1)
    den = LaurentV.const(1)
    for n in range(1, N + 1):
        den = den * LaurentV({2 * n: 1, 0: -1})
        series[n] = RatFunV(LaurentV.const(1), den)
    for j in range(1, len(mu) + 1):
        # (1 + q^{mu_j - j} t) / (1 + q^{-j} t)
        num = [one, RatFunV(_vpow(2 * (mu[j - 1] - j)))]
        inv = [RatFunV(_vpow(-2 * j * k)) * ((-1) ** k) for k in range(N + 1)]
        series = _t_series_mul(_t_series_mul(series, num, N), inv, N)
    return tuple(series)


def e_mu_alphabet(mu, N: int) -> Alphabet:
    """Alphabet with ``p_1..p_N`` obtained from the e_n of ``E_mu(q, t)`` by Newton's identities."""
    if N < 1:
        raise ValueError("N must be at least 1")
    e = list(e_mu_coefficients(as_partition(mu), N))
    p = newton_e_to_p(e)
    return Alphabet(f"E_{list(as_partition(mu))}", None, {n: p[n] for n in range(1, N + 1)})


@lru_cache(maxsize=None)
def _principal_skew(mu: Partition, rho: Partition) -> RatFunV:
    return ratfun(specialize(skew_schur_in_p(mu, rho), _PRINCIPAL))


@lru_cache(maxsize=None)
def w_two_key(mu, nu) -> RatFunV:
    """Key sum over ``rho`` inside both diagrams."""
    mu, nu = as_partition(mu), as_partition(nu)
    total = RatFunV(0)
    for rho in subpartitions(intersection(mu, nu)):
        term = _principal_skew(mu, rho) * _principal_skew(nu, rho)
        total = total + term * _vpow(-2 * rho.size)
    sign = -1 if (mu.size + nu.size) % 2 else 1
    return total * _vpow(kappa(mu) + kappa(nu) + mu.size + nu.size) * sign


@lru_cache(maxsize=None)
def w_two_via_E(mu, nu) -> RatFunV:
    """``q^{|nu|/2} W_mu s_nu(E_mu(q, t))``."""
    mu, nu = as_partition(mu), as_partition(nu)
    if not nu:
        return w_one_product(mu)
    s = ratfun(specialize(schur_in_p(nu), e_mu_alphabet(mu, nu.size)))
    return w_one_product(mu) * s * _vpow(nu.size)


def w_two_vev(mu, nu, M: int, ordering: str = "normal", cutoff: int | None = None) -> list:
    """v-adic expansion through ``v^M`` of a Fock matrix element.

    ``ordering="normal"`` evaluates ``<mu| q^K Y_-(A) Y_+(A) q^K |nu>``;
    ``ordering="printed"`` evaluates ``<mu| q^K Y_+(A) Y_-(A) q^K |nu>``,
    with ``A = (-q^1/2, -q^3/2, ...)``.  The cutoff defaults to the smallest
    value whose guarantee certifies the requested order.
    """
    from .fock import Y, InsufficientCutoff, matrix_element

    mu, nu = as_partition(mu), as_partition(nu)
    if ordering == "normal":
        inner = [Y(-1, _A4, graded=True), Y(+1, _A4, graded=True)]
    elif ordering == "printed":
        inner = [Y(+1, _A4, graded=True), Y(-1, _A4, graded=True)]
    else:
        raise ValueError("ordering must be 'normal' or 'printed'")
    shift = kappa(mu) + kappa(nu)
    need = M - shift  # valuation needed for the inner matrix element
    if cutoff is None:
        cutoff = max(mu.size, nu.size)
        while 2 * (cutoff + 1) - mu.size - nu.size <= need:
            cutoff += 1
    try:
        inner_value = matrix_element(inner, mu, nu, 0, cutoff, None, certify=need)
    except InsufficientCutoff as exc:
        raise InsufficientCutoff(f"W vev for {list(mu)}, {list(nu)} through v^{M}: {exc}") from None
    value = ratfun(inner_value) * _vpow(shift)
    return expand_v_adic(value, M)


def macmahon(order: int) -> RatFunV:
    """``prod_{k>=1} (1-q^k)^{-k}`` keeping the factors that matter through ``v^order``.

    This is the vacuum value of ``Y_+(A) Y_-(A)`` for ``A = (-q^1/2, -q^3/2, ...)``.
    """
    den = LaurentV.const(1)
    for k in range(1, order // 2 + 1):
        den = den * LaurentV({0: 1, 2 * k: -1}) ** k
    return RatFunV(1, den)


def w_table(max_size: int) -> list[dict]:
    """Rows ``{"mu", "W"}`` for every partition up to ``max_size``."""
    from .partitions import partitions_up_to
    from .scalars import to_json

    return [{"mu": list(mu), "W": to_json(w_one_product(mu))} for mu in partitions_up_to(max_size)]


def ww_pairs(max_total: int) -> list[tuple[Partition, Partition]]:
    """All pairs with ``|mu| + |nu| <= max_total``, ordered by ``|mu|`` then ``nu``."""
    from .partitions import enumerate_partitions, partitions_up_to

    return [(mu, nu)
            for a in range(max_total + 1)
            for mu in enumerate_partitions(a)
            for nu in partitions_up_to(max_total - a)]
