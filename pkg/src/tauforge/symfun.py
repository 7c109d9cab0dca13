"""Symmetric functions in the power-sum basis.

A :class:`SymFun` is a finite linear combination ``sum c_mu p_mu``.  The
coefficients may live in any commutative ring that supports ``+``, ``*`` and
truth-testing for zero (Fraction, :class:`~tauforge.scalars.RatFunV`, ...).
Schur and skew Schur functions are produced as conversions into this basis.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .partitions import (
    EMPTY,
    Partition,
    as_partition,
    border_strips,
    enumerate_partitions,
    hooks_and_contents,
    n_weight,
    sort_key,
    z_factor,
)
from .scalars import LaurentV, RatFunV, bracket, to_json as scalar_json


class SymFun:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict[Partition, object] = {}
        for mu, c in (terms or {}).items():
            if c:
                self.terms[as_partition(mu)] = c

    @classmethod
    def one(cls) -> "SymFun":
        return cls({EMPTY: Fraction(1)})

    @classmethod
    def p(cls, mu, coeff=Fraction(1)) -> "SymFun":
        return cls({as_partition(mu): coeff})

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, mu):
        return self.terms.get(as_partition(mu), 0)

    def items(self) -> list[tuple[Partition, object]]:
        return sorted(self.terms.items(), key=lambda kv: sort_key(kv[0]))

    def degree(self) -> int:
        return max((mu.size for mu in self.terms), default=-1)

    def homogeneous(self, d: int) -> "SymFun":
        return SymFun({mu: c for mu, c in self.terms.items() if mu.size == d})

    def truncate(self, D: int) -> "SymFun":
        return SymFun({mu: c for mu, c in self.terms.items() if mu.size <= D})

    def constant_term(self):
        return self.terms.get(EMPTY, 0)

    def map_coeffs(self, f: Callable) -> "SymFun":
        return SymFun({mu: f(c) for mu, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, SymFun):
            other = SymFun({EMPTY: other})
        out = dict(self.terms)
        for mu, c in other.terms.items():
            out[mu] = out[mu] + c if mu in out else c
        return SymFun(out)

    __radd__ = __add__

    def __neg__(self):
        return SymFun({mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymFun):
            return SymFun({mu: c * other for mu, c in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        return SymFun({mu: other * c for mu, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SymFun):
            if other == 0:
                return not self.terms
            return self == SymFun({EMPTY: other})
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*p{list(mu)}" for mu, c in self.items())

    def to_json(self) -> list[dict]:
        return [{"mu": list(mu), "coeff": scalar_json(c)} for mu, c in self.items()]


def union(mu: Partition, nu: Partition) -> Partition:
    return Partition(sorted(mu + nu, reverse=True))


def multiply(f: SymFun, g: SymFun, D: int | None = None) -> SymFun:
    out: dict[Partition, object] = {}
    for mu, a in f.terms.items():
        for nu, b in g.terms.items():
            if D is not None and mu.size + nu.size > D:
                continue
            key = union(mu, nu)
            val = a * b
            out[key] = out[key] + val if key in out else val
    return SymFun(out)


# ---------------------------------------------------------------------------
# characters and the Schur basis


@lru_cache(maxsize=None)
def mn_character(nu, mu) -> int:
    """``chi_nu(mu)`` by the Murnaghan-Nakayama rule."""
    nu, mu = as_partition(nu), as_partition(mu)
    if nu.size != mu.size:
        raise ValueError(f"size mismatch: |{list(nu)}| != |{list(mu)}|")
    if not mu:
        return 1
    first, rest = mu[0], Partition(mu[1:])
    total = 0
    for smaller, height in border_strips(nu, first):
        total += (-1) ** height * mn_character(smaller, rest)
    return total


@lru_cache(maxsize=None)
def schur_in_p(nu) -> SymFun:
    nu = as_partition(nu)
    return SymFun({mu: Fraction(mn_character(nu, mu), z_factor(mu))
                   for mu in enumerate_partitions(nu.size)})


@lru_cache(maxsize=None)
def h_in_p(k: int) -> SymFun:
    if k < 0:
        return SymFun()
    return SymFun({mu: Fraction(1, z_factor(mu)) for mu in enumerate_partitions(k)})


@lru_cache(maxsize=None)
def e_in_p(k: int) -> SymFun:
    if k < 0:
        return SymFun()
    return SymFun({mu: Fraction((-1) ** (k - len(mu)), z_factor(mu))
                   for mu in enumerate_partitions(k)})


def _determinant(matrix: list[list[SymFun]]) -> SymFun:
    """Laplace expansion along rows, memoised on the set of used columns."""
    n = len(matrix)
    memo: dict[tuple[int, ...], SymFun] = {}

    def minor(row: int, cols: tuple[int, ...]) -> SymFun:
        if row == n:
            return SymFun.one()
        if cols in memo:
            return memo[cols]
        acc = SymFun()
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = multiply(entry, sub)
            acc = acc + (term if pos % 2 == 0 else -term)
        memo[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


@lru_cache(maxsize=None)
def skew_schur_in_p(mu, rho=EMPTY) -> SymFun:
    """``s_{mu/rho}`` via the Jacobi-Trudi determinant ``det h_{mu_i - rho_j - i + j}``."""
    mu, rho = as_partition(mu), as_partition(rho)
    if not mu.contains(rho):
        return SymFun()
    n = len(mu)
    if n == 0:
        return SymFun.one()
    rho_pad = list(rho) + [0] * (n - len(rho))
    matrix = [[h_in_p(mu[i] - rho_pad[j] - i + j) if mu[i] - rho_pad[j] - i + j >= 0 else SymFun()
               for j in range(n)] for i in range(n)]
    return _determinant(matrix)


# ---------------------------------------------------------------------------
# Pieri rule, used as an independent route to skew Schur functions


def horizontal_strips(lam: Partition, k: int) -> list[Partition]:
    """Partitions obtained from ``lam`` by adding a horizontal strip of size k."""
    lam = as_partition(lam)
    rows = list(lam) + [0]
    out: list[Partition] = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(rows):
            if left == 0:
                out.append(Partition(acc))
            return
        cap = left if i == 0 else min(left, rows[i - 1] - rows[i])
        for add in range(cap, -1, -1):
            rec(i + 1, left - add, acc + [rows[i] + add])

    rec(0, k, [])
    return out


def _pieri_chain(start: Partition, sizes: Iterable[int]) -> dict[Partition, int]:
    layer = {start: 1}
    for k in sizes:
        if k < 0:
            return {}
        nxt: dict[Partition, int] = {}
        for lam, mult in layer.items():
            for mu in horizontal_strips(lam, k):
                nxt[mu] = nxt.get(mu, 0) + mult
        layer = nxt
    return layer


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cycle = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def lr_coefficient(mu, rho, nu) -> int:
    """Coefficient of ``s_mu`` in ``s_rho * s_nu`` by iterated Pieri.

    ``s_nu`` is written as the alternating sum ``sum_sigma sgn(sigma) h_{nu + delta - sigma(delta)}``
    and each ``h`` product is realised by adding horizontal strips to ``rho``.
    """
    from itertools import permutations

    mu, rho, nu = as_partition(mu), as_partition(rho), as_partition(nu)
    if mu.size != rho.size + nu.size or not mu.contains(rho):
        return 0
    n = len(nu)
    total = 0
    for perm in permutations(range(n)):
        sizes = [nu[i] - i + perm[i] for i in range(n)]
        if any(s < 0 for s in sizes):
            continue
        total += _permutation_sign(perm) * _pieri_chain(rho, sizes).get(mu, 0)
    return total


def skew_schur_via_lr(mu, rho) -> SymFun:
    mu, rho = as_partition(mu), as_partition(rho)
    if not mu.contains(rho):
        return SymFun()
    acc = SymFun()
    for nu in enumerate_partitions(mu.size - rho.size):
        c = lr_coefficient(mu, rho, nu)
        if c:
            acc = acc + schur_in_p(nu) * c
    return acc


def to_schur_basis(f: SymFun) -> dict[Partition, object]:
    """Schur expansion of ``f`` using ``p_lambda = sum_mu chi_mu(lambda) s_mu``."""
    out: dict[Partition, object] = {}
    for lam, c in f.terms.items():
        for mu in enumerate_partitions(lam.size):
            chi = mn_character(mu, lam)
            if chi:
                out[mu] = out.get(mu, 0) + c * chi
    return {mu: c for mu, c in out.items() if c}


# ---------------------------------------------------------------------------
# graded exp / log


def _graded_pieces(f: SymFun, D: int) -> list[SymFun]:
    pieces = [dict() for _ in range(D + 1)]
    for mu, c in f.terms.items():
        if mu.size <= D:
            pieces[mu.size][mu] = c
    return [SymFun(p) for p in pieces]


def graded_exp(g: SymFun, D: int) -> SymFun:
    """``exp(g)`` through degree D; g must have zero constant term."""
    if g.constant_term():
        raise ValueError("graded_exp needs zero constant term")
    gs = _graded_pieces(g, D)
    es = [SymFun.one()] + [SymFun() for _ in range(D)]
    for d in range(1, D + 1):
        acc = SymFun()
        for k in range(1, d + 1):
            if gs[k] and es[d - k]:
                acc = acc + multiply(gs[k], es[d - k]) * k
        es[d] = acc * Fraction(1, d)
    total = SymFun()
    for e in es:
        total = total + e
    return total


def graded_log(f: SymFun, D: int) -> SymFun:
    """``log(f)`` through degree D; f must have constant term exactly 1."""
    if f.constant_term() != 1:
        raise ValueError("graded_log needs constant term 1")
    fs = _graded_pieces(f, D)
    ls = [SymFun() for _ in range(D + 1)]
    for d in range(1, D + 1):
        acc = fs[d] * d
        for k in range(1, d):
            if ls[k] and fs[d - k]:
                acc = acc - multiply(ls[k], fs[d - k]) * k
        ls[d] = acc * Fraction(1, d)
    total = SymFun()
    for piece in ls:
        total = total + piece
    return total


# ---------------------------------------------------------------------------
# alphabets and specialisation


class MissingImage(KeyError):
    pass


class Alphabet:
    """Rule ``n -> p_n(A)`` for a (possibly infinite) alphabet ``A``."""

    def __init__(self, name: str, rule: Callable[[int], object] | None = None,
                 overrides: Mapping[int, object] | None = None):
        self.name = name
        self.rule = rule
        self.overrides = dict(overrides or {})
        self._cache: dict[int, object] = {}

    def image(self, n: int):
        if n in self.overrides:
            return self.overrides[n]
        if n not in self._cache:
            if self.rule is None:
                raise MissingImage(f"alphabet {self.name!r} has no image for p_{n}")
            self._cache[n] = self.rule(n)
        return self._cache[n]

    __call__ = image

    def scaled(self, c, name: str | None = None) -> "Alphabet":
        """The alphabet ``c*A``: ``p_n -> c^n p_n(A)``."""
        return Alphabet(name or f"{c}*{self.name}", lambda n: (c ** n) * self.image(n))

    def lifted(self, root: int) -> "Alphabet":
        if root == 1:
            return self
        return Alphabet(f"{self.name}@root{root}", lambda n: _lift(self.image(n), root))

    def __repr__(self):
        return f"Alphabet({self.name!r})"


def _lift(x, root):
    return x.lift(root) if hasattr(x, "lift") else x


def _geometric(first_exp: int, step: int, sign: int = 1) -> Callable[[int], RatFunV]:
    """p_n of ``(sign*v^first_exp, sign*v^(first_exp+step), ...)``."""

    def rule(n: int) -> RatFunV:
        num = LaurentV.mono(first_exp * n, sign ** n)
        den = LaurentV({0: 1, step * n: -1})
        return RatFunV(num, den)

    return rule


def principal() -> Alphabet:
    """``(1, q, q^2, ...)``."""
    return Alphabet("1,q,q^2,...", _geometric(0, 2))


def principal_inverse() -> Alphabet:
    """``(1, q^-1, q^-2, ...)``."""
    return Alphabet("1,q^-1,q^-2,...", _geometric(0, -2))


def half_shifted_inverse() -> Alphabet:
    """``(q^-1/2, q^-3/2, ...)``."""
    return Alphabet("q^-1/2,q^-3/2,...", _geometric(-1, -2))


def minus_half_shifted() -> Alphabet:
    """``(-q^1/2, -q^3/2, ...)``, whose power sums are ``(-1)^(n+1)/[n]``."""
    return Alphabet("-q^1/2,-q^3/2,...", lambda n: RatFunV((-1) ** (n + 1), bracket(n)))


def specialize(f: SymFun, A: Alphabet):
    """Substitute ``p_n -> A(n)``."""
    total = 0
    cache: dict[int, object] = {}
    for mu, c in f.items():
        term = c
        for part in mu:
            if part not in cache:
                cache[part] = A.image(part)
            term = term * cache[part]
        total = total + term
    return total


def hook_content_spec(nu) -> RatFunV:
    """``s_nu(1, q, q^2, ...) = q^{n(nu)} / prod_cells (1 - q^hook)``."""
    nu = as_partition(nu)
    den = LaurentV.const(1)
    for _, hook, _ in hooks_and_contents(nu):
        den = den * LaurentV({0: 1, 2 * hook: -1})
    return RatFunV(LaurentV.mono(2 * n_weight(nu)), den)


def newton_e_to_p(e: list) -> list:
    """Power sums p_1..p_N from elementary symmetric functions e_0..e_N (e_0 = 1)."""
    N = len(e) - 1
    p = [None] * (N + 1)
    for n in range(1, N + 1):
        acc = e[n] * ((-1) ** (n - 1) * n)
        for i in range(1, n):
            if e[i]:
                acc = acc + e[i] * p[n - i] * ((-1) ** (i - 1))
        p[n] = acc
    return p

