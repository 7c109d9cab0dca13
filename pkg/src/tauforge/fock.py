"""Truncated charged free-fermion Fock space.

Basis states are ``|mu; n>``: charge ``n`` and a partition ``mu``.  In the
Maya picture the occupied half-integer sites are ``mu_i - i + 1/2 + n``.
``psi^+_r`` creates the site ``-r`` and ``psi^-_r`` empties the site ``r``,
each with sign ``(-1)^(number of occupied sites above it)``.  With this
choice ``alpha_{-m}`` adds border strips with sign ``(-1)^height`` and
``<mu|Y_-(x)|nu> = s_{mu/nu}(x)``.

Energies used for truncation are relative to the charge vacuum: the state
``|mu; n>`` has energy ``|mu|``.  The energy operator H itself has eigenvalue
``|mu| + n^2/2``.

Every :class:`FockVector` carries a guarantee describing which of its
coefficients are exact; see :class:`FockVector` for the fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .partitions import (
    EMPTY,
    Partition,
    add_border_strips,
    as_partition,
    border_strips,
    partitions_up_to,
    sort_key,
)
from .scalars import QuadraticNumber, RegimeError, q_power
from .symfun import Alphabet

INF = math.inf


class InsufficientCutoff(RuntimeError):
    pass


def _truncate(c, degree):
    if degree is None:
        return c
    trunc = getattr(c, "truncate", None)
    return trunc(degree) if trunc is not None else c


class FockVector:
    """Finite combination of basis states of one charge sector.

    Guarantee fields:

    ``cutoff``
        no state of energy above it is ever stored.
    ``exact_energy``
        stored states with energy up to this value are exact.
    ``complete``
        nothing nonzero was ever dropped; the vector is exact everywhere.
    ``degree_shift``
        true coefficients at energy e have formal degree >= e - degree_shift
        (``inf``: no such bound).
    ``error_base``
        any error in a stored coefficient at energy e has formal degree
        >= error_base - e (``inf``: no errors).
    """

    __slots__ = ("charge", "coeffs", "cutoff", "exact_energy", "complete",
                 "degree_shift", "error_base")

    def __init__(self, charge: int, coeffs: dict | None = None, cutoff: int = 10, *,
                 exact_energy=None, complete: bool = True, degree_shift=0, error_base=INF):
        self.charge = charge
        self.cutoff = cutoff
        self.coeffs: dict[Partition, object] = {}
        for mu, c in (coeffs or {}).items():
            mu = as_partition(mu)
            if mu.size > cutoff:
                raise ValueError(f"state {list(mu)} is above the cutoff {cutoff}")
            if c:
                self.coeffs[mu] = c
        self.exact_energy = cutoff if exact_energy is None else exact_energy
        self.complete = complete
        self.degree_shift = degree_shift
        self.error_base = error_base

    @classmethod
    def basis(cls, mu=EMPTY, charge: int = 0, cutoff: int = 10, coeff=Fraction(1)) -> "FockVector":
        mu = as_partition(mu)
        return cls(charge, {mu: coeff}, cutoff, degree_shift=mu.size)

    @classmethod
    def vacuum(cls, charge: int = 0, cutoff: int = 10) -> "FockVector":
        return cls.basis(EMPTY, charge, cutoff)

    def _derived(self, charge=None, coeffs=None, **changes) -> "FockVector":
        out = FockVector.__new__(FockVector)
        out.charge = self.charge if charge is None else charge
        out.coeffs = {mu: c for mu, c in (coeffs if coeffs is not None else self.coeffs).items() if c}
        out.cutoff = self.cutoff
        out.exact_energy = changes.get("exact_energy", self.exact_energy)
        out.complete = changes.get("complete", self.complete)
        out.degree_shift = changes.get("degree_shift", self.degree_shift)
        out.error_base = changes.get("error_base", self.error_base)
        return out

    def __bool__(self):
        return bool(self.coeffs)

    def coefficient(self, mu=EMPTY):
        return self.coeffs.get(as_partition(mu), 0)

    def items(self) -> list[tuple[Partition, object]]:
        return sorted(self.coeffs.items(), key=lambda kv: sort_key(kv[0]))

    def is_exact_at(self, mu, degree=None) -> bool:
        e = as_partition(mu).size
        if e > self.cutoff:
            return False
        if self.complete or e <= self.exact_energy:
            return True
        return degree is not None and self.error_base - e > degree

    def _check_compatible(self, other: "FockVector"):
        if self.charge != other.charge:
            raise ValueError("cannot add vectors of different charge")

    def __add__(self, other: "FockVector") -> "FockVector":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            out[mu] = out[mu] + c if mu in out else c
        res = self._derived(coeffs=out,
                            exact_energy=min(self.exact_energy, other.exact_energy),
                            complete=self.complete and other.complete,
                            degree_shift=max(self.degree_shift, other.degree_shift),
                            error_base=min(self.error_base, other.error_base))
        res.cutoff = min(self.cutoff, other.cutoff)
        return res

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FockVector":
        return self._derived(coeffs={mu: x * c for mu, x in self.coeffs.items()})

    def map_coeffs(self, f: Callable) -> "FockVector":
        return self._derived(coeffs={mu: f(x) for mu, x in self.coeffs.items()})

    def dump(self) -> str:
        """One line per state, ``charge n | [parts] | coefficient``."""
        return "\n".join(f"charge {self.charge} | {list(mu)} | {c}" for mu, c in self.items())

    def __repr__(self):
        return f"FockVector(charge={self.charge}, cutoff={self.cutoff}, states={len(self.coeffs)})"


# ---------------------------------------------------------------------------
# guarantee bookkeeping


def _after_raise(v: FockVector, coeffs, dropped: bool, energy_gain, formal: bool) -> dict:
    shift = v.degree_shift if formal else v.degree_shift + energy_gain
    return dict(coeffs=coeffs, complete=v.complete and not dropped, degree_shift=shift)


def _after_lower(v: FockVector, coeffs, energy_loss, formal: bool) -> dict:
    if v.complete:
        return dict(coeffs=coeffs)
    E, c, g = v.cutoff, v.degree_shift, v.error_base
    exact = v.exact_energy - energy_loss
    # errors already present
    if formal:
        kept = g
    elif energy_loss == INF:
        kept = g - E
    else:
        kept = g - energy_loss
    # contributions of states that were dropped above the cutoff
    fresh = 2 * (E + 1) - c if formal else E + 1 - c
    return dict(coeffs=coeffs, exact_energy=exact, error_base=min(kept, fresh))


# ---------------------------------------------------------------------------
# Maya diagrams


def _maya(mu: Partition, n: int, depth: int) -> list[int]:
    """Shifted sites ``s = k - 1/2`` of the first ``depth`` particles, descending."""
    return [(mu[i] if i < len(mu) else 0) - (i + 1) + n for i in range(depth)]


def _from_maya(sites: list[int], n: int) -> Partition:
    sites = sorted(sites, reverse=True)
    return Partition(s + i + 1 - n for i, s in enumerate(sites))


def _half(r) -> Fraction:
    r = Fraction(r)
    if r.denominator != 2:
        raise ValueError(f"fermion index {r} is not a half-integer")
    return r


def psi_on_state(sign: int, r, mu: Partition, n: int) -> tuple[int, Partition, int] | None:
    """``psi^{sign}_r |mu; n>`` as ``(coefficient sign, new partition, new charge)``."""
    r = _half(r)
    site = int(-r - Fraction(1, 2)) if sign > 0 else int(r - Fraction(1, 2))
    depth = len(mu) + abs(n) + abs(site) + 2
    sites = _maya(mu, n, depth)
    occupied = set(sites)
    above = sum(1 for s in sites if s > site)
    fermion_sign = -1 if above % 2 else 1
    if sign > 0:
        if site in occupied:
            return None
        return fermion_sign, _from_maya(sites + [site], n + 1), n + 1
    if site not in occupied:
        return None
    sites.remove(site)
    return fermion_sign, _from_maya(sites, n - 1), n - 1


def apply_psi(r, sign: int, v: FockVector) -> FockVector:
    """``psi^+_r`` (sign=+1) or ``psi^-_r`` (sign=-1) applied to v."""
    r = _half(r)
    n = v.charge
    delta = int(-r - n - Fraction(1, 2)) if sign > 0 else int(-r + n - Fraction(1, 2))
    out: dict[Partition, object] = {}
    dropped = False
    for mu, c in v.coeffs.items():
        res = psi_on_state(sign, r, mu, n)
        if res is None:
            continue
        s, new, _ = res
        if new.size > v.cutoff:
            dropped = True
            continue
        out[new] = out[new] + c * s if new in out else c * s
    new_charge = n + (1 if sign > 0 else -1)
    if delta >= 0:
        fields_ = _after_raise(v, out, dropped, delta, formal=False)
    else:
        fields_ = _after_lower(v, out, -delta, formal=False)
    return v._derived(charge=new_charge, **fields_)


def energy_eigenvalue(mu, n: int = 0) -> Fraction:
    """Eigenvalue of H computed from the occupied sites (``|mu| + n^2/2``)."""
    return _site_sum(as_partition(mu), n, lambda k: k)


def casimir_eigenvalue(mu, n: int = 0) -> Fraction:
    """Eigenvalue of K computed from the occupied sites."""
    return _site_sum(as_partition(mu), n, lambda k: k * k / 2)


def charge_eigenvalue(mu, n: int = 0) -> int:
    return int(_site_sum(as_partition(mu), n, lambda k: 1))


def _site_sum(mu: Partition, n: int, f) -> Fraction:
    # sum over occupied positive sites minus sum over empty negative sites
    depth = len(mu) + abs(n) + 1
    sites = [Fraction(2 * s + 1, 2) for s in _maya(mu, n, depth)]
    tail_top = Fraction(2 * (n - depth - 1) + 1, 2)
    occupied = set(sites)
    total = Fraction(0)
    for k in sites:
        if k > 0:
            total += f(k)
    k = tail_top + 1
    while k < 0:
        if k not in occupied:
            total -= f(k)
        k += 1
    return total


# ---------------------------------------------------------------------------
# bosonic modes


def apply_alpha(m: int, v: FockVector) -> FockVector:
    """``alpha_m`` by border strips: ``m < 0`` adds, ``m > 0`` removes."""
    if m == 0:
        raise ValueError("alpha_0 is the charge operator; use charge_eigenvalue")
    out: dict[Partition, object] = {}
    dropped = False
    k = abs(m)
    for mu, c in v.coeffs.items():
        strips = add_border_strips(mu, k) if m < 0 else border_strips(mu, k)
        for new, height in strips:
            if new.size > v.cutoff:
                dropped = True
                continue
            val = c if height % 2 == 0 else -c
            out[new] = out[new] + val if new in out else val
    if m < 0:
        return v._derived(**_after_raise(v, out, dropped, k, False))
    return v._derived(**_after_lower(v, out, k, False))


def apply_alpha_fermionic(m: int, v: FockVector) -> FockVector:
    """``alpha_m = sum_r psi^+_r psi^-_{m-r}`` evaluated through the psi operators.

    Independent of :func:`apply_alpha`; used to cross-check its signs.
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    n = v.charge
    reach = v.cutoff + abs(n) + abs(m) + max((len(mu) for mu in v.coeffs), default=0) + 2
    wide = v._derived()
    wide.cutoff = v.cutoff + reach + abs(m) + 4
    wide.exact_energy = wide.cutoff
    total = FockVector(n, {}, v.cutoff)
    for two_r in range(-2 * reach - 1, 2 * reach + 2, 2):
        r = Fraction(two_r, 2)
        step = apply_psi(r, +1, apply_psi(m - r, -1, wide))
        for mu, c in step.coeffs.items():
            if mu.size <= v.cutoff:
                total.coeffs[mu] = total.coeffs[mu] + c if mu in total.coeffs else c
    total.coeffs = {mu: c for mu, c in total.coeffs.items() if c}
    return total


def _t_value(t, n: int):
    if callable(t):
        return t(n)
    return t[n - 1] if n <= len(t) else 0


def apply_gamma(sign: int, t, v: FockVector, degree: int | None = None,
                graded: bool = False) -> FockVector:
    """``Gamma_+(t)`` (sign=+1, lowering) or ``Gamma_-(t)`` (sign=-1, raising).

    ``t`` is a sequence ``[t_1, t_2, ...]`` or a callable ``n -> t_n``.  With
    ``graded=True`` each ``t_n`` has degree at least n (formal variables, or
    the v-adic valuation of an alphabet such as ``(-q^1/2, -q^3/2, ...)``).
    Coefficients that support ``truncate`` are cut at total degree ``degree``.
    """
    if not v.coeffs:
        return v._derived()
    energies = [mu.size for mu in v.coeffs]
    top = v.cutoff - min(energies) if sign < 0 else max(energies)
    truncating = graded and degree is not None
    if truncating and v.degree_shift != INF:
        # higher terms only produce coefficients beyond the truncation degree
        needed = degree + max(0, v.degree_shift)
        beyond = sign < 0 and needed > top
        top = min(top, needed)
    else:
        # an infinite exponential always has terms past the cutoff
        beyond = sign < 0
    tvals = {n: _t_value(t, n) for n in range(1, top + 1)}
    pieces: list[dict[Partition, object]] = [dict(v.coeffs)]
    dropped = beyond and any(_t_value(t, n) for n in range(1, top + 2))
    total = dict(v.coeffs)
    for d in range(1, top + 1):
        acc: dict[Partition, object] = {}
        for n in range(1, d + 1):
            tn = tvals[n]
            src = pieces[d - n]
            if not tn or not src:
                continue
            factor = tn * n
            for mu, c in src.items():
                strips = add_border_strips(mu, n) if sign < 0 else border_strips(mu, n)
                for new, height in strips:
                    if new.size > v.cutoff:
                        dropped = True
                        continue
                    val = _truncate(c * factor, degree)
                    if height % 2:
                        val = -val
                    acc[new] = acc[new] + val if new in acc else val
        piece = {mu: c * Fraction(1, d) for mu, c in acc.items() if c}
        pieces.append(piece)
        for mu, c in piece.items():
            total[mu] = total[mu] + c if mu in total else c
    if sign < 0:
        return v._derived(**_after_raise(v, total, dropped, INF, graded))
    # with truncation, sources more than ``degree`` above only feed discarded terms
    loss = degree if truncating else INF
    return v._derived(**_after_lower(v, total, loss, graded))


def apply_H(v: FockVector) -> FockVector:
    return v._derived(coeffs={mu: c * energy_eigenvalue(mu, v.charge) for mu, c in v.coeffs.items()})


def apply_K(v: FockVector) -> FockVector:
    return v._derived(coeffs={mu: c * casimir_eigenvalue(mu, v.charge) for mu, c in v.coeffs.items()})


def apply_charge(v: FockVector) -> FockVector:
    return v._derived(coeffs={mu: c * charge_eigenvalue(mu, v.charge) for mu, c in v.coeffs.items()})


def apply_R(k: int, v: FockVector) -> FockVector:
    """Translation ``R^k: |mu; n> -> |mu; n+k>``."""
    return v._derived(charge=v.charge + k)


def q_scalar(a, root: int = 1, q=None):
    """``q^a`` either as a monomial in ``q^(1/(2 root))`` or evaluated at ``q``."""
    if q is None:
        return q_power(a, root)
    a2 = Fraction(a) * 2
    if a2.denominator != 1:
        raise RegimeError(f"q^{a} is not a power of q^(1/2)")
    from .scalars import _rational_sqrt

    q = Fraction(q)
    rt = _rational_sqrt(q)
    base = rt if rt is not None else QuadraticNumber(0, 1, q)
    val = base ** int(a2)
    if isinstance(val, QuadraticNumber) and val.b == 0:
        return val.a
    return val


def apply_qK(c, v: FockVector, root: int = 1, q=None) -> FockVector:
    """``q^{cK}``; raises :class:`RegimeError` if an eigenvalue needs a finer root."""
    c = Fraction(c)
    return v._derived(coeffs={mu: x * q_scalar(c * casimir_eigenvalue(mu, v.charge), root, q)
                              for mu, x in v.coeffs.items()})


def apply_qH(c, v: FockVector, root: int = 1, q=None) -> FockVector:
    c = Fraction(c)
    return v._derived(coeffs={mu: x * q_scalar(c * energy_eigenvalue(mu, v.charge), root, q)
                              for mu, x in v.coeffs.items()})


# ---------------------------------------------------------------------------
# operator words


@dataclass(frozen=True)
class Psi:
    sign: int
    r: Fraction

    def apply(self, v, degree=None):
        return apply_psi(self.r, self.sign, v)

    @property
    def charge(self):
        return self.sign


@dataclass(frozen=True)
class Alpha:
    m: int
    charge = 0

    def apply(self, v, degree=None):
        return apply_alpha(self.m, v)


@dataclass(frozen=True)
class H:
    charge = 0

    def apply(self, v, degree=None):
        return apply_H(v)


@dataclass(frozen=True)
class K:
    charge = 0

    def apply(self, v, degree=None):
        return apply_K(v)


@dataclass(frozen=True)
class R:
    k: int = 1

    @property
    def charge(self):
        return self.k

    def apply(self, v, degree=None):
        return apply_R(self.k, v)


@dataclass(frozen=True)
class QK:
    """``q^{c K}``; ``root`` selects the variable ``q^(1/(2 root))``, ``q`` a numeric value."""

    c: Fraction
    root: int = 1
    q: Fraction | None = None
    charge = 0

    def apply(self, v, degree=None):
        return apply_qK(self.c, v, self.root, self.q)


@dataclass(frozen=True)
class Gamma:
    """``Gamma_+(t)`` (sign=+1) or ``Gamma_-(t)`` (sign=-1)."""

    sign: int
    t: object = field(compare=False)
    graded: bool = False
    name: str = ""
    charge = 0

    def apply(self, v, degree=None):
        return apply_gamma(self.sign, self.t, v, degree, self.graded)


def Y(sign: int, alphabet: Alphabet, root: int = 1, q=None, graded: bool = False) -> Gamma:
    """``Y_pm(A) = Gamma_pm(t)`` with ``t_n = p_n(A)/n``.

    ``graded`` declares that ``p_n(A)`` has v-adic valuation at least n.
    """
    A = alphabet.lifted(root)

    def t(n: int):
        val = A.image(n) * Fraction(1, n)
        if q is not None:
            from .scalars import specialize_q

            val = specialize_q(val, q)
        return val

    return Gamma(sign, t, graded=graded, name=f"Y{'+' if sign > 0 else '-'}({alphabet.name})")


@dataclass
class StructuredZero:
    """Vacuum expectation value that vanishes because charges do not match."""

    reason: str
    charge_in: int
    charge_out: int

    def __bool__(self):
        return False

    def __eq__(self, other):
        return other == 0 or isinstance(other, StructuredZero)


def apply_word(word: Sequence, v: FockVector, degree: int | None = None) -> FockVector:
    for op in reversed(list(word)):
        v = op.apply(v, degree)
    return v


def vev(word: Sequence, n: int = 0, degree: int | None = None, cutoff: int | None = None,
        bra=EMPTY, certify: int | None = None):
    """``<bra; n| word |0; n>`` evaluated right to left.

    Coefficients are truncated to total degree ``degree``.  The result must
    be certified exact through degree ``certify`` (default ``degree``) by the
    guarantee of the final vector, otherwise :class:`InsufficientCutoff`.
    """
    word = list(word)
    total_charge = sum(getattr(op, "charge", 0) for op in word)
    if total_charge:
        return StructuredZero("word has nonzero charge", n, n + total_charge)
    if cutoff is None:
        cutoff = degree if degree is not None else 10
    return matrix_element(word, bra, EMPTY, n, cutoff, degree, certify)


def matrix_element(word: Sequence, bra, ket, n: int = 0, cutoff: int = 10, degree=None,
                   certify=None):
    """``<bra; n + charge| word |ket; n>`` on the truncated space, certified."""
    v = apply_word(word, FockVector.basis(ket, n, cutoff), degree)
    bra = as_partition(bra)
    level = degree if certify is None else certify
    if not v.is_exact_at(bra, level):
        raise InsufficientCutoff(
            f"cutoff {cutoff} does not certify <{list(bra)}; {v.charge}| ... |{list(ket)}; {n}>"
            + (f" through degree {level}" if level is not None else ""))
    return _truncate(v.coefficient(bra), degree)


# ---------------------------------------------------------------------------
# fermionic bilinear condition


@dataclass
class HirotaVectorReport:
    checked_pairs: int
    window: int
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.residuals


def hirota_vector_check(v: FockVector, window: int | None = None) -> HirotaVectorReport:
    """Components of ``sum_r psi^+_r v (x) psi^-_{-r} v`` on pairs with energy sum <= window.

    Energies here are eigenvalues of H (charge +-1 states carry an extra 1/2),
    so a component only involves source states of energy at most the window.
    """
    if v.charge != 0:
        raise ValueError("the bilinear condition is stated for charge-0 vectors")
    E = v.cutoff if window is None else window
    if E > v.exact_energy and not v.complete:
        raise InsufficientCutoff(f"vector exact only through energy {v.exact_energy}")
    acc: dict[tuple[Partition, Partition], object] = {}
    wide = v._derived()
    wide.cutoff = E + 2
    for two_r in range(-2 * E - 3, 2 * E + 4, 2):
        r = Fraction(two_r, 2)
        plus = apply_psi(r, +1, wide)
        minus = apply_psi(-r, -1, wide)
        if not plus or not minus:
            continue
        for a, ca in plus.coeffs.items():
            ea = energy_eigenvalue(a, 1)
            for b, cb in minus.coeffs.items():
                if ea + energy_eigenvalue(b, -1) > E:
                    continue
                key = (a, b)
                val = ca * cb
                acc[key] = acc[key] + val if key in acc else val
    pairs = 0
    for a in partitions_up_to(E):
        for b in partitions_up_to(E):
            if energy_eigenvalue(a, 1) + energy_eigenvalue(b, -1) <= E:
                pairs += 1
    residuals = {k: c for k, c in acc.items() if c}
    return HirotaVectorReport(pairs, E, residuals)
