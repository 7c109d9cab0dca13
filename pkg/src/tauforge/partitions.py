"""Integer partitions and the combinatorics attached to Young diagrams."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator


class Partition(tuple):
    """Weakly decreasing tuple of positive integers; ``Partition()`` is empty."""

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"parts {parts} are not weakly decreasing")
        if parts and parts[-1] <= 0:
            if parts[-1] < 0:
                raise ValueError(f"negative part in {parts}")
            parts = tuple(p for p in parts if p)
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """``mu_i`` with 1-based index, zero beyond the length."""
        return self[i - 1] if i <= len(self) else 0

    def multiplicities(self) -> Counter:
        return Counter(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def contains(self, other: "Partition") -> bool:
        return len(other) <= len(self) and all(a >= b for a, b in zip(self, other))

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def __repr__(self):
        return f"Partition({list(self)})"


EMPTY = Partition()


def as_partition(mu) -> Partition:
    return mu if isinstance(mu, Partition) else Partition(mu)


@lru_cache(maxsize=None)
def enumerate_partitions(d: int) -> tuple[Partition, ...]:
    """All partitions of ``d`` in reverse lexicographic order."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for p in range(min(remaining, cap), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(d, d, [])
    return tuple(out)


def partitions_up_to(d: int) -> list[Partition]:
    return [mu for k in range(d + 1) for mu in enumerate_partitions(k)]


def sort_key(mu: Partition) -> tuple:
    """Order by size, then reverse-lexicographically within a size."""
    return (sum(mu), tuple(-p for p in mu))


def kappa(mu) -> int:
    return sum(m * (m - 2 * i + 1) for i, m in enumerate(mu, start=1))


def z_factor(mu) -> int:
    z = 1
    for part, mult in Counter(mu).items():
        z *= part ** mult * factorial(mult)
    return z


def conjugate(mu) -> Partition:
    if not mu:
        return EMPTY
    return Partition(sum(1 for m in mu if m >= j) for j in range(1, mu[0] + 1))


def n_weight(mu) -> int:
    """``n(mu) = sum (i-1) mu_i``."""
    return sum((i - 1) * m for i, m in enumerate(mu, start=1))


def hooks_and_contents(mu) -> list[tuple[tuple[int, int], int, int]]:
    mu = as_partition(mu)
    conj = conjugate(mu)
    out = []
    for i, j in mu.cells():
        hook = mu[i - 1] - j + conj[j - 1] - i + 1
        out.append(((i, j), hook, j - i))
    return out


# Border strips via beta-sets: the partition is encoded by the positions
# mu_i - i of its first L beads (all lower positions are occupied).  Moving a
# bead by k positions adds or removes a border strip of size k whose height is
# the number of beads jumped over.


def _beads(mu, length: int) -> list[int]:
    return [(mu[i] if i < len(mu) else 0) - (i + 1) for i in range(length)]


def _from_beads(beads: list[int]) -> Partition:
    beads = sorted(beads, reverse=True)
    return Partition(b + i + 1 for i, b in enumerate(beads))


@lru_cache(maxsize=None)
def border_strips(mu, k: int) -> tuple[tuple[Partition, int], ...]:
    """Partitions ``nu`` with ``mu/nu`` a border strip of size ``k``, with heights."""
    if k < 1:
        raise ValueError("strip size must be positive")
    mu = as_partition(mu)
    length = len(mu) + k
    beads = _beads(mu, length)
    occupied = set(beads)
    floor = -length
    out = []
    for idx, b in enumerate(beads):
        target = b - k
        if target < floor or target in occupied:
            continue
        height = sum(1 for c in beads if target < c < b)
        new = beads[:idx] + [target] + beads[idx + 1:]
        out.append((_from_beads(new), height))
    out.sort(key=lambda item: sort_key(item[0]))
    return tuple(out)


@lru_cache(maxsize=None)
def add_border_strips(mu, k: int) -> tuple[tuple[Partition, int], ...]:
    """Partitions ``lam`` with ``lam/mu`` a border strip of size ``k``, with heights."""
    if k < 1:
        raise ValueError("strip size must be positive")
    mu = as_partition(mu)
    length = len(mu) + k
    beads = _beads(mu, length)
    occupied = set(beads)
    out = []
    for idx, b in enumerate(beads):
        target = b + k
        if target in occupied:
            continue
        height = sum(1 for c in beads if b < c < target)
        new = beads[:idx] + [target] + beads[idx + 1:]
        out.append((_from_beads(new), height))
    out.sort(key=lambda item: sort_key(item[0]))
    return tuple(out)


def intersection(mu, nu) -> Partition:
    return Partition(min(a, b) for a, b in zip(mu, nu))


def subpartitions(mu) -> list[Partition]:
    """Every partition whose diagram lies inside that of ``mu``."""
    mu = as_partition(mu)
    out: list[Partition] = []

    def rec(i: int, cap: int, prefix: list[int]):
        out.append(Partition(prefix))
        if i >= len(mu):
            return
        for p in range(min(cap, mu[i]), 0, -1):
            prefix.append(p)
            rec(i + 1, p, prefix)
            prefix.pop()

    rec(0, mu[0] if mu else 0, [])
    out.sort(key=sort_key)
    return out


def partition_count(d: int) -> int:
    """p(d) from Euler's pentagonal recurrence (independent of enumeration)."""
    p = [1] + [0] * d
    for n in range(1, d + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[d]


def to_json(mu) -> list[int]:
    return list(mu)


def parse(text: str) -> Partition:
    """Parse ``"3,1"`` (or ``""`` for the empty partition)."""
    text = text.strip().strip("[]()")
    if not text:
        return EMPTY
    return Partition(sorted((int(t) for t in text.split(",") if t.strip()), reverse=True))
