"""Partitions, partition vectors and the small number theory around them.

A :class:`Partition` is a weakly decreasing tuple of positive integers and a
:class:`PartitionVector` is a fixed-length tuple of partitions, one per link
component.  Both are hashable and are used directly as series keys.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator

__all__ = [
    "Partition",
    "PartitionVector",
    "enumerate_partitions",
    "partition_count",
    "enumerate_vectors",
    "z_factor",
    "scale",
    "divides",
    "quotient",
    "moebius",
    "union_concat",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive, got {parts}")
        return super().__new__(cls, sorted(parts, reverse=True))

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self))

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


class PartitionVector(tuple):
    """Tuple of L partitions; the position is the link component index."""

    __slots__ = ()

    def __new__(cls, components: Iterable[Iterable[int]]):
        comps = tuple(c if isinstance(c, Partition) else Partition(c) for c in components)
        if not comps:
            raise ValueError("a partition vector needs at least one component")
        return super().__new__(cls, comps)

    @classmethod
    def zero(cls, L: int) -> "PartitionVector":
        return cls([Partition()] * L)

    @property
    def L(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(c.degree for c in self)

    def is_zero(self) -> bool:
        return all(len(c) == 0 for c in self)

    def sort_key(self) -> tuple:
        return (self.degree, tuple(c.degree for c in self), tuple(tuple(-p for p in c) for c in self))

    def __repr__(self) -> str:
        return f"PartitionVector({[list(c) for c in self]})"


def _as_vector(mu) -> PartitionVector:
    if isinstance(mu, PartitionVector):
        return mu
    if isinstance(mu, Partition):
        return PartitionVector([mu])
    return PartitionVector(mu)


def _partitions_bounded(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _partitions_bounded(n, n))


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order.

    >>> [list(p) for p in enumerate_partitions(3)]
    [[3], [2, 1], [1, 1, 1]]
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_enumerate(n))


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) via Euler's pentagonal number recursion."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def _compositions(total: int, L: int) -> Iterator[tuple[int, ...]]:
    if L == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, L - 1):
            yield (first,) + rest


def enumerate_vectors(L: int, max_degree: int, include_zero: bool = True) -> list[PartitionVector]:
    """All partition vectors with L components and total degree <= max_degree."""
    out = []
    for total in range(0 if include_zero else 1, max_degree + 1):
        for sizes in _compositions(total, L):
            stack: list[list[Partition]] = [[]]
            for s in sizes:
                stack = [pre + [p] for pre in stack for p in _enumerate(s)]
            out.extend(PartitionVector(v) for v in stack)
    return out


def z_factor(mu) -> int:
    """Order of the centralizer of a permutation of cycle type ``mu``.

    Accepts a partition or a partition vector (product over components).
    """
    if isinstance(mu, PartitionVector):
        return prod(z_factor(c) for c in mu)
    return prod(j**m * factorial(m) for j, m in Counter(mu).items())


def scale(mu, d: int):
    """Multiply every part by ``d``."""
    if d < 1:
        raise ValueError("scale factor must be positive")
    if isinstance(mu, PartitionVector):
        return PartitionVector([Partition(p * d for p in c) for c in mu])
    return Partition(p * d for p in mu)


def divides(k: int, mu) -> bool:
    if isinstance(mu, PartitionVector):
        return all(divides(k, c) for c in mu)
    return all(p % k == 0 for p in mu)


def quotient(mu, k: int):
    if not divides(k, mu):
        raise ValueError(f"{k} does not divide every part of {mu!r}")
    if isinstance(mu, PartitionVector):
        return PartitionVector([Partition(p // k for p in c) for c in mu])
    return Partition(p // k for p in mu)


def common_divisors(mu) -> list[int]:
    """All k >= 1 dividing every part of ``mu`` (only k=1 for the zero vector)."""
    parts = [p for c in _as_vector(mu) for p in c]
    if not parts:
        return [1]
    return [k for k in range(1, min(parts) + 1) if all(p % k == 0 for p in parts)]


@lru_cache(maxsize=None)
def moebius(k: int) -> int:
    if k < 1:
        raise ValueError("moebius is defined for k >= 1")
    result, n, p = 1, k, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def union_concat(mu, nu):
    if isinstance(mu, PartitionVector):
        if len(mu) != len(nu):
            raise ValueError("partition vectors of different length")
        return PartitionVector([Partition(a + b) for a, b in zip(mu, nu)])
    return Partition(tuple(mu) + tuple(nu))
