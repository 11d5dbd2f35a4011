"""Integer partitions (schedule supports) and prime bases for gadget schedules.

A partition of ``n`` describes the multiset of o-block lengths of a
block-parallel schedule on ``n`` automata.  The prime bases are used to
build schedules whose substep count is the product of distinct primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CrossCheckError


@dataclass(frozen=True)
class Partition:
    """An integer partition of ``n``, parts stored in descending order."""

    n: int
    parts: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"partition total must be positive, got {self.n}")
        if not self.parts:
            raise ValueError("a partition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive integers: {self.parts!r}")
        if sum(self.parts) != self.n:
            raise ValueError(f"parts {self.parts!r} do not sum to {self.n}")
        ordered = tuple(sorted(self.parts, reverse=True))
        if ordered != self.parts:
            object.__setattr__(self, "parts", ordered)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        parts = tuple(parts)
        return cls(sum(parts), parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the diagnostic form, e.g. ``"2+2+3"``."""
        try:
            parts = tuple(int(piece) for piece in text.split("+"))
        except ValueError as exc:
            raise ValueError(f"bad partition text {text!r}") from exc
        return cls.from_parts(parts)

    @property
    def d(self) -> int:
        """Largest part size."""
        return self.parts[0]

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        """Dense multiplicity table: entry ``j`` is m(j), for ``0 <= j <= d``.

        Entry 0 is always 0; inner entries may be 0 (a missing part size).
        """
        table = [0] * (self.d + 1)
        for p in self.parts:
            table[p] += 1
        return tuple(table)

    def m(self, j: int) -> int:
        """Multiplicity of part size ``j`` (0 outside ``1..d``)."""
        if 1 <= j <= self.d:
            return self.multiplicities[j]
        return 0

    def part_sizes(self) -> tuple[int, ...]:
        """Distinct part sizes present, descending."""
        return tuple(j for j in range(self.d, 0, -1) if self.multiplicities[j])

    def lcm(self) -> int:
        """Least common multiple of the distinct part sizes."""
        return math.lcm(*set(self.parts))

    def label(self) -> str:
        """Diagnostic form: parts ascending, joined by ``+``."""
        return "+".join(str(p) for p in sorted(self.parts))


def lcm_of(p: Partition) -> int:
    """Least common multiple of the part sizes with nonzero multiplicity."""
    return p.lcm()


def partitions_of(n: int) -> Iterator[Partition]:
    """Yield every integer partition of ``n`` exactly once.

    Order is descending-lexicographic on the (descending) part lists, so
    ``(n,)`` comes first and ``(1,)*n`` last.  For n=4:
    [4], [3,1], [2,2], [2,1,1], [1,1,1,1].
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    for parts in rec(n, n):
        yield Partition(n, parts)


@dataclass(frozen=True)
class PrimeGadgetBasis:
    """Distinct primes below ``n**2`` whose product exceeds ``2**n``.

    ``cumulative`` holds the running sums q_0 = 0, q_j = p_1 + ... + p_j;
    the gadget builders use q_j as o-block boundaries.
    """

    n: int
    primes: tuple[int, ...]
    cumulative: tuple[int, ...]

    def __post_init__(self):
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("primes must be strictly increasing")
        expected = [0]
        for p in self.primes:
            expected.append(expected[-1] + p)
        if tuple(expected) != self.cumulative:
            raise ValueError("cumulative sums do not match the prime list")

    @property
    def k(self) -> int:
        """Number of primes."""
        return len(self.primes)

    @property
    def total(self) -> int:
        """Sum of all primes (number of padding automata in a gadget)."""
        return self.cumulative[-1]

    def product(self) -> int:
        return math.prod(self.primes)


def sieve_primes_below(limit: int) -> list[int]:
    """All primes strictly below ``limit`` (sieve of Eratosthenes)."""
    if limit <= 2:
        return []
    composite = bytearray(limit)
    primes = []
    for p in range(2, limit):
        if composite[p]:
            continue
        primes.append(p)
        for q in range(p * p, limit, p):
            composite[q] = 1
    return primes


def prime_count_for(n: int) -> int:
    """How many of the smallest primes below ``n**2`` to take: floor(n^2 / (2 ln n))."""
    return int(n * n / (2.0 * math.log(n)))


def gadget_primes(n: int) -> PrimeGadgetBasis:
    """Prime basis for building schedules with more than ``2**n`` substeps.

    Takes the ``prime_count_for(n)`` smallest primes below ``n**2``; their
    product then lies strictly between ``2**n`` and ``2**(2*n**2)``, and every
    prime is below ``n**2``.  Deterministic for each ``n``.
    """
    if n < 2:
        raise ValueError(f"prime basis needs n >= 2, got {n}")
    available = sieve_primes_below(n * n)
    k = min(prime_count_for(n), len(available))
    chosen = tuple(available[:k])
    product = math.prod(chosen)
    if product <= 2**n:  # pragma: no cover - ruled out for all n >= 2
        raise CrossCheckError(
            f"prime product {product} for n={n} does not exceed 2**{n} (primes {chosen})"
        )
    cumulative = [0]
    for p in chosen:
        cumulative.append(cumulative[-1] + p)
    return PrimeGadgetBasis(n, chosen, tuple(cumulative))
