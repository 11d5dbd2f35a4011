"""Partitioned orders, their rewriting into block sequences, and schedule equivalences.

A block-parallel update schedule is a *partitioned order*: an unordered set
of ordered o-blocks covering the automata ``0..n-1``.  At substep ``t`` every
o-block contributes its element at position ``t mod len(o-block)``; one full
step consists of ``lcm`` of the o-block lengths substeps.  ``phi`` spells a
schedule out as that sequence of update blocks.

Two equivalences matter:

* ``equiv0``: identical block sequences -- identical dynamics for every network.
* ``equiv_star``: block sequences equal up to a circular shift -- isomorphic
  limit dynamics for every network.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ResourceCapError, ScheduleFormatError
from .partitions import Partition

#: Hard ceiling on materialised substep counts; schedules built from prime
#: o-block lengths can expand to astronomically long block sequences.
DEFAULT_BLOCK_CAP = 10**6


def _oblock_key(block: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (len(block), block)


class PartitionedOrder:
    """A block-parallel update schedule (set of ordered o-blocks).

    O-blocks are kept in a canonical outer order (by length, then content)
    so that equal schedules compare and hash equal; the inner order of each
    o-block is semantic and preserved exactly.  Instances are immutable.
    """

    __slots__ = ("n", "oblocks")

    def __init__(self, n: int, oblocks: Iterable[Iterable[int]]):
        blocks = tuple(tuple(block) for block in oblocks)
        seen = set()
        for block in blocks:
            if not block:
                raise ValueError("empty o-block")
            for i in block:
                if not isinstance(i, int) or isinstance(i, bool):
                    raise ValueError(f"automaton index {i!r} is not an integer")
                if not 0 <= i < n:
                    raise ValueError(f"automaton {i} out of range for n={n}")
                if i in seen:
                    raise ValueError(f"automaton {i} appears more than once")
                seen.add(i)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise ValueError(f"automata missing from schedule: {missing}")
        self.n = n
        self.oblocks = tuple(sorted(blocks, key=_oblock_key))

    @classmethod
    def _from_rows(cls, n: int, rows: tuple[tuple[int, ...], ...]) -> "PartitionedOrder":
        # Fast path for enumerators: rows are already a disjoint cover of 0..n-1.
        self = object.__new__(cls)
        self.n = n
        self.oblocks = tuple(sorted(rows, key=_oblock_key))
        return self

    @classmethod
    def parallel(cls, n: int) -> "PartitionedOrder":
        """The parallel schedule: every automaton in its own singleton o-block."""
        return cls._from_rows(n, tuple((i,) for i in range(n)))

    @property
    def s(self) -> int:
        """Number of o-blocks."""
        return len(self.oblocks)

    def lcm(self) -> int:
        """Number of substeps in one full step."""
        return math.lcm(*{len(block) for block in self.oblocks})

    def support(self) -> Partition:
        """The integer partition given by the o-block lengths."""
        return Partition.from_parts(len(block) for block in self.oblocks)

    def first_update_times(self) -> tuple[int, ...]:
        """Substep at which each automaton is first updated (its o-block position)."""
        times = [0] * self.n
        for block in self.oblocks:
            for pos, i in enumerate(block):
                times[i] = pos
        return tuple(times)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartitionedOrder):
            return NotImplemented
        return self.n == other.n and self.oblocks == other.oblocks

    def __hash__(self) -> int:
        return hash((self.n, self.oblocks))

    def __repr__(self) -> str:
        inner = ", ".join(repr(list(block)) for block in self.oblocks)
        return f"PartitionedOrder({self.n}, [{inner}])"

    def __reduce__(self):
        return (PartitionedOrder, (self.n, self.oblocks))


@dataclass(frozen=True)
class BlockSequence:
    """An ordered sequence of update blocks; each block is a sorted index tuple."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        normalised = []
        for block in self.blocks:
            block = tuple(sorted(block))
            if not block:
                raise ValueError("empty update block")
            if block[0] < 0 or block[-1] >= self.n:
                raise ValueError(f"block {block} out of range for n={self.n}")
            if len(set(block)) != len(block):
                raise ValueError(f"block {block} repeats an automaton")
            normalised.append(block)
        object.__setattr__(self, "blocks", tuple(normalised))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def length(self) -> int:
        return len(self.blocks)


def phi(mu: PartitionedOrder, cap: Optional[int] = DEFAULT_BLOCK_CAP) -> BlockSequence:
    """Rewrite a partitioned order into its substep block sequence.

    The result has ``lcm`` of the o-block lengths blocks, each of cardinality
    equal to the number of o-blocks.  Raises :class:`ResourceCapError` when
    that length exceeds ``cap`` (pass ``cap=None`` to force materialisation).
    """
    length = mu.lcm()
    if cap is not None and length > cap:
        raise ResourceCapError(
            f"phi would produce {length} blocks, above the cap of {cap}"
        )
    oblocks = mu.oblocks
    blocks = tuple(
        tuple(sorted(block[t % len(block)] for block in oblocks))
        for t in range(length)
    )
    return BlockSequence(mu.n, blocks)


@dataclass(frozen=True)
class MatrixRepresentation:
    """O-blocks grouped by length: one matrix per part size, rows are o-blocks."""

    n: int
    matrices: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]

    def matrix(self, j: int) -> tuple[tuple[int, ...], ...]:
        """Rows of the matrix with ``j`` columns (empty if no o-block has length j)."""
        for size, rows in self.matrices:
            if size == j:
                return rows
        return ()

    def part_sizes(self) -> tuple[int, ...]:
        return tuple(size for size, _ in self.matrices)


def matrix_repr(mu: PartitionedOrder) -> MatrixRepresentation:
    """Group the o-blocks of ``mu`` by length, canonical row order within a matrix."""
    groups: dict[int, list[tuple[int, ...]]] = {}
    for block in mu.oblocks:
        groups.setdefault(len(block), []).append(block)
    matrices = tuple((j, tuple(rows)) for j, rows in sorted(groups.items()))
    return MatrixRepresentation(mu.n, matrices)


def _require_same_n(mu: PartitionedOrder, mu2: PartitionedOrder) -> None:
    if mu.n != mu2.n:
        raise ValueError(f"schedules act on different sizes: {mu.n} vs {mu2.n}")


def equiv0(mu: PartitionedOrder, mu2: PartitionedOrder,
           cap: Optional[int] = DEFAULT_BLOCK_CAP) -> bool:
    """Dynamical equality: do the two schedules have identical block sequences?"""
    _require_same_n(mu, mu2)
    if mu.lcm() != mu2.lcm():
        return False
    return phi(mu, cap=cap).blocks == phi(mu2, cap=cap).blocks


def shift_between(blocks: tuple[tuple[int, ...], ...],
                  blocks2: tuple[tuple[int, ...], ...]) -> Optional[int]:
    """Smallest ``i`` with ``blocks == sigma^i(blocks2)``, or None.

    ``sigma^i`` moves the element at position 0 towards position ``i``, so
    ``sigma^i(b)[k] == b[(k - i) % len(b)]``.
    """
    length = len(blocks)
    if length != len(blocks2):
        return None
    first = blocks[0]
    for i in range(length):
        if blocks2[-i % length] != first:
            continue
        if all(blocks[k] == blocks2[(k - i) % length] for k in range(1, length)):
            return i
    return None


def equiv_star(mu: PartitionedOrder, mu2: PartitionedOrder,
               cap: Optional[int] = DEFAULT_BLOCK_CAP) -> Optional[int]:
    """Limit isomorphism: smallest shift aligning the block sequences, or None.

    Shift 0 coincides with :func:`equiv0`.
    """
    _require_same_n(mu, mu2)
    if mu.lcm() != mu2.lcm():
        return None
    return shift_between(phi(mu, cap=cap).blocks, phi(mu2, cap=cap).blocks)


def is_bs_intersection(seq: BlockSequence) -> bool:
    """Is this block sequence both block-sequential and a rewritten partitioned order?

    True exactly when the blocks form an ordered partition of ``0..n-1``
    (pairwise disjoint, covering) and all blocks have the same cardinality.
    """
    sizes = {len(block) for block in seq.blocks}
    if len(sizes) != 1:
        return False
    seen: set[int] = set()
    for block in seq.blocks:
        for i in block:
            if i in seen:
                return False
            seen.add(i)
    return len(seen) == seq.n


def parse_schedule(text: str, n: Optional[int] = None) -> PartitionedOrder:
    """Parse the schedule text format: a JSON array of arrays of automaton indices.

    Inner arrays are o-blocks whose order is significant; outer order is not.
    ``n`` defaults to one more than the largest index mentioned.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise ScheduleFormatError("schedule must be a non-empty array of o-blocks")
    seen: dict[int, tuple[int, int]] = {}
    for b, block in enumerate(data):
        if not isinstance(block, list):
            raise ScheduleFormatError(f"o-block {b} is not an array")
        if not block:
            raise ScheduleFormatError(f"o-block {b} is empty")
        for e, idx in enumerate(block):
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise ScheduleFormatError(
                    f"o-block {b}, entry {e}: {idx!r} is not an integer"
                )
            if idx < 0:
                raise ScheduleFormatError(f"o-block {b}, entry {e}: negative index {idx}")
            if n is not None and idx >= n:
                raise ScheduleFormatError(
                    f"o-block {b}, entry {e}: index {idx} out of range for n={n}"
                )
            if idx in seen:
                pb, pe = seen[idx]
                raise ScheduleFormatError(
                    f"o-block {b}, entry {e}: duplicate automaton {idx}"
                    f" (first seen in o-block {pb}, entry {pe})"
                )
            seen[idx] = (b, e)
    size = n if n is not None else 1 + max(seen)
    missing = sorted(set(range(size)) - set(seen))
    if missing:
        raise ScheduleFormatError(f"automata missing from schedule: {missing}")
    return PartitionedOrder._from_rows(size, tuple(tuple(block) for block in data))


def serialize_schedule(mu: PartitionedOrder) -> str:
    """Render a schedule in the text format, o-blocks in canonical order."""
    return json.dumps([list(block) for block in mu.oblocks], separators=(",", ":"))
