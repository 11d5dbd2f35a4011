"""Exact counts of schedule classes, with redundant formulas cross-checked.

Every count is a sum over the integer partitions of ``n`` (the possible
o-block length multisets).  Where two or more independent formulas exist for
the same quantity they are all evaluated and compared; a mismatch raises
:class:`CrossCheckError` because it can only mean an implementation bug.

All arithmetic is exact: Python integers throughout, ``Fraction`` for the
generating-function route.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import CrossCheckError
from .partitions import Partition, partitions_of


def _exact_div(a: int, b: int, what: str) -> int:
    q, r = divmod(a, b)
    if r:
        raise CrossCheckError(f"{what}: {a} is not divisible by {b}")
    return q


# ---------------------------------------------------------------------------
# Per-partition terms (exposed for diagnostics and enumeration tests)

def bs_term(p: Partition) -> int:
    """Ordered partitions of ``0..n-1`` whose block-size multiset is ``p``."""
    placements = factorial(p.n)
    for j in p.part_sizes():
        placements = _exact_div(placements, factorial(j) ** p.m(j), "bs placements")
    orderings = factorial(len(p.parts))
    for j in p.part_sizes():
        orderings = _exact_div(orderings, factorial(p.m(j)), "bs block orderings")
    return placements * orderings


def bp_term(p: Partition) -> int:
    """Partitioned orders supported by ``p``: n! over the part multiplicities."""
    result = factorial(p.n)
    for j in p.part_sizes():
        result = _exact_div(result, factorial(p.m(j)), "bp term")
    return result


def bp_term_product(p: Partition) -> int:
    """Partitioned orders supported by ``p``, matrix-filling form.

    Fill one matrix per part size: choose its elements among those not yet
    placed, then arrange them in rows up to row permutation.
    """
    result = 1
    remaining = p.n
    for j in range(1, p.d + 1):
        m = p.m(j)
        if m == 0:
            continue
        take = j * m
        result *= comb(remaining, take) * _exact_div(
            factorial(take), factorial(m), "bp row arrangements"
        )
        remaining -= take
    return result


def bp0_term(p: Partition) -> int:
    """Schedule classes up to dynamical equality supported by ``p`` (direct form)."""
    result = factorial(p.n)
    for j in p.part_sizes():
        result = _exact_div(result, factorial(p.m(j)) ** j, "bp0 term")
    return result


def bp0_term_columns(p: Partition) -> int:
    """Same count, column-choice form: fill every matrix column by column."""
    result = 1
    remaining = p.n
    for j in range(1, p.d + 1):
        m = p.m(j)
        if m == 0:
            continue
        left = remaining
        for _ in range(j):
            result *= comb(left, m)
            left -= m
        remaining -= j * m
    return result


def bp0_term_matrices(p: Partition) -> int:
    """Same count, matrix-then-columns form: choose each matrix's elements,
    then split them into unordered columns."""
    result = 1
    remaining = p.n
    for j in range(1, p.d + 1):
        m = p.m(j)
        if m == 0:
            continue
        take = j * m
        ways = comb(remaining, take)
        for col in range(1, j + 1):
            ways *= comb((j - col + 1) * m, m)
        result *= ways
        remaining -= take
    return result


def bp_star_term(p: Partition) -> int:
    """Schedule classes up to limit isomorphism supported by ``p``.

    The dynamical-equality count for ``p`` is always divisible by the lcm of
    its part sizes; non-divisibility is reported as a hard failure.
    """
    return _exact_div(bp0_term(p), p.lcm(), "bp_star term")


# ---------------------------------------------------------------------------
# Totals

def count_bs(n: int) -> int:
    """Block-sequential schedules on ``n`` automata (ordered Bell numbers)."""
    return sum(bs_term(p) for p in partitions_of(n))


def count_bp(n: int) -> int:
    """Block-parallel schedules on ``n`` automata ("sets of lists").

    Evaluates both closed forms and checks they agree.
    """
    direct = 0
    product = 0
    for p in partitions_of(n):
        direct += bp_term(p)
        product += bp_term_product(p)
    if direct != product:
        raise CrossCheckError(f"count_bp({n}): {direct} != {product}")
    return direct


def count_bp0(n: int) -> int:
    """Block-parallel schedules up to dynamical equality.

    Evaluates three closed forms and checks pairwise agreement.
    """
    totals = [0, 0, 0]
    for p in partitions_of(n):
        totals[0] += bp0_term(p)
        totals[1] += bp0_term_columns(p)
        totals[2] += bp0_term_matrices(p)
    if not totals[0] == totals[1] == totals[2]:
        raise CrossCheckError(f"count_bp0({n}): formulas disagree: {totals}")
    return totals[0]


def count_bp_star(n: int) -> int:
    """Block-parallel schedules up to limit isomorphism."""
    return sum(bp_star_term(p) for p in partitions_of(n))


def count_bs_inter_bp(n: int) -> int:
    """Block sequences that are both block-sequential and rewritten block-parallel.

    Divisor sum: for each divisor ``d`` of ``n``, the ordered partitions into
    ``d`` blocks of equal size ``n/d``.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _exact_div(factorial(n), factorial(n // d) ** d, "bs/bp intersection")
    return total


# ---------------------------------------------------------------------------
# Generating-function route

def _poly_mul_trunc(a: list[Fraction], b: list[Fraction], degree: int) -> list[Fraction]:
    out = [Fraction(0)] * (degree + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > degree:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def egf_coefficients(degree: int) -> list[Fraction]:
    """Coefficients up to ``x**degree`` of the product over ``j >= 1`` of
    ``sum_k (x**k / k!) ** j``.

    Factors with ``j > degree`` only contribute their constant term 1 below
    ``x**(degree+1)``, so the product over ``j <= degree`` suffices.
    """
    series = [Fraction(0)] * (degree + 1)
    series[0] = Fraction(1)
    for j in range(1, degree + 1):
        factor = [Fraction(0)] * (degree + 1)
        k = 0
        while j * k <= degree:
            factor[j * k] = Fraction(1, factorial(k) ** j)
            k += 1
        series = _poly_mul_trunc(series, factor, degree)
    return series


def count_bp0_via_egf(n: int) -> int:
    """Dynamical-equality count extracted from its exponential generating function.

    The ``x**n`` coefficient times ``n!`` must be an integer; anything else is
    a hard failure.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    coefficient = egf_coefficients(n)[n] * factorial(n)
    if coefficient.denominator != 1:
        raise CrossCheckError(
            f"EGF coefficient for n={n} is not integral: {coefficient}"
        )
    return int(coefficient)
