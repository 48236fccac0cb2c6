"""Independent brute-force references, for tests and the CLI --verify flag.

Everything here deliberately avoids the refinement engine: invariance is
decided by exact column-space containment on materialized characteristic
matrices, and enumeration walks all partitions via the restricted-growth
successor.  Slow by design; the point is a second, unrelated code path.
"""

from __future__ import annotations

from typing import Iterator, Set

from .partition import Partition, PartitionPair, characteristic_matrix
from .rational import column_space_contains, matmul, transpose
from .refine import MatrixFamily

_BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597]

MAX_ENUM_N = 12
MAX_BRUTE_N = 10
MAX_BRUTE_PAIRS = 10**6


def bell_number(n: int) -> int:
    if not 0 <= n < len(_BELL):
        raise ValueError(f"Bell numbers tabulated only up to n={len(_BELL) - 1}")
    return _BELL[n]


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of {1..n} exactly once, in lexicographic coloring
    order: first the one-class partition, last the all-singletons one."""
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"partition enumeration supports 1 <= n <= {MAX_ENUM_N}")
    a = [1] * n
    peak = [1] * n  # peak[i] = max(a[0..i])
    while True:
        yield Partition._from_canonical(tuple(a))
        # successor in restricted-growth order: bump the rightmost position
        # that can still grow, reset the tail to 1
        i = n - 1
        while i > 0 and a[i] > peak[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        peak[i] = max(peak[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 1
            peak[j] = peak[i]


def _invariant_direct(family: MatrixFamily, part: Partition) -> bool:
    p = characteristic_matrix(part)
    return all(column_space_contains(p, matmul(m, p)) for m in family.matrices)


def brute_invariant_set(family: MatrixFamily) -> Set[Partition]:
    """All invariant partitions of a square family by exhaustive scan with
    direct containment checks."""
    if not family.is_square:
        raise ValueError("brute_invariant_set needs a square family")
    n = family.cols
    if n > MAX_BRUTE_N:
        raise ValueError(f"brute-force invariance scan capped at n={MAX_BRUTE_N}")
    return {part for part in all_partitions(n) if _invariant_direct(family, part)}


def brute_tactical_set(family: MatrixFamily) -> Set[PartitionPair]:
    """All tactical decompositions of a family by exhaustive double scan."""
    m, n = family.rows, family.cols
    if bell_number(m) * bell_number(n) > MAX_BRUTE_PAIRS:
        raise ValueError(
            f"brute-force tactical scan capped at {MAX_BRUTE_PAIRS} pairs"
        )
    transposes = [transpose(mat) for mat in family.matrices]
    rows = [(a, characteristic_matrix(a)) for a in all_partitions(m)]
    cols = [(b, characteristic_matrix(b)) for b in all_partitions(n)]
    out = set()
    for b, pb in cols:
        products = [matmul(mat, pb) for mat in family.matrices]
        for a, pa in rows:
            if all(column_space_contains(pa, q) for q in products) and all(
                column_space_contains(pb, matmul(mt, pa)) for mt in transposes
            ):
                out.add(PartitionPair(a, b))
    return out
