"""Enumeration of the full lattice of invariant partitions (or tactical
decompositions) of a matrix family.

The search starts from the coarsest invariant partition (the refinement
fixpoint of the one-class partition), then repeatedly pops an invariant
partition from a FIFO queue, forms every lower cover by splitting one class
in two, and runs the refinement fixpoint on each cover.  Every fixpoint is an
invariant partition; a seen-set keyed on canonical colorings ensures each
element is enqueued at most once.  Since every invariant partition below a
popped element is reachable through some cover, the search is exhaustive.

Invariant partitions form a lattice but not a sublattice of the full
partition lattice: meets differ, so cover edges are recomputed here by
transitive reduction of refinement restricted to the enumerated elements
rather than inherited from the ambient lattice.

Enumeration can fan the cover refinements out over worker processes; results
are set-valued and order-independent, so the output is identical for any
worker count.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .partition import (
    Partition,
    PartitionPair,
    canonical_coloring,
    iter_cover_colorings,
)
from .refine import (
    MatrixFamily,
    _square_fixpoint,
    _start_state,
    tactical_fixpoint_colorings,
)

_TASK_CHUNK = 4096  # cover masks per worker task

Element = Union[Partition, PartitionPair]


class ElementCapExceeded(RuntimeError):
    """Raised when enumeration finds more elements than the configured cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(
            f"invariant lattice exceeds the element cap ({count} > {cap})"
        )
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class LatticeStats:
    """Instrumentation collected during enumeration.

    ``visited_partitions`` counts the distinct partitions materialized during
    the whole run: the start partition, every split candidate, and every
    intermediate step of every refinement chain.  It is collected exactly in
    sequential mode (up to ``visited_cap``, after which ``visited_exact``
    drops to False); multi-worker runs report None since unioning the
    per-worker sets would dwarf the actual computation.

    ``queue_peak`` measures the element queue in sequential mode and the
    outstanding task set in worker mode (where it can vary with scheduling;
    elements and cover edges never do).
    """

    cir_calls: int = 0
    splits_examined: int = 0
    queue_peak: int = 0
    popped: int = 0
    visited_partitions: Optional[int] = None
    visited_exact: bool = False

    def to_json_dict(self) -> dict:
        return {
            "cir_calls": self.cir_calls,
            "splits_examined": self.splits_examined,
            "queue_peak": self.queue_peak,
            "popped": self.popped,
            "visited_partitions": self.visited_partitions,
            "visited_exact": self.visited_exact,
        }


@dataclass(frozen=True)
class InvariantLattice:
    """The enumerated elements plus their cover relation.

    ``elements`` is sorted by lexicographic coloring vector (row coloring
    first for pairs), so the coarsest element found from the one-class seed
    comes first and the all-singletons bottom comes last.  ``cover_edges``
    holds (coarser_index, finer_index) pairs into ``elements`` and is the
    transitive reduction of refinement restricted to the element set.
    """

    elements: tuple
    cover_edges: tuple
    stats: LatticeStats

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item) -> bool:
        return item in set(self.elements)

    @property
    def is_tactical(self) -> bool:
        return bool(self.elements) and isinstance(self.elements[0], PartitionPair)

    def bars(self) -> list:
        return [e.bar() for e in self.elements]

    def index_of(self, element: Element) -> int:
        return self.elements.index(element)

    def to_json_dict(self) -> dict:
        out: dict = {}
        if self.is_tactical:
            out["m"], out["n"] = self.elements[0].shape
        elif self.elements:
            out["n"] = self.elements[0].n
        out["count"] = len(self.elements)
        out["elements"] = [
            e.to_json_dict() if isinstance(e, PartitionPair) else list(e.coloring)
            for e in self.elements
        ]
        out["bar"] = self.bars()
        out["cover_edges"] = [list(edge) for edge in self.cover_edges]
        out["stats"] = self.stats.to_json_dict()
        return out


def hasse_edges(elements: Sequence[Element]) -> list:
    """Transitive reduction of refinement restricted to ``elements``.

    Returns (coarser_index, finer_index) pairs.  Needed because the
    enumerated set is generally not cover-closed in the ambient partition
    lattice: two elements can have strictly intermediate partitions that are
    not invariant, making them covers here but not there.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise ValueError("hasse_edges expects pairwise distinct elements")
    k = len(elements)
    below = [0] * k  # bitmask: below[i] has bit j iff elements[j] < elements[i]
    for i in range(k):
        ei = elements[i]
        mask = 0
        for j in range(k):
            if i != j and elements[j].refines(ei):
                mask |= 1 << j
        below[i] = mask
    edges = []
    for i in range(k):
        mask = below[i]
        through = 0
        m = mask
        while m:
            j = (m & -m).bit_length() - 1
            through |= below[j]
            m &= m - 1
        covers = mask & ~through
        while covers:
            j = (covers & -covers).bit_length() - 1
            edges.append((i, j))
            covers &= covers - 1
    edges.sort()
    return edges


class _VisitedSet:
    """Distinct-partition tracker with a saturation cap."""

    def __init__(self, cap: int):
        self.cap = cap
        self.items: set = set()
        self.exact = True

    def add(self, key) -> None:
        if self.exact:
            self.items.add(key)
            if len(self.items) > self.cap:
                self.exact = False

    def count(self) -> int:
        return len(self.items)


def _encode(coloring: tuple):
    # colors are bounded by n, so byte strings are a compact set key
    return bytes(coloring) if len(coloring) < 256 else coloring


def _encode_pair(ca: tuple, cb: tuple):
    if len(ca) < 256 and len(cb) < 256:
        return bytes(ca) + b"\x00" + bytes(cb)
    return (ca, cb)


def invariant_lattice(
    family: MatrixFamily,
    *,
    workers: int = 1,
    element_cap: int = 10**6,
    visited_cap: int = 2 * 10**6,
) -> InvariantLattice:
    """All partitions invariant under every matrix of the square family.

    ``workers`` > 1 distributes the cover refinements over processes; the
    result is identical for any worker count.  ``element_cap`` bounds the
    number of lattice elements (the lattice can be the whole partition
    lattice, which grows like the Bell numbers) and trips
    :class:`ElementCapExceeded` when exceeded.
    """
    if not family.is_square:
        raise ValueError(
            f"invariant_lattice needs a square family, got {family.rows}x{family.cols}"
        )
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        colorings, stats = _enumerate_sequential(family, element_cap, visited_cap)
    else:
        colorings, stats = _enumerate_parallel(family, workers, element_cap)
    elements = tuple(
        Partition._from_canonical(c) for c in sorted(colorings)
    )
    return InvariantLattice(elements, tuple(hasse_edges(elements)), stats)


def _enumerate_sequential(
    family: MatrixFamily, element_cap: int, visited_cap: int
) -> tuple:
    n = family.cols
    engine = family.engine()
    visited = _VisitedSet(visited_cap)
    cir_calls = 0
    splits = 0

    def run_chain(coloring: tuple) -> tuple:
        nonlocal cir_calls
        cir_calls += 1
        visited.add(_encode(coloring))
        col, classes = _start_state(coloring)
        _square_fixpoint(
            engine,
            col,
            classes,
            on_step=lambda c: visited.add(_encode(canonical_coloring(c))),
        )
        return canonical_coloring(col)

    top = run_chain(tuple([1] * n))
    seen = {top}
    queue = deque([top])
    queue_peak = 1
    popped = 0
    while queue:
        current = queue.popleft()
        popped += 1
        for cover in iter_cover_colorings(current):
            splits += 1
            result = run_chain(cover)
            if result not in seen:
                seen.add(result)
                if len(seen) > element_cap:
                    raise ElementCapExceeded(len(seen), element_cap)
                queue.append(result)
                if len(queue) > queue_peak:
                    queue_peak = len(queue)
    stats = LatticeStats(
        cir_calls=cir_calls,
        splits_examined=splits,
        queue_peak=queue_peak,
        popped=popped,
        visited_partitions=visited.count(),
        visited_exact=visited.exact,
    )
    return seen, stats


# ---------------------------------------------------------------------------
# multi-worker enumeration


_WORKER_ENGINE = None


def _pool_init(payload) -> None:
    global _WORKER_ENGINE
    _WORKER_ENGINE = payload


def _pool_run_splits(task) -> set:
    """Refine a contiguous range of one-class splits of ``parent``.

    The split convention matches the sequential path: the smallest member of
    the class stays put and mask bit t moves the (t+1)-th member out.
    """
    parent, class_color, lo, hi = task
    engine = _WORKER_ENGINE
    members = [i for i, c in enumerate(parent) if c == class_color]
    rest = members[1:]
    k = max(parent)
    results = set()
    for mask in range(lo, hi):
        labels = list(parent)
        m = mask
        t = 0
        while m:
            if m & 1:
                labels[rest[t]] = k + 1
            m >>= 1
            t += 1
        col = [c - 1 for c in labels]
        classes: list = [[] for _ in range(k + 1)]
        for i, c in enumerate(col):
            classes[c].append(i)
        _square_fixpoint(engine, col, classes)
        results.add(canonical_coloring(col))
    return results


def _split_tasks(coloring: tuple) -> Iterable[tuple]:
    k = max(coloring)
    sizes = [0] * k
    for c in coloring:
        sizes[c - 1] += 1
    for color, s in enumerate(sizes, start=1):
        if s < 2:
            continue
        end = 1 << (s - 1)
        for lo in range(1, end, _TASK_CHUNK):
            yield (coloring, color, lo, min(lo + _TASK_CHUNK, end))


def _enumerate_parallel(family: MatrixFamily, workers: int, element_cap: int) -> tuple:
    n = family.cols
    engine = family.engine()
    col, classes = _start_state(tuple([1] * n))
    _square_fixpoint(engine, col, classes)
    top = canonical_coloring(col)
    seen = {top}
    cir_calls = 1
    splits = 0
    queue_peak = 0
    popped = 0
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_pool_init, initargs=(engine,)
    ) as pool:
        pending = set()

        def expand(coloring: tuple) -> None:
            nonlocal splits
            for task in _split_tasks(coloring):
                splits += task[3] - task[2]
                pending.add(pool.submit(_pool_run_splits, task))

        expand(top)
        popped += 1
        while pending:
            queue_peak = max(queue_peak, len(pending))
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                batch = fut.result()
                for result in batch:
                    if result not in seen:
                        seen.add(result)
                        if len(seen) > element_cap:
                            for p in pending:
                                p.cancel()
                            raise ElementCapExceeded(len(seen), element_cap)
                        expand(result)
                        popped += 1
    cir_calls += splits
    stats = LatticeStats(
        cir_calls=cir_calls,
        splits_examined=splits,
        queue_peak=queue_peak,
        popped=popped,
        visited_partitions=None,
        visited_exact=False,
    )
    return seen, stats


def tactical_lattice(
    family: MatrixFamily,
    *,
    element_cap: int = 10**6,
    visited_cap: int = 2 * 10**6,
    workers: int = 1,
) -> InvariantLattice:
    """All tactical decompositions of a (possibly rectangular) family.

    Same queue scheme as :func:`invariant_lattice` with pair covers (split
    one class on either side) and the two-sided refinement fixpoint.  The
    pair of all-singletons partitions is always tactical, so the lattice is
    never empty.  Runs sequentially regardless of ``workers``; the tactical
    inputs this targets are far below the scale where processes pay off.
    """
    del workers  # accepted for interface symmetry; see docstring
    m, n = family.rows, family.cols
    family.engine()  # build both engines once before the hot loop
    family.transposed().engine()
    visited = _VisitedSet(visited_cap)
    cir_calls = 0
    splits = 0

    def run_chain(ca: tuple, cb: tuple) -> tuple:
        nonlocal cir_calls
        cir_calls += 1
        visited.add(_encode_pair(ca, cb))
        out = tactical_fixpoint_colorings(
            family,
            ca,
            cb,
            on_step=lambda a, b: visited.add(
                _encode_pair(canonical_coloring(a), canonical_coloring(b))
            ),
        )
        return out

    top = run_chain(tuple([1] * m), tuple([1] * n))
    seen = {top}
    queue = deque([top])
    queue_peak = 1
    popped = 0
    while queue:
        ca, cb = queue.popleft()
        popped += 1
        covers = itertools.chain(
            ((split, cb) for split in iter_cover_colorings(ca)),
            (((ca, split)) for split in iter_cover_colorings(cb)),
        )
        for cover_a, cover_b in covers:
            splits += 1
            result = run_chain(cover_a, cover_b)
            if result not in seen:
                seen.add(result)
                if len(seen) > element_cap:
                    raise ElementCapExceeded(len(seen), element_cap)
                queue.append(result)
                if len(queue) > queue_peak:
                    queue_peak = len(queue)
    stats = LatticeStats(
        cir_calls=cir_calls,
        splits_examined=splits,
        queue_peak=queue_peak,
        popped=popped,
        visited_partitions=visited.count(),
        visited_exact=visited.exact,
    )
    elements = tuple(
        PartitionPair(
            Partition._from_canonical(a), Partition._from_canonical(b)
        )
        for a, b in sorted(seen)
    )
    return InvariantLattice(elements, tuple(hasse_edges(elements)), stats)


def filter_below(lattice: InvariantLattice, top: Partition) -> InvariantLattice:
    """Restrict a partition lattice to the down-set of ``top``.

    Cover edges are recomputed for the restricted set.  The subset is still
    closed under joins and still contains the all-singletons bottom, so it is
    a lattice in its own right.  Stats are inherited from the enumeration
    that built the parent.
    """
    if lattice.is_tactical:
        raise TypeError("filter_below applies to partition lattices, not pair lattices")
    if lattice.elements and lattice.elements[0].n != top.n:
        raise ValueError(
            f"filter partition has {top.n} elements, lattice ground set has "
            f"{lattice.elements[0].n}"
        )
    kept = tuple(e for e in lattice.elements if e.refines(top))
    return InvariantLattice(kept, tuple(hasse_edges(kept)), lattice.stats)
