"""Application front-ends that reduce to a matrix family.

Everything here funnels into :func:`synclat.lattice.invariant_lattice` or
:func:`synclat.lattice.tactical_lattice`:

* simple graphs: equitable partitions are the partitions invariant under the
  adjacency matrix, almost equitable ones those invariant under the graph
  Laplacian;
* arrow-colored cell networks: balanced partitions are the invariant
  partitions of the per-color in-adjacency matrices restricted below the
  cell-type partition, exo-balanced ones the same with the per-color
  Laplacians;
* Cayley color digraphs of a finite group: balanced partitions are exactly
  the right-coset partitions by subgroups, which is checked against an
  independent subgroup enumeration;
* weighted networks: any square rational matrix is a weighted in-adjacency
  matrix, and passing to the Laplacian turns exo-balanced questions into
  balanced ones;
* incidence structures: the point-line incidence matrices feed the tactical
  enumeration.

Orientation convention: adjacency entry A[i][j] counts arrows from j to i
(in-adjacency).  Graph-theory data using the out-adjacency convention must be
transposed by the caller; for the symmetric matrices of simple graphs the
two agree.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lattice import InvariantLattice, filter_below, invariant_lattice
from .partition import Partition
from .rational import RationalMatrix
from .refine import MatrixFamily


class NetworkConsistencyWarning(UserWarning):
    """Arrow colors that straddle cell types.

    The cell-network formalism wants arrows of one color to have heads of one
    cell type and tails of one cell type.  Invariant partitions are well
    defined without that, so violations warn instead of failing.
    """


@dataclass(frozen=True)
class ColoredNetwork:
    """Arrow-colored digraph with a cell-type partition.

    ``arrows`` is a multiset of (source, target, color) triples with 1-based
    cells and colors; parallel arrows repeat.  ``num_colors`` may exceed the
    largest color in use, in which case the unused colors contribute zero
    adjacency matrices.
    """

    n: int
    cell_types: Partition
    arrows: tuple
    num_colors: int

    def __init__(
        self,
        n: int,
        arrows: Iterable,
        cell_types: Optional[Partition] = None,
        num_colors: Optional[int] = None,
    ):
        if n < 1:
            raise ValueError("network needs at least one cell")
        if cell_types is None:
            cell_types = Partition.singleton(n)
        if cell_types.n != n:
            raise ValueError(
                f"cell-type partition covers {cell_types.n} cells, network has {n}"
            )
        arrows = tuple((int(s), int(t), int(c)) for s, t, c in arrows)
        for s, t, c in arrows:
            if not (1 <= s <= n and 1 <= t <= n):
                raise ValueError(f"arrow ({s}, {t}) out of cell range 1..{n}")
            if c < 1:
                raise ValueError(f"arrow color {c} must be positive")
        max_used = max((c for _, _, c in arrows), default=1)
        if num_colors is None:
            num_colors = max_used
        elif num_colors < max_used:
            raise ValueError(f"num_colors={num_colors} below largest used color {max_used}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "cell_types", cell_types)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "num_colors", num_colors)
        self._check_consistency()

    def _check_consistency(self) -> None:
        types = self.cell_types.coloring
        for color in range(1, self.num_colors + 1):
            heads = {types[t - 1] for s, t, c in self.arrows if c == color}
            tails = {types[s - 1] for s, t, c in self.arrows if c == color}
            if len(heads) > 1 or len(tails) > 1:
                warnings.warn(
                    f"arrows of color {color} join several cell types "
                    f"(head types {sorted(heads)}, tail types {sorted(tails)})",
                    NetworkConsistencyWarning,
                    stacklevel=3,
                )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "cell_types": list(self.cell_types.coloring),
            "num_colors": self.num_colors,
            "arrows": [
                {"from": s, "to": t, "color": c} for s, t, c in self.arrows
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ColoredNetwork":
        n = obj["n"]
        cell_types = (
            Partition(obj["cell_types"]) if obj.get("cell_types") else None
        )
        arrows = [(a["from"], a["to"], a.get("color", 1)) for a in obj["arrows"]]
        return cls(n, arrows, cell_types=cell_types, num_colors=obj.get("num_colors"))


def monochrome_adjacency(net: ColoredNetwork) -> MatrixFamily:
    """One in-adjacency matrix per arrow color: entry (i, j) counts the
    arrows of that color from cell j to cell i."""
    mats = []
    for color in range(1, net.num_colors + 1):
        grid = [[0] * net.n for _ in range(net.n)]
        for s, t, c in net.arrows:
            if c == color:
                grid[t - 1][s - 1] += 1
        mats.append(RationalMatrix(grid))
    return MatrixFamily(mats)


def network_from_adjacencies(
    matrices: Sequence, cell_types: Optional[Partition] = None
) -> ColoredNetwork:
    """Build an arrow-colored network from in-adjacency matrices with
    nonnegative integer entries (entry value = arrow multiplicity)."""
    fam = MatrixFamily(matrices)
    if not fam.is_square:
        raise ValueError("adjacency matrices must be square")
    n = fam.cols
    arrows = []
    for color, mat in enumerate(fam.matrices, start=1):
        for i, row in enumerate(mat.entries):
            for j, x in enumerate(row):
                if x.denominator != 1 or x < 0:
                    raise ValueError(
                        f"adjacency entries must be nonnegative integers, got {x}"
                    )
                arrows.extend([(j + 1, i + 1, color)] * int(x))
    return ColoredNetwork(
        n, arrows, cell_types=cell_types, num_colors=len(fam.matrices)
    )


def laplacian(weights: RationalMatrix) -> RationalMatrix:
    """L = D - W with D the diagonal of row sums; rows of L sum to zero."""
    if weights.rows != weights.cols:
        raise ValueError("laplacian needs a square matrix")
    out = []
    for i, row in enumerate(weights.entries):
        d = sum(row)
        out.append([(d if i == j else Fraction(0)) - x for j, x in enumerate(row)])
    return RationalMatrix(out)


def weighted_laplacian_network(weights: RationalMatrix) -> RationalMatrix:
    """In-adjacency matrix of the Laplacian companion network: the network
    whose weights are L = D - W.  Its balanced partitions are exactly the
    exo-balanced partitions of the original weighted network."""
    return laplacian(weights)


def cell_types_to_loops(net: ColoredNetwork) -> ColoredNetwork:
    """Replace the cell-type partition by per-type loop colors.

    Every cell gets a loop whose color encodes its cell type; the cell-type
    partition collapses to a single class.  The balanced partitions are
    unchanged, because refining the cell-type partition is the same
    constraint as being balanced for the added loop colors.  A single-type
    network gains one identity-matrix color, which never changes the
    invariant set.
    """
    arrows = list(net.arrows)
    base = net.num_colors
    for i, c in enumerate(net.cell_types.coloring, start=1):
        arrows.append((i, i, base + c))
    return ColoredNetwork(
        net.n,
        arrows,
        cell_types=Partition.singleton(net.n),
        num_colors=base + net.cell_types.num_classes,
    )


def balanced_partitions(net: ColoredNetwork, **kwargs) -> InvariantLattice:
    """Partitions refining the cell types with constant per-class in-arrow
    counts in every monochrome subgraph: the invariant partitions of the
    monochrome adjacency matrices below the cell-type partition."""
    lat = invariant_lattice(monochrome_adjacency(net), **kwargs)
    return filter_below(lat, net.cell_types)


def exo_balanced_partitions(net: ColoredNetwork, **kwargs) -> InvariantLattice:
    """Like balanced, but only arrows between distinct classes are counted:
    the invariant partitions of the monochrome Laplacians below the
    cell-type partition."""
    fam = MatrixFamily(
        [laplacian(m) for m in monochrome_adjacency(net).matrices]
    )
    return filter_below(invariant_lattice(fam, **kwargs), net.cell_types)


def _check_simple_graph(adjacency: RationalMatrix) -> None:
    if adjacency.rows != adjacency.cols:
        raise ValueError("adjacency matrix must be square")
    for i, row in enumerate(adjacency.entries):
        for j, x in enumerate(row):
            if x not in (0, 1):
                raise ValueError(f"simple-graph adjacency entries must be 0/1, got {x}")
            if i == j and x:
                raise ValueError("simple graph cannot have loops")
            if x != adjacency.entries[j][i]:
                raise ValueError("simple-graph adjacency must be symmetric")


def equitable_partitions(adjacency, **kwargs) -> InvariantLattice:
    """Vertex partitions of a simple graph with constant class-to-class
    degrees; exactly the invariant partitions of the adjacency matrix."""
    if not isinstance(adjacency, RationalMatrix):
        adjacency = RationalMatrix(adjacency)
    _check_simple_graph(adjacency)
    return invariant_lattice(MatrixFamily([adjacency]), **kwargs)


def almost_equitable_partitions(adjacency, **kwargs) -> InvariantLattice:
    """Like equitable, but degrees toward the own class are unconstrained;
    exactly the invariant partitions of the graph Laplacian."""
    if not isinstance(adjacency, RationalMatrix):
        adjacency = RationalMatrix(adjacency)
    _check_simple_graph(adjacency)
    return invariant_lattice(MatrixFamily([laplacian(adjacency)]), **kwargs)


# ---------------------------------------------------------------------------
# groups and Cayley color digraphs


class GroupTable(object):
    """A finite group given by its multiplication table.

    ``table[i][j]`` is the 0-based index of the product of elements i and j.
    The table must be a Latin square with an identity; associativity is
    checked exhaustively up to order 256 (cubic cost, skipped above that).
    """

    __slots__ = ("order", "table", "identity")

    def __init__(self, table: Sequence[Sequence[int]]):
        g = len(table)
        if g < 1:
            raise ValueError("group must have at least one element")
        tab = tuple(tuple(int(x) for x in row) for row in table)
        full = set(range(g))
        for row in tab:
            if len(row) != g or set(row) != full:
                raise ValueError("multiplication table rows must permute 0..g-1")
        for j in range(g):
            if {tab[i][j] for i in range(g)} != full:
                raise ValueError("multiplication table columns must permute 0..g-1")
        identity = None
        for e in range(g):
            if all(tab[e][j] == j and tab[j][e] == j for j in range(g)):
                identity = e
                break
        if identity is None:
            raise ValueError("multiplication table has no identity element")
        if g <= 256:
            for a in range(g):
                ta = tab[a]
                for b in range(g):
                    tab_ab = tab[ta[b]]
                    tb = tab[b]
                    for c in range(g):
                        if tab_ab[c] != ta[tb[c]]:
                            raise ValueError(
                                f"multiplication table is not associative at "
                                f"({a}, {b}, {c})"
                            )
        self.order = g
        self.table = tab
        self.identity = identity

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @classmethod
    def cyclic(cls, n: int) -> "GroupTable":
        return cls([[(i + j) % n for j in range(n)] for i in range(n)])

    @classmethod
    def quaternion(cls) -> "GroupTable":
        """The quaternion group on (1, i, j, k, -1, -i, -j, -k)."""
        # unit products: (sign, unit index) with units 1,i,j,k = 0,1,2,3
        unit = {
            (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
        }

        def index(sign: int, u: int) -> int:
            return u + (4 if sign < 0 else 0)

        table = [[0] * 8 for _ in range(8)]
        for a in range(8):
            sa, ua = (-1 if a >= 4 else 1), a % 4
            for b in range(8):
                sb, ub = (-1 if b >= 4 else 1), b % 4
                s, u = unit[(ua, ub)]
                table[a][b] = index(sa * sb * s, u)
        return cls(table)

    def to_json_dict(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "GroupTable":
        # 1-based element indices on the wire
        table = [[x - 1 for x in row] for row in obj["table"]]
        group = cls(table)
        if "order" in obj and obj["order"] != group.order:
            raise ValueError("declared order does not match table size")
        return group


def cayley_network(group: GroupTable, generators: Sequence[int]) -> ColoredNetwork:
    """Cayley color digraph: one arrow color per generator s, with arrows
    g -> g*s.  ``generators`` holds 1-based element indices.  Warns when the
    generators do not generate the whole group (the coset description of the
    balanced partitions assumes they do)."""
    gens = [int(s) - 1 for s in generators]
    if not gens:
        raise ValueError("generator list must be nonempty")
    for s in gens:
        if not 0 <= s < group.order:
            raise ValueError(f"generator index {s + 1} out of range 1..{group.order}")
    closure = {group.identity}
    frontier = [group.identity]
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = group.mul(g, s)
            if h not in closure:
                closure.add(h)
                frontier.append(h)
    if len(closure) != group.order:
        warnings.warn(
            f"generators reach only {len(closure)} of {group.order} elements",
            NetworkConsistencyWarning,
            stacklevel=2,
        )
    arrows = [
        (g + 1, group.mul(g, s) + 1, color)
        for color, s in enumerate(gens, start=1)
        for g in range(group.order)
    ]
    return ColoredNetwork(group.order, arrows, num_colors=len(gens))


def subgroups(group: GroupTable) -> list:
    """All subgroups as sorted element-index tuples, by closure of seed sets
    extended one generator at a time until no new subgroup appears."""
    if group.order > 1024:
        raise ValueError("subgroup enumeration is capped at order 1024")

    def closure_of(seed: frozenset) -> frozenset:
        elems = set(seed) | {group.identity}
        frontier = list(elems)
        while frontier:
            a = frontier.pop()
            for b in list(elems):
                for c in (group.mul(a, b), group.mul(b, a)):
                    if c not in elems:
                        elems.add(c)
                        frontier.append(c)
        return frozenset(elems)

    found = {frozenset([group.identity])}
    frontier = [frozenset([group.identity])]
    while frontier:
        h = frontier.pop()
        for g in range(group.order):
            if g in h:
                continue
            extended = closure_of(h | {g})
            if extended not in found:
                found.add(extended)
                frontier.append(extended)
    return sorted(tuple(sorted(h)) for h in found)


def subgroup_coset_partitions(group: GroupTable) -> set:
    """Right-coset partitions {Hg} of the group by each of its subgroups,
    over 1-based element indices."""
    out = set()
    for sub in subgroups(group):
        labels = [0] * group.order
        for g in range(group.order):
            coset = min(group.mul(h, g) for h in sub)
            labels[g] = coset + 1
        out.add(Partition(labels))
    return out


# ---------------------------------------------------------------------------
# incidence structures


@dataclass(frozen=True)
class IncidenceStructure:
    """Points, lines, and one 0/1 incidence matrix per incidence color."""

    points: int
    lines: int
    matrices: tuple

    def __init__(self, matrices: Sequence):
        mats = tuple(
            m if isinstance(m, RationalMatrix) else RationalMatrix(m)
            for m in matrices
        )
        if not mats:
            raise ValueError("incidence structure needs at least one matrix")
        m, n = mats[0].rows, mats[0].cols
        for mat in mats:
            if (mat.rows, mat.cols) != (m, n):
                raise ValueError("incidence matrices must share one shape")
            for row in mat.entries:
                for x in row:
                    if x not in (0, 1):
                        raise ValueError(f"incidence entries must be 0/1, got {x}")
        object.__setattr__(self, "points", m)
        object.__setattr__(self, "lines", n)
        object.__setattr__(self, "matrices", mats)

    def to_json_dict(self) -> dict:
        return {
            "points": self.points,
            "lines": self.lines,
            "matrices": [
                [[int(x) for x in row] for row in m.entries] for m in self.matrices
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "IncidenceStructure":
        inc = cls(obj["matrices"])
        if "points" in obj and obj["points"] != inc.points:
            raise ValueError("declared point count does not match matrices")
        if "lines" in obj and obj["lines"] != inc.lines:
            raise ValueError("declared line count does not match matrices")
        return inc


def incidence_family(inc: IncidenceStructure) -> MatrixFamily:
    """The incidence matrices as a rectangular family, ready for the
    tactical enumeration."""
    return MatrixFamily(inc.matrices)


# ---------------------------------------------------------------------------
# small graph generators used by tests, demos, and the docs


def path_graph(n: int) -> RationalMatrix:
    grid = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        grid[i][i + 1] = grid[i + 1][i] = 1
    return RationalMatrix(grid)


def cycle_graph(n: int) -> RationalMatrix:
    if n < 3:
        raise ValueError("cycle graph needs at least 3 vertices")
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        grid[i][(i + 1) % n] = 1
        grid[(i + 1) % n][i] = 1
    return RationalMatrix(grid)


def complete_graph(n: int) -> RationalMatrix:
    return RationalMatrix([[int(i != j) for j in range(n)] for i in range(n)])


def grid_graph(m: int, n: int) -> RationalMatrix:
    """Cartesian product of two paths, vertices numbered row-major."""
    size = m * n
    grid = [[0] * size for _ in range(size)]

    def at(r: int, c: int) -> int:
        return r * n + c

    for r in range(m):
        for c in range(n):
            if c + 1 < n:
                grid[at(r, c)][at(r, c + 1)] = grid[at(r, c + 1)][at(r, c)] = 1
            if r + 1 < m:
                grid[at(r, c)][at(r + 1, c)] = grid[at(r + 1, c)][at(r, c)] = 1
    return RationalMatrix(grid)


def star_graph(leaves: int) -> RationalMatrix:
    """Star with the center as vertex 1 and the given number of leaves."""
    n = leaves + 1
    grid = [[0] * n for _ in range(n)]
    for leaf in range(1, n):
        grid[0][leaf] = grid[leaf][0] = 1
    return RationalMatrix(grid)


def graph_incidence(n: int, edges: Sequence) -> RationalMatrix:
    """Vertex-edge incidence matrix of a graph: rows are vertices 1..n,
    columns follow the given edge order."""
    cols = []
    for a, b in edges:
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            raise ValueError(f"bad edge ({a}, {b})")
        cols.append((a, b))
    grid = [[0] * len(cols) for _ in range(n)]
    for j, (a, b) in enumerate(cols):
        grid[a - 1][j] = 1
        grid[b - 1][j] = 1
    return RationalMatrix(grid)
