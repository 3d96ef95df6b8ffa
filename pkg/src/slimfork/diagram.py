"""Immutable planar Hasse diagrams with cached order tables.

A diagram stores, for every element, the list of its upper covers and
the list of its lower covers, both ordered left to right as in a plane
drawing. Reachability, meet, join and height tables are computed once
at construction; all structure is read-only afterwards, so diagrams
can be shared freely between concurrent computations.

Lower lists are derived when not supplied: elements are ranked by a
leftmost-first traversal from the bottom and each element's lower
covers are sorted by that rank, which reproduces the plane order for
diagrams whose upper lists are drawn consistently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import posets
from .errors import (
    CycleDetected,
    DuplicateCover,
    NotALattice,
    NotBounded,
    ValidationError,
)


@dataclass(frozen=True)
class OrderTables:
    """Reachability masks, meet/join tables and heights for one diagram."""

    up: tuple[int, ...]
    down: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    height: tuple[int, ...]


@dataclass(frozen=True)
class FourCell:
    """A covering square o -< a_l, a_r -< t with nothing inside."""

    o: int
    a_l: int
    a_r: int
    t: int


class PlanarDiagram:
    """A finite bounded poset with ordered cover lists.

    Construct through :func:`build_diagram`; instances are immutable by
    convention and hash/compare by identity.
    """

    __slots__ = (
        "n", "upper", "lower", "labels", "name",
        "tables", "bottom", "top", "left_rank", "cover_mask", "_key",
    )

    def __init__(self, upper, lower, labels, name, tables, bottom, top, left_rank):
        self.n = len(upper)
        self.upper = upper
        self.lower = lower
        self.labels = labels
        self.name = name
        self.tables = tables
        self.bottom = bottom
        self.top = top
        self.left_rank = left_rank
        self.cover_mask = tuple(_mask(row) for row in upper)
        self._key = None

    def leq(self, x: int, y: int) -> bool:
        return (self.tables.up[x] >> y) & 1 == 1

    def meet(self, x: int, y: int) -> int:
        return self.tables.meet[x][y]

    def join(self, x: int, y: int) -> int:
        return self.tables.join[x][y]

    def height(self, x: int) -> int:
        return self.tables.height[x]

    def cover_pairs(self) -> Iterator[tuple[int, int]]:
        for i, ups in enumerate(self.upper):
            for j in ups:
                yield i, j

    def __repr__(self) -> str:
        return f"PlanarDiagram(n={self.n}, name={self.name!r})"


def _mask(ids: Sequence[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def build_diagram(
    upper: Sequence[Sequence[int]],
    *,
    lower: Optional[Sequence[Sequence[int]]] = None,
    labels: Optional[Sequence[Optional[str]]] = None,
    name: Optional[str] = None,
) -> PlanarDiagram:
    """Validate raw ordered cover lists and attach order tables.

    ``upper`` gives the ordered upper covers per element. The digraph
    must be acyclic, a genuine cover relation, and bounded (unique
    least and greatest element); meets and joins must exist for all
    pairs. Raises CycleDetected, NotBounded, DuplicateCover,
    NotALattice or ValidationError accordingly.
    """
    n = len(upper)
    if n == 0:
        raise NotBounded("empty diagram has no least element")
    ups: list[list[int]] = []
    for i, raw in enumerate(upper):
        row = [int(j) for j in raw]
        for j in row:
            if j < 0 or j >= n:
                raise ValidationError(f"element {i} lists cover {j} outside [0, {n})")
            if j == i:
                raise CycleDetected(f"element {i} covers itself")
        if len(set(row)) != len(row):
            raise DuplicateCover(f"element {i} lists a cover twice: {row}")
        ups.append(row)

    order = posets.topological_order(ups)
    up_mask = posets.up_masks(ups, order)
    for i, row in enumerate(ups):
        for j in row:
            if any(k != j and (up_mask[k] >> j) & 1 for k in row):
                raise ValidationError(f"edge {i} -< {j} is implied by a longer chain")

    down_mask = [0] * n
    for i in range(n):
        for j in posets.bit_indices(up_mask[i]):
            down_mask[j] |= 1 << i

    minimal = [i for i in range(n) if down_mask[i] == 1 << i]
    maximal = [i for i in range(n) if up_mask[i] == 1 << i]
    if len(minimal) != 1:
        raise NotBounded(f"no unique least element; minimal elements: {minimal}")
    if len(maximal) != 1:
        raise NotBounded(f"no unique greatest element; maximal elements: {maximal}")
    bottom, top = minimal[0], maximal[0]

    height = posets.heights(ups, order)
    left_rank = _left_preorder(ups, bottom)

    if lower is None:
        lows = [sorted(pre, key=left_rank.__getitem__) for pre in posets.predecessor_lists(ups)]
    else:
        lows = [[int(j) for j in row] for row in lower]
        expected = posets.predecessor_lists(ups)
        for j in range(n):
            if sorted(lows[j]) != sorted(expected[j]):
                raise ValidationError(
                    f"lower covers of {j} disagree with the upper lists: "
                    f"{sorted(lows[j])} vs {sorted(expected[j])}"
                )

    for side in (0, -1):
        x, steps = bottom, 0
        while x != top:
            x = ups[x][side]
            steps += 1
            if steps > n:
                raise ValidationError("boundary walk does not terminate at the top")

    down_index = {down_mask[i]: i for i in range(n)}
    up_index = {up_mask[i]: i for i in range(n)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        dx, ux = down_mask[x], up_mask[x]
        for y in range(x, n):
            m = down_index.get(dx & down_mask[y])
            if m is None:
                raise NotALattice(f"elements {x} and {y} have no meet")
            meet[x][y] = meet[y][x] = m
            j = up_index.get(ux & up_mask[y])
            if j is None:
                raise NotALattice(f"elements {x} and {y} have no join")
            join[x][y] = join[y][x] = j

    tables = OrderTables(
        up=tuple(up_mask),
        down=tuple(down_mask),
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
        height=tuple(height),
    )
    lab = None if labels is None else tuple(labels)
    if lab is not None and len(lab) != n:
        raise ValidationError(f"{len(lab)} labels for {n} elements")
    return PlanarDiagram(
        tuple(tuple(r) for r in ups),
        tuple(tuple(r) for r in lows),
        lab,
        name,
        tables,
        bottom,
        top,
        tuple(left_rank),
    )


def _left_preorder(upper: Sequence[Sequence[int]], bottom: int) -> list[int]:
    """First-visit order of a depth-first walk taking leftmost covers first."""
    rank = [-1] * len(upper)
    stack = [bottom]
    count = 0
    while stack:
        x = stack.pop()
        if rank[x] >= 0:
            continue
        rank[x] = count
        count += 1
        stack.extend(reversed(upper[x]))
    return rank


def is_graded(diagram: PlanarDiagram) -> bool:
    """Every cover raises the height by exactly one."""
    h = diagram.tables.height
    return all(h[j] == h[i] + 1 for i, j in diagram.cover_pairs())


def is_semimodular(diagram: PlanarDiagram) -> bool:
    """Whenever x meet y is covered by x, the join covers y."""
    n = diagram.n
    meet, join = diagram.tables.meet, diagram.tables.join
    cov = diagram.cover_mask
    for x in range(n):
        mx = meet[x]
        jx = join[x]
        for y in range(n):
            m = mx[y]
            if m != x and (cov[m] >> x) & 1 and not (cov[y] >> jx[y]) & 1:
                return False
    return True


def find_m3(diagram: PlanarDiagram):
    """A diamond sublattice (o, x, y, z, t) if one exists, else None."""
    n = diagram.n
    up, down = diagram.tables.up, diagram.tables.down
    meet, join = diagram.tables.meet, diagram.tables.join
    full = (1 << n) - 1
    inc = [full & ~(up[i] | down[i]) for i in range(n)]
    for x in range(n):
        for y in posets.bit_indices(inc[x] >> (x + 1) << (x + 1)):
            m, j = meet[x][y], join[x][y]
            both = inc[x] & inc[y]
            for z in posets.bit_indices(both >> (y + 1) << (y + 1)):
                if meet[x][z] == m and meet[y][z] == m and join[x][z] == j and join[y][z] == j:
                    return m, x, y, z, j
    return None


def find_n5(diagram: PlanarDiagram):
    """A pentagon sublattice (o, z, x, y, t) with z < x if one exists."""
    n = diagram.n
    up, down = diagram.tables.up, diagram.tables.down
    meet, join = diagram.tables.meet, diagram.tables.join
    full = (1 << n) - 1
    inc = [full & ~(up[i] | down[i]) for i in range(n)]
    for z in range(n):
        for x in posets.bit_indices(up[z] & ~(1 << z)):
            for y in posets.bit_indices(inc[z] & inc[x]):
                if meet[x][y] == meet[z][y] and join[x][y] == join[z][y]:
                    return meet[x][y], z, x, y, join[x][y]
    return None


def is_slim(diagram: PlanarDiagram) -> bool:
    """No diamond sublattice anywhere in the diagram."""
    return find_m3(diagram) is None


def four_cells(diagram: PlanarDiagram) -> list[FourCell]:
    """All covering squares, ordered by bottom element then left atom slot.

    A square is a pair of upper covers adjacent in the bottom's list
    whose meet is the bottom, whose join covers both atoms, and whose
    atoms are adjacent in the top's lower list.
    """
    cells = []
    cov = diagram.cover_mask
    for o in range(diagram.n):
        row = diagram.upper[o]
        for k in range(len(row) - 1):
            a_l, a_r = row[k], row[k + 1]
            if diagram.meet(a_l, a_r) != o:
                continue
            t = diagram.join(a_l, a_r)
            if not ((cov[a_l] >> t) & 1 and (cov[a_r] >> t) & 1):
                continue
            low = diagram.lower[t]
            pos = low.index(a_l)
            if pos + 1 >= len(low) or low[pos + 1] != a_r:
                continue
            cells.append(FourCell(o, a_l, a_r, t))
    return cells


def boundary_chains(diagram: PlanarDiagram) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Leftmost and rightmost cover walks from bottom to top."""
    chains = []
    for side in (0, -1):
        x = diagram.bottom
        chain = [x]
        while x != diagram.top:
            x = diagram.upper[x][side]
            chain.append(x)
        chains.append(tuple(chain))
    return chains[0], chains[1]


def canonical_key(diagram: PlanarDiagram) -> bytes:
    """Canonical byte string; equal exactly for isomorphic diagrams."""
    if diagram._key is None:
        diagram._key = posets.canonical_key(diagram.upper)
    return diagram._key


def is_isomorphic(a: PlanarDiagram, b: PlanarDiagram) -> bool:
    """Unlabeled order isomorphism, decided through canonical keys."""
    return a.n == b.n and canonical_key(a) == canonical_key(b)
