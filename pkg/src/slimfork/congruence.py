"""Congruences of a finite lattice diagram.

Provides principal congruences by fixpoint closure, the full
congruence lattice (materialised through the down-sets of its
join-irreducible members, which is exact because congruence lattices
of lattices are distributive), a brute-force oracle that tests every
set partition, dual-atom counting, prime ideals and their two-block
congruences, and the necessary-condition filter applied to candidate
congruence lattices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from . import posets
from .diagram import PlanarDiagram, canonical_key, find_m3, find_n5
from .errors import (
    NotAnIdeal,
    NotDistributive,
    NotPrime,
    TooLarge,
    TooSmall,
    ValidatorFailed,
)

ORACLE_MAX_ELEMENTS = 8

P2_HOLDS = "holds"
P2_EXEMPT = "exempt"
P2_FAILS = "fails"


@dataclass(frozen=True)
class Partition:
    """An equivalence relation stored as a block index per element.

    Block indices are normalized to first-occurrence order, so equal
    relations compare and hash equal.
    """

    block_of: tuple[int, ...]

    @staticmethod
    def normalize(assign: Sequence) -> "Partition":
        seen: dict = {}
        out = []
        for a in assign:
            if a not in seen:
                seen[a] = len(seen)
            out.append(seen[a])
        return Partition(tuple(out))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def single_block(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.block_of)

    @property
    def num_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Canonical block form: sorted members, blocks by first element."""
        buckets: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.block_of):
            buckets[b].append(x)
        return tuple(tuple(b) for b in buckets)

    def same(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def refines(self, other: "Partition") -> bool:
        """Every block of self lies inside one block of other."""
        image: dict[int, int] = {}
        for mine, theirs in zip(self.block_of, other.block_of):
            known = image.setdefault(mine, theirs)
            if known != theirs:
                return False
        return True

    def join(self, other: "Partition") -> "Partition":
        """Transitive closure of the union of the two relations."""
        n = len(self.block_of)
        parent = list(range(n))
        size = [1] * n
        for src in (self.block_of, other.block_of):
            first: dict[int, int] = {}
            for i, b in enumerate(src):
                j = first.setdefault(b, i)
                if j != i:
                    _union(parent, size, i, j)
        return Partition.normalize([_find(parent, i) for i in range(n)])

    def meet(self, other: "Partition") -> "Partition":
        """Common refinement."""
        return Partition.normalize(list(zip(self.block_of, other.block_of)))

    def sort_key(self) -> tuple:
        return (self.n - self.num_blocks, self.blocks())


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent: list[int], size: list[int], a: int, b: int) -> bool:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra == rb:
        return False
    if size[ra] < size[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    size[ra] += size[rb]
    return True


def is_congruence(diagram: PlanarDiagram, part: Partition) -> bool:
    """Compatibility of the relation with meet and join.

    Each element is compared against its block representative; by
    transitivity that covers every related pair.
    """
    join_t, meet_t = diagram.tables.join, diagram.tables.meet
    bo = part.block_of
    first: dict[int, int] = {}
    for x in range(diagram.n):
        r = first.setdefault(bo[x], x)
        if r == x:
            continue
        jx, jr, mx, mr = join_t[x], join_t[r], meet_t[x], meet_t[r]
        for z in range(diagram.n):
            if bo[jx[z]] != bo[jr[z]] or bo[mx[z]] != bo[mr[z]]:
                return False
    return True


def principal_congruence(diagram: PlanarDiagram, a: int, b: int) -> Partition:
    """Smallest congruence collapsing a with b.

    Fixpoint closure: every merged pair (x, y) forces the merges of
    (x v z, y v z) and (x ^ z, y ^ z) for all z, with blocks held in a
    union-by-size forest.
    """
    n = diagram.n
    join_t, meet_t = diagram.tables.join, diagram.tables.meet
    parent = list(range(n))
    size = [1] * n
    pending: deque[tuple[int, int]] = deque([(a, b)])
    while pending:
        x, y = pending.popleft()
        if not _union(parent, size, x, y):
            continue
        jx, jy, mx, my = join_t[x], join_t[y], meet_t[x], meet_t[y]
        for z in range(n):
            jz, jw = jx[z], jy[z]
            if _find(parent, jz) != _find(parent, jw):
                pending.append((jz, jw))
            mz, mw = mx[z], my[z]
            if _find(parent, mz) != _find(parent, mw):
                pending.append((mz, mw))
    return Partition.normalize([_find(parent, i) for i in range(n)])


@dataclass(frozen=True)
class CongruenceLattice:
    """All congruences of one diagram ordered by refinement.

    ``up`` holds reflexive refinement masks over member indices;
    members are sorted coarsest-last, so the identity partition comes
    first and the all-collapsing one last.
    """

    members: tuple[Partition, ...]
    up: tuple[int, ...]
    bottom: int
    top: int

    def __len__(self) -> int:
        return len(self.members)

    def leq(self, i: int, j: int) -> bool:
        return (self.up[i] >> j) & 1 == 1

    def cover_lists(self) -> list[list[int]]:
        return posets.cover_lists_from_up(self.up)

    def coatom_indices(self) -> tuple[int, ...]:
        covs = self.cover_lists()
        return tuple(i for i in range(len(self.members)) if self.top in covs[i])

    def atom_indices(self) -> tuple[int, ...]:
        return tuple(self.cover_lists()[self.bottom])


@dataclass(frozen=True)
class JiPoset:
    """The join-irreducible congruences with their refinement order."""

    members: tuple[Partition, ...]
    up: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def cover_lists(self) -> list[list[int]]:
        return posets.cover_lists_from_up(self.up)

    def maximal_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.members)) if self.up[i] == 1 << i)


def _lattice_from_members(members: Iterable[Partition]) -> CongruenceLattice:
    """Assemble a congruence lattice from an explicit member set."""
    ms = sorted(set(members), key=Partition.sort_key)
    k = len(ms)
    up = [0] * k
    for i in range(k):
        for j in range(k):
            if ms[i].refines(ms[j]):
                up[i] |= 1 << j
    n = ms[0].n if ms else 0
    bottom = ms.index(Partition.singletons(n))
    top = ms.index(Partition.single_block(n))
    return CongruenceLattice(tuple(ms), tuple(up), bottom, top)


def all_congruences_oracle(diagram: PlanarDiagram) -> CongruenceLattice:
    """Brute-force oracle: test every set partition for compatibility.

    Exponential in the element count; refuses diagrams with more than
    ORACLE_MAX_ELEMENTS elements.
    """
    if diagram.n > ORACLE_MAX_ELEMENTS:
        raise TooLarge(
            f"oracle enumerates all partitions; {diagram.n} > {ORACLE_MAX_ELEMENTS} elements"
        )
    found = []
    for rgs in _restricted_growth_strings(diagram.n):
        part = Partition(rgs)
        if is_congruence(diagram, part):
            found.append(part)
    return _lattice_from_members(found)


def _restricted_growth_strings(n: int):
    """All set partitions of range(n) as normalized block vectors."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, width: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(width + 1):
            a[i] = v
            yield from rec(i + 1, width + 1 if v == width else width)

    yield from rec(1, 1)


def congruence_lattice(diagram: PlanarDiagram) -> CongruenceLattice:
    """Join-closure of the principal congruences of all covering pairs.

    The distinct principal congruences of covering pairs are exactly
    the join-irreducible congruences; every congruence is the join of
    a down-set of them, and distinct down-sets give distinct joins.
    """
    gens = sorted(
        {principal_congruence(diagram, a, b) for a, b in diagram.cover_pairs()},
        key=Partition.sort_key,
    )
    k = len(gens)
    strict_down = [0] * k
    for i in range(k):
        for j in range(k):
            if i != j and gens[j].refines(gens[i]):
                strict_down[i] |= 1 << j

    bottom_part = Partition.singletons(diagram.n)
    items: list[tuple[int, Partition]] = [(0, bottom_part)]
    order = sorted(range(k), key=lambda i: (strict_down[i].bit_count(), i))
    for e in order:
        bit = 1 << e
        need = strict_down[e]
        gen = gens[e]
        grown = [(mask | bit, part.join(gen)) for mask, part in items if need & ~mask == 0]
        items.extend(grown)

    mask_of: dict[Partition, int] = {}
    for mask, part in items:
        mask_of.setdefault(part, mask)
    ms = sorted(mask_of, key=Partition.sort_key)
    masks = [mask_of[p] for p in ms]
    up = [0] * len(ms)
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if mi & ~mj == 0:
                up[i] |= 1 << j
    bottom = ms.index(bottom_part)
    top = ms.index(Partition.single_block(diagram.n))
    return CongruenceLattice(tuple(ms), tuple(up), bottom, top)


def ji_poset_of(con: CongruenceLattice) -> JiPoset:
    """Members with exactly one lower cover, in their refinement order."""
    covs = con.cover_lists()
    lower_count = [0] * len(con.members)
    for i, ups in enumerate(covs):
        for j in ups:
            lower_count[j] += 1
    ji = [i for i in range(len(con.members)) if lower_count[i] == 1]
    index = {orig: new for new, orig in enumerate(ji)}
    up = [0] * len(ji)
    for new, orig in enumerate(ji):
        for other in posets.bit_indices(con.up[orig]):
            if other in index:
                up[new] |= 1 << index[other]
    return JiPoset(tuple(con.members[i] for i in ji), tuple(up))


def ji_congruence_poset(diagram: PlanarDiagram) -> JiPoset:
    """The ordered set of join-irreducible congruences of the diagram."""
    return ji_poset_of(congruence_lattice(diagram))


def dual_atom_count(lattice: Union[CongruenceLattice, PlanarDiagram]) -> int:
    """Number of elements covered by the top.

    For a congruence lattice the count is taken both from the coatoms
    and from the maximal join-irreducible members; by distributivity
    the two must agree, and disagreement raises.
    """
    if isinstance(lattice, CongruenceLattice):
        via_coatoms = len(lattice.coatom_indices())
        via_ji = len(ji_poset_of(lattice).maximal_indices())
        if via_coatoms != via_ji:
            raise ValidatorFailed(
                f"coatom count {via_coatoms} disagrees with maximal join-irreducibles {via_ji}"
            )
        return via_coatoms
    return len(lattice.lower[lattice.top])


def at_most_two_covers(up: Sequence[int]) -> bool:
    """Whether every element of the poset has at most two upper covers."""
    return posets.max_upper_covers(up) <= 2


def check_p1(diagram: PlanarDiagram, con: CongruenceLattice | None = None) -> bool:
    """Every join-irreducible congruence has at most two covers among
    the join-irreducible congruences."""
    if con is None:
        con = congruence_lattice(diagram)
    return at_most_two_covers(ji_poset_of(con).up)


def check_p2(diagram: PlanarDiagram, con: CongruenceLattice | None = None) -> str:
    """At least two dual atoms in the congruence lattice.

    Diagrams with at most two elements are exempt; otherwise returns
    "holds" or "fails".
    """
    if diagram.n <= 2:
        return P2_EXEMPT
    if con is None:
        con = congruence_lattice(diagram)
    return P2_HOLDS if dual_atom_count(con) >= 2 else P2_FAILS


@dataclass(frozen=True)
class PrincipalIdeal:
    """The down-set of a generator element."""

    generator: int
    members: tuple[int, ...]


def principal_ideal(diagram: PlanarDiagram, x: int) -> PrincipalIdeal:
    """All elements below x, ascending."""
    return PrincipalIdeal(x, tuple(posets.bit_indices(diagram.tables.down[x])))


def _ideal_members(diagram: PlanarDiagram, ideal) -> frozenset[int]:
    members = frozenset(ideal.members if isinstance(ideal, PrincipalIdeal) else ideal)
    down = diagram.tables.down
    for x in members:
        if any(y not in members for y in posets.bit_indices(down[x])):
            raise NotAnIdeal(f"subset is not down-closed below element {x}")
    join_t = diagram.tables.join
    for x in members:
        for y in members:
            if join_t[x][y] not in members:
                raise NotAnIdeal(f"subset is not join-closed at {x} v {y}")
    return members


def is_prime_ideal(diagram: PlanarDiagram, ideal) -> bool:
    """Whether a (validated) ideal is proper, nonempty and prime.

    Prime: a meet can only land in the ideal when one of its arguments
    is already there; equivalently the complement is meet-closed.
    Raises NotAnIdeal when the input is not down- and join-closed.
    """
    members = _ideal_members(diagram, ideal)
    if not members or len(members) == diagram.n:
        return False
    outside = [x for x in range(diagram.n) if x not in members]
    meet_t = diagram.tables.meet
    for x in outside:
        mx = meet_t[x]
        for y in outside:
            if mx[y] in members:
                return False
    return True


def prime_ideal_congruence(diagram: PlanarDiagram, ideal) -> Partition:
    """The two-block partition separating a prime ideal from its complement.

    Always a congruence, and always a dual atom of the congruence
    lattice since any strictly coarser congruence must merge the two
    blocks. Both facts are re-checked directly: non-primality raises
    NotPrime and a compatibility failure raises ValidatorFailed.
    """
    if not is_prime_ideal(diagram, ideal):
        raise NotPrime("the given ideal is not a proper nonempty prime ideal")
    members = frozenset(ideal.members if isinstance(ideal, PrincipalIdeal) else ideal)
    part = Partition.normalize([0 if x in members else 1 for x in range(diagram.n)])
    if not is_congruence(diagram, part):
        raise ValidatorFailed("prime ideal did not induce a congruence")
    return part


@dataclass(frozen=True)
class CandidateProfile:
    """Necessary-condition summary for a candidate congruence lattice."""

    p1_ok: bool
    p2_ok: bool


def filter_candidate(candidate: PlanarDiagram) -> CandidateProfile:
    """Screen a distributive lattice against the two necessary conditions.

    p1_ok: every join-irreducible element has at most two covers in the
    order of join-irreducible elements. p2_ok: the lattice has at least
    two dual atoms. Raises TooSmall for candidates with at most two
    elements and NotDistributive when a pentagon or diamond exists.
    """
    if candidate.n <= 2:
        raise TooSmall(f"candidate must have more than 2 elements, got {candidate.n}")
    if find_m3(candidate) is not None:
        raise NotDistributive("candidate contains a diamond sublattice")
    if find_n5(candidate) is not None:
        raise NotDistributive("candidate contains a pentagon sublattice")
    ji = [
        x for x in range(candidate.n)
        if x != candidate.bottom and len(candidate.lower[x]) == 1
    ]
    index = {x: i for i, x in enumerate(ji)}
    up = [0] * len(ji)
    for i, x in enumerate(ji):
        for y in posets.bit_indices(candidate.tables.up[x]):
            if y in index:
                up[i] |= 1 << index[y]
    p1_ok = at_most_two_covers(up)
    p2_ok = dual_atom_count(candidate) >= 2
    return CandidateProfile(p1_ok, p2_ok)


def lattice_isomorphic(a, b) -> bool:
    """Order isomorphism of finite lattices.

    Accepts diagrams and congruence lattices in either slot; decided by
    comparing canonical keys of the cover structures.
    """
    return _structure_key(a) == _structure_key(b)


def _structure_key(x) -> bytes:
    if isinstance(x, CongruenceLattice):
        return posets.canonical_key(x.cover_lists())
    return canonical_key(x)
