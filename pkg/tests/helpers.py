"""Shared corpus of small lattice diagrams used across the test suite."""

from __future__ import annotations

import random

from slimfork import (
    ForkResult,
    GridSpec,
    PlanarDiagram,
    build_diagram,
    four_cells,
    grid,
    insert_fork,
)


def chain(k: int) -> PlanarDiagram:
    return build_diagram([[i + 1] for i in range(k - 1)] + [[]], name=f"chain-{k}")


def n5() -> PlanarDiagram:
    # 0 -< a=1 -< b=2 -< 4 and 0 -< c=3 -< 4
    return build_diagram([[1, 3], [2], [4], [4], []], name="n5")


def m3() -> PlanarDiagram:
    return build_diagram([[1, 2, 3], [4], [4], [4], []], name="m3")


def boolean_cube() -> PlanarDiagram:
    return build_diagram(
        [[1, 2, 3], [4, 5], [4, 6], [5, 6], [7], [7], [7], []], name="b3"
    )


def single_coatom_candidate() -> PlanarDiagram:
    # Boolean square with one extra element on top: distributive, one dual atom.
    return build_diagram([[1, 2], [3], [3], [4], []], name="b2-tail")


def s7_result() -> ForkResult:
    g = grid(GridSpec(2, 2))
    return insert_fork(g, four_cells(g)[0])


def s7() -> PlanarDiagram:
    return s7_result().diagram


def fork_at(diagram: PlanarDiagram, bottom: int) -> ForkResult:
    cells = [c for c in four_cells(diagram) if c.o == bottom]
    assert len(cells) == 1, f"bottom {bottom} matched {cells}"
    return insert_fork(diagram, cells[0])


def relabel(diagram: PlanarDiagram, perm: list[int]) -> PlanarDiagram:
    """Copy of the diagram with element i renamed to perm[i]."""
    upper = [[] for _ in range(diagram.n)]
    for i in range(diagram.n):
        upper[perm[i]] = [perm[j] for j in diagram.upper[i]]
    return build_diagram(upper, name=diagram.name)


def random_permutation(n: int, rng: random.Random) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def oracle_corpus() -> list[PlanarDiagram]:
    """Diagrams small enough for the all-partitions oracle."""
    return [
        chain(2),
        chain(3),
        grid(GridSpec(2, 2)),
        grid(GridSpec(2, 3)),
        n5(),
        m3(),
        s7(),
    ]


def lattice_corpus() -> list[PlanarDiagram]:
    """Wider corpus, including diagrams beyond oracle range."""
    return oracle_corpus() + [
        chain(4),
        grid(GridSpec(3, 2)),
        grid(GridSpec(3, 3)),
        grid(GridSpec(4, 4)),
        fork_at(grid(GridSpec(3, 3)), 4).diagram,
        fork_at(grid(GridSpec(3, 2)), 2).diagram,
        fork_at(s7(), 0).diagram,
    ]


def semimodular_corpus() -> list[PlanarDiagram]:
    return [d for d in lattice_corpus() if d.name != "n5"]
