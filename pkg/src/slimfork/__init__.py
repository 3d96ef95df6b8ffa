"""Slim rectangular lattices by fork insertion, their congruence
lattices, and exhaustive verification of congruence properties over the
grid-plus-forks family."""

__version__ = "0.1.0"

from .diagram import (
    FourCell,
    OrderTables,
    PlanarDiagram,
    boundary_chains,
    build_diagram,
    canonical_key,
    four_cells,
    is_graded,
    is_isomorphic,
    is_semimodular,
    is_slim,
)
from .construct import (
    ForkResult,
    ForkScript,
    GridSpec,
    RectangularProfile,
    grid,
    insert_fork,
    rectangular_profile,
    run_script,
)
from .congruence import (
    CandidateProfile,
    CongruenceLattice,
    JiPoset,
    P2_EXEMPT,
    P2_FAILS,
    P2_HOLDS,
    Partition,
    PrincipalIdeal,
    all_congruences_oracle,
    at_most_two_covers,
    check_p1,
    check_p2,
    congruence_lattice,
    dual_atom_count,
    filter_candidate,
    is_congruence,
    is_prime_ideal,
    ji_congruence_poset,
    ji_poset_of,
    lattice_isomorphic,
    prime_ideal_congruence,
    principal_congruence,
    principal_ideal,
)
from .campaign import (
    ClaimReport,
    EnumSpec,
    FamilyEntry,
    FamilyIndex,
    SearchResult,
    enumerate_family,
    search_representation,
    verify_claims,
)
from . import errors, io, posets

__all__ = [name for name in dir() if not name.startswith("_")]
