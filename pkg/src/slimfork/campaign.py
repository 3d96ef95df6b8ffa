"""Exhaustive enumeration of the grid-plus-forks family and claim checks.

Enumeration runs breadth first over fork counts. One work unit expands
a single frontier diagram at every covering square; unit results are
merged in sorted order with first-witness-wins, so the family and the
chosen witness scripts are identical for any work-order permutation.
Units are pure functions over immutable diagrams and may be executed
concurrently; the merge is the only sequential step.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .congruence import (
    CongruenceLattice,
    at_most_two_covers,
    congruence_lattice,
    dual_atom_count,
    filter_candidate,
    is_prime_ideal,
    ji_poset_of,
    lattice_isomorphic,
    prime_ideal_congruence,
    principal_ideal,
)
from .construct import (
    ForkScript,
    GridSpec,
    RectangularProfile,
    grid,
    insert_fork,
    rectangular_profile,
)
from .diagram import PlanarDiagram, build_diagram, canonical_key, four_cells
from .errors import (
    BudgetExceeded,
    NotRectangular,
    ValidationError,
    ValidatorFailed,
)

CLAIM_P2 = "p2"
CLAIM_P1 = "p1"
CLAIM_PRIME_IDEALS = "prime_ideals"
CLAIM_NOT_C3 = "not_c3"
CLAIM_NAMES = (CLAIM_P2, CLAIM_P1, CLAIM_PRIME_IDEALS, CLAIM_NOT_C3)

NOTE_SINGLE_DUAL_ATOM = "single dual atom"
NOTE_P1_VIOLATION = "a join-irreducible element has more than two covers"


@dataclass(frozen=True)
class EnumSpec:
    """Bounds for the family enumeration."""

    p_max: int
    q_max: int
    max_forks: int
    max_elements: int = 40
    max_classes: int = 100_000

    def __post_init__(self):
        if self.p_max < 2 or self.q_max < 2:
            raise ValidationError("grid bounds must both be at least 2")
        if self.max_forks < 0:
            raise ValidationError("max_forks must be nonnegative")
        if self.max_elements < 0:
            raise ValidationError("max_elements must be nonnegative")
        if self.max_classes < 1:
            raise ValidationError("max_classes must be positive")

    def to_obj(self) -> dict:
        return {
            "p_max": self.p_max,
            "q_max": self.q_max,
            "max_forks": self.max_forks,
            "max_elements": self.max_elements,
            "max_classes": self.max_classes,
        }


@dataclass(frozen=True)
class FamilyEntry:
    """One isomorphism class: representative, witness script, profile."""

    key: bytes
    diagram: PlanarDiagram
    script: ForkScript
    profile: RectangularProfile
    forks: int

    def stats(self) -> dict:
        return {
            "n": self.diagram.n,
            "forks": self.forks,
            "height": self.diagram.height(self.diagram.top),
            "cells": len(four_cells(self.diagram)),
        }


class FamilyIndex:
    """Isomorphism classes keyed by canonical form, iterated in key order."""

    def __init__(self, spec: EnumSpec, entries: dict[bytes, FamilyEntry]):
        self.spec = spec
        self._entries = entries

    def __len__(self) -> int:
        return len(self._entries)

    def keys(self) -> list[bytes]:
        return sorted(self._entries)

    def members(self) -> list[FamilyEntry]:
        return [self._entries[k] for k in self.keys()]

    def get(self, key: bytes) -> Optional[FamilyEntry]:
        return self._entries.get(key)


def _candidate(diagram: PlanarDiagram, script: ForkScript, forks: int) -> FamilyEntry:
    try:
        profile = rectangular_profile(diagram)
    except NotRectangular as exc:
        raise ValidatorFailed(
            f"enumerated diagram from {script.to_obj()} is not rectangular: {exc}"
        ) from exc
    return FamilyEntry(canonical_key(diagram), diagram, script, profile, forks)


def _expand(entry: FamilyEntry, spec: EnumSpec, rng: Optional[random.Random]) -> list[FamilyEntry]:
    """One work unit: fork the entry's diagram at every covering square."""
    cells = four_cells(entry.diagram)
    if rng is not None:
        rng.shuffle(cells)
    out = []
    for cell in cells:
        result = insert_fork(entry.diagram, cell)
        if result.diagram.n > spec.max_elements:
            continue
        script = ForkScript(entry.script.grid, entry.script.steps + (cell.o,))
        out.append(_candidate(result.diagram, script, entry.forks + 1))
    return out


def _merge(entries: dict[bytes, FamilyEntry], wave: list[FamilyEntry], spec: EnumSpec) -> list[FamilyEntry]:
    added = []
    for cand in sorted(wave, key=lambda e: (e.key, e.script.sort_key())):
        if cand.key in entries:
            continue
        entries[cand.key] = cand
        added.append(cand)
        if len(entries) > spec.max_classes:
            raise BudgetExceeded(f"family exceeded {spec.max_classes} isomorphism classes")
    return added


def enumerate_family(spec: EnumSpec, shuffle_seed: Optional[int] = None) -> FamilyIndex:
    """All grid-plus-forks diagrams within bounds, deduplicated up to isomorphism.

    ``shuffle_seed`` permutes work order only; the resulting index,
    including witness scripts, is the same for every seed.
    """
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    entries: dict[bytes, FamilyEntry] = {}
    seeds = []
    for p in range(2, spec.p_max + 1):
        for q in range(2, spec.q_max + 1):
            if p * q <= spec.max_elements:
                gspec = GridSpec(p, q)
                seeds.append(_candidate(grid(gspec), ForkScript(gspec), 0))
    frontier = _merge(entries, seeds, spec)
    for _ in range(spec.max_forks):
        units = list(frontier)
        if rng is not None:
            rng.shuffle(units)
        wave: list[FamilyEntry] = []
        for unit in units:
            wave.extend(_expand(unit, spec, rng))
        frontier = _merge(entries, wave, spec)
        if not frontier:
            break
    return FamilyIndex(spec, entries)


@dataclass
class ClaimReport:
    """Machine-readable verdicts for the family-wide claims."""

    family_size: int
    checked: dict[str, int]
    passed: dict[str, int]
    failed: dict[str, int]
    counterexamples: list[dict]
    wall_time_s: float
    enum_spec: EnumSpec

    def ok(self) -> bool:
        return not self.counterexamples

    def to_obj(self, include_timing: bool = True) -> dict:
        obj = {
            "family_size": self.family_size,
            "claims": {
                name: {
                    "checked": self.checked.get(name, 0),
                    "passed": self.passed.get(name, 0),
                    "failed": self.failed.get(name, 0),
                }
                for name in CLAIM_NAMES
            },
            "counterexamples": self.counterexamples,
            "ok": self.ok(),
            "enum_spec": self.enum_spec.to_obj(),
            "tool_version": __version__,
        }
        if include_timing:
            obj["wall_time_s"] = round(self.wall_time_s, 3)
        return obj


def _chain3() -> PlanarDiagram:
    return build_diagram([[1], [2], []], name="chain-3")


def verify_claims(family: FamilyIndex) -> ClaimReport:
    """Check every family member against the four family-wide claims.

    p2: more than two elements implies at least two dual atoms in the
    congruence lattice. p1: every join-irreducible congruence has at
    most two covers among join-irreducible congruences. prime_ideals:
    when neither boundary element is the top, the two boundary ideals
    are distinct prime ideals whose congruences are two distinct dual
    atoms. not_c3: no congruence lattice is the three-element chain.
    Failures are counted and carry the replayable witness script.
    """
    start = time.perf_counter()
    checked = {name: 0 for name in CLAIM_NAMES}
    passed = {name: 0 for name in CLAIM_NAMES}
    failed = {name: 0 for name in CLAIM_NAMES}
    counterexamples: list[dict] = []
    chain3 = _chain3()

    def record(name: str, ok: bool, entry: FamilyEntry, detail: str) -> None:
        checked[name] += 1
        if ok:
            passed[name] += 1
        else:
            failed[name] += 1
            counterexamples.append(
                {"claim": name, "script": entry.script.to_obj(), "detail": detail}
            )

    for entry in family.members():
        lattice = entry.diagram
        con = congruence_lattice(lattice)

        if lattice.n > 2:
            count = dual_atom_count(con)
            record(CLAIM_P2, count >= 2, entry, f"{count} dual atom(s)")

        ji = ji_poset_of(con)
        record(CLAIM_P1, at_most_two_covers(ji.up), entry, "a join-irreducible congruence has more than two covers")

        profile = entry.profile
        if profile.c_l != lattice.top and profile.c_r != lattice.top:
            ok, detail = _prime_ideal_claim(lattice, profile, con)
            record(CLAIM_PRIME_IDEALS, ok, entry, detail)

        record(
            CLAIM_NOT_C3,
            not (len(con) == 3 and lattice_isomorphic(con, chain3)),
            entry,
            "congruence lattice is the three-element chain",
        )

    return ClaimReport(
        family_size=len(family),
        checked=checked,
        passed=passed,
        failed=failed,
        counterexamples=counterexamples,
        wall_time_s=time.perf_counter() - start,
        enum_spec=family.spec,
    )


def _prime_ideal_claim(
    lattice: PlanarDiagram, profile: RectangularProfile, con: CongruenceLattice
) -> tuple[bool, str]:
    left = principal_ideal(lattice, profile.c_l)
    right = principal_ideal(lattice, profile.c_r)
    if set(left.members) == set(right.members):
        return False, "boundary ideals coincide"
    if not is_prime_ideal(lattice, left):
        return False, f"[0, {profile.c_l}] is not a prime ideal"
    if not is_prime_ideal(lattice, right):
        return False, f"[0, {profile.c_r}] is not a prime ideal"
    theta_l = prime_ideal_congruence(lattice, left)
    theta_r = prime_ideal_congruence(lattice, right)
    if theta_l == theta_r:
        return False, "boundary ideals induce the same congruence"
    coatoms = {con.members[i] for i in con.coatom_indices()}
    if theta_l not in coatoms or theta_r not in coatoms:
        return False, "an induced congruence is not a dual atom"
    return True, ""


@dataclass
class SearchResult:
    """Outcome of a representation search for one target lattice."""

    witnesses: list[ForkScript]
    note: str
    scanned: int

    def to_obj(self) -> dict:
        return {
            "witnesses": [w.to_obj() for w in self.witnesses],
            "note": self.note,
            "scanned": self.scanned,
        }


def search_representation(target: PlanarDiagram, spec: EnumSpec) -> SearchResult:
    """Family members whose congruence lattice matches the target.

    The necessary-condition filter runs first for targets with more
    than two elements: a single dual atom rejects the target outright,
    without any scan, as does a join-irreducible element with more
    than two covers. Otherwise the whole family is scanned and every
    witness script is returned.
    """
    if target.n > 2:
        profile = filter_candidate(target)
        if not profile.p2_ok:
            return SearchResult([], NOTE_SINGLE_DUAL_ATOM, 0)
        if not profile.p1_ok:
            return SearchResult([], NOTE_P1_VIOLATION, 0)
    family = enumerate_family(spec)
    witnesses = []
    for entry in family.members():
        con = congruence_lattice(entry.diagram)
        if len(con) != target.n:
            continue
        if lattice_isomorphic(con, target):
            witnesses.append(entry.script)
    if witnesses:
        note = f"{len(witnesses)} witness(es) among {len(family)} classes"
    else:
        note = f"no witness among {len(family)} classes"
    return SearchResult(witnesses, note, len(family))
