"""Exhaustive reference computations for small instances.

These enumerate subsets outright and exist to cross-check the search
engines: minimal diagnoses, minimal conflicts, and minimal hitting sets
(diagnoses are exactly the minimal hitting sets of the minimal conflicts,
and vice versa). Guarded to small KBs since they are exponential.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .reasoning import Dpi

MAX_BRUTE_FORCE_AXIOMS = 16


def _guard(dpi: Dpi) -> list[int]:
    ids = sorted(dpi.kb_ids)
    if len(ids) > MAX_BRUTE_FORCE_AXIOMS:
        raise ValueError(
            f"brute force is limited to {MAX_BRUTE_FORCE_AXIOMS} axioms, "
            f"got {len(ids)}")
    return ids


def brute_force_minimal_diagnoses(dpi: Dpi) -> list[frozenset]:
    """All minimal diagnoses, smallest first, lexicographic within a size."""
    ids = _guard(dpi)
    dpi.ensure_admissible()
    found: list[frozenset] = []
    for size in range(len(ids) + 1):
        for combo in combinations(ids, size):
            cand = frozenset(combo)
            if any(d <= cand for d in found):
                continue
            if dpi.valid_without(cand):
                found.append(cand)
    return found


def brute_force_minimal_conflicts(dpi: Dpi) -> list[frozenset]:
    """All minimal conflicts, smallest first, lexicographic within a size."""
    ids = _guard(dpi)
    found: list[frozenset] = []
    for size in range(1, len(ids) + 1):
        for combo in combinations(ids, size):
            cand = frozenset(combo)
            if any(c <= cand for c in found):
                continue
            if not dpi.valid_kept(cand):
                found.append(cand)
    return found


def minimal_hitting_sets(sets: Sequence[Iterable],
                         universe: Iterable = ()) -> list[frozenset]:
    """All minimal hitting sets of a set family, smallest first."""
    family = [frozenset(s) for s in sets]
    pool = set(universe)
    for s in family:
        pool |= s
    elements = sorted(pool)
    if not family:
        return [frozenset()]
    found: list[frozenset] = []
    for size in range(len(elements) + 1):
        for combo in combinations(elements, size):
            cand = frozenset(combo)
            if any(h <= cand for h in found):
                continue
            if all(cand & s for s in family):
                found.append(cand)
    return found
