"""Minimal conflict computation by divide and conquer.

A conflict is a subset of the KB that, together with the background and the
positive tests, violates the requirements or entails a negative test. The
divide-and-conquer search returns one minimal conflict using O(|C|·log n)
validity checks; all checks go through the instance's memoised oracle.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .reasoning import ConflictSet, Dpi, InadmissibleDpiError


def quick_xplain(dpi: Dpi, candidates: Optional[Iterable[int]] = None) -> Optional[ConflictSet]:
    """One minimal conflict among `candidates` (default: the whole KB),
    or None if the candidate set is fault-free."""
    cand = sorted(candidates) if candidates is not None else sorted(dpi.kb_ids)
    if dpi.valid_kept(frozenset(cand)):
        return None
    if not dpi.valid_kept(frozenset()):
        raise InadmissibleDpiError(
            "background and positive tests violate the requirements; "
            "no diagnosis exists")
    return frozenset(_qx(dpi, frozenset(), True, cand))


def _qx(dpi: Dpi, kept: frozenset, unchanged: bool,
        cand: Sequence[int]) -> list[int]:
    """Junker's recursion. `kept` is the axiom set currently assumed in;
    `unchanged` is False when `kept` just grew, in which case a fault in
    `kept` alone means no candidate axiom is needed."""
    if not unchanged and not dpi.valid_kept(kept):
        return []
    if len(cand) == 1:
        return [cand[0]]
    k = len(cand) // 2
    o1, o2 = list(cand[:k]), list(cand[k:])
    c2 = _qx(dpi, kept | frozenset(o1), not o1, o2)
    c1 = _qx(dpi, kept | frozenset(c2), not c2, o1)
    return c1 + c2
