"""Direct computation of minimal diagnoses, without conflicts.

`inv_qx` applies the divide-and-conquer scheme to the diagnosis property
itself: it splits the candidate axioms and keeps the halves whose removal is
still needed for validity, returning one minimal diagnosis. `inv_hs_tree`
explores diagnoses depth-first: tree edges name axioms asserted correct
(conceptually moved into the background), node labels are fresh minimal
diagnoses disjoint from that assertion set, computed on the reduced instance
— which keeps every label a globally minimal diagnosis of the original
instance. Memory stays linear in tree depth (a plain stack).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .reasoning import Diagnosis, Dpi, id_key


def inv_qx(dpi: Dpi, candidates: Optional[Iterable[int]] = None,
           forced: frozenset = frozenset()) -> Optional[list[int]]:
    """One minimal diagnosis among `candidates`, as a discovery-order list.

    `forced` axioms are treated as background: always kept, never removable.
    Returns [] when nothing needs removing (the instance is already valid)
    and None when no diagnosis exists (removing every candidate still leaves
    the instance faulty).
    """
    cand = sorted(candidates) if candidates is not None else sorted(dpi.kb_ids - forced)
    base = frozenset(forced)

    def valid_removing(removed: Iterable[int]) -> bool:
        return dpi.valid_kept((frozenset(cand) - frozenset(removed)) | base)

    if not valid_removing(cand):
        return None
    if valid_removing(()):
        return []
    return _find_diag(valid_removing, [], True, cand)


def _find_diag(valid_removing, removed: list[int], unchanged: bool,
               cand: Sequence[int]) -> list[int]:
    """`removed` is the removal set assumed so far; `unchanged` is False when
    it just grew, in which case sufficiency of `removed` alone ends the
    branch."""
    if not unchanged and valid_removing(removed):
        return []
    if len(cand) == 1:
        return [cand[0]]
    k = len(cand) // 2
    o1, o2 = list(cand[:k]), list(cand[k:])
    d2 = _find_diag(valid_removing, removed + o1, not o1, o2)
    d1 = _find_diag(valid_removing, removed + d2, not d2, o1)
    return d2 + d1


@dataclass
class InvHsTreeState:
    dpi: Dpi
    diagnoses: list = field(default_factory=list)  # discovery order
    _stack: list = field(default_factory=list)  # LIFO of assertion sets H
    _seen: set = field(default_factory=set)
    exhausted: bool = False

    def __post_init__(self):
        if not self._stack and not self._seen and not self.exhausted:
            self._stack.append(frozenset())
            self._seen.add(frozenset())

    def search(self, m: Optional[int] = None) -> list:
        """Continue depth-first until `m` diagnoses are known (None: all)."""
        while self._stack and (m is None or len(self.diagnoses) < m):
            h = self._stack.pop()
            label = self._label(h)
            if label is None:
                continue  # pruned: no diagnosis avoids h
            # lowest-id successor must pop first
            for ax in sorted(label, reverse=True):
                child = h | {ax}
                if child not in self._seen:
                    self._seen.add(child)
                    self._stack.append(child)
        if not self._stack:
            self.exhausted = True
        return list(self.diagnoses)

    def _label(self, h: frozenset) -> Optional[frozenset]:
        for d in self.diagnoses:
            if not (d & h):
                return d
        found = inv_qx(self.dpi, sorted(self.dpi.kb_ids - h), forced=h)
        if found is None:
            return None
        d = frozenset(found)
        self.diagnoses.append(d)
        return d


def inv_hs_tree(dpi: Dpi, m: Optional[int] = None,
                seed_diagnoses: Iterable[frozenset] = (),
                state: Optional[InvHsTreeState] = None
                ) -> tuple[list, InvHsTreeState]:
    """Up to `m` minimal diagnoses by the direct tree, in discovery order.

    `seed_diagnoses` preloads known still-valid minimal diagnoses (for
    example from before a new test case arrived); they count towards `m` and
    are reused as labels before any fresh computation.
    """
    dpi.ensure_admissible()
    if state is None:
        state = InvHsTreeState(dpi)
        state.diagnoses.extend(frozenset(d) for d in seed_diagnoses)
    found = state.search(m)
    return found, state
