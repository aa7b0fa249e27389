"""Hitting-set tree search for minimal diagnoses, driven by conflicts.

Nodes are edge-label sets (paths). The tree is explored uniform-cost by the
probability that exactly the path's axioms are faulty, so diagnoses surface
in descending prior order (exact whenever all fault probabilities are below
one half, since then extending a path can only lower its probability). Ties
break by smaller cardinality, then by the lexicographic id sequence.

Node labels are minimal conflicts; computed conflicts are pooled for reuse.
A node whose path is a superset of a known diagnosis, or a duplicate of an
already-generated path, is closed. The search state is resumable: ask for
more diagnoses and it continues where it stopped.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .conflicts import quick_xplain
from .reasoning import Diagnosis, Dpi, id_key


@dataclass
class HsTreeState:
    dpi: Dpi
    probs: Mapping[int, float]  # axiom id -> fault probability
    diagnoses: list = field(default_factory=list)  # discovery order
    conflicts: list = field(default_factory=list)  # reusable labels
    _open: list = field(default_factory=list)  # heap of (key, path)
    _generated: set = field(default_factory=set)
    exhausted: bool = False

    def __post_init__(self):
        if not self._open and not self._generated and not self.exhausted:
            self._push(frozenset())

    def _weight(self, path: frozenset) -> float:
        # members first, complements second, each in id order: symmetric
        # paths then get bit-identical weights and ties fall through to the
        # deterministic id key
        p = 1.0
        for i in sorted(path):
            p *= self.probs[i]
        for i in sorted(self.dpi.kb_ids - path):
            p *= 1.0 - self.probs[i]
        return p

    def _push(self, path: frozenset) -> None:
        if path in self._generated:
            return
        self._generated.add(path)
        key = (-self._weight(path), len(path), id_key(path))
        heapq.heappush(self._open, (key, path))

    def search(self, n: Optional[int] = None) -> list:
        """Continue until `n` diagnoses are known (None: exhaust the tree)."""
        while self._open and (n is None or len(self.diagnoses) < n):
            _, path = heapq.heappop(self._open)
            if any(path >= d for d in self.diagnoses):
                continue  # closed: would not be minimal
            label = self._label(path)
            if label is None:
                self.diagnoses.append(path)
                continue
            for ax in sorted(label):
                self._push(path | {ax})
        if not self._open:
            self.exhausted = True
        return list(self.diagnoses)

    def _label(self, path: frozenset) -> Optional[frozenset]:
        for c in self.conflicts:
            if not (c & path):
                return c
        c = quick_xplain(self.dpi, sorted(self.dpi.kb_ids - path))
        if c is not None:
            self.conflicts.append(c)
        return c


def hs_tree_diagnoses(dpi: Dpi, probs: Mapping[int, float],
                      n: Optional[int] = None,
                      state: Optional[HsTreeState] = None
                      ) -> tuple[list, HsTreeState]:
    """The up-to-n most probable minimal diagnoses plus the resumable state.

    The returned list is sorted by prior probability (descending), then
    cardinality, then id sequence.
    """
    dpi.ensure_admissible()
    if state is None:
        state = HsTreeState(dpi, dict(probs))
    found = state.search(n)
    found.sort(key=lambda d: (-state._weight(d), len(d), id_key(d)))
    return found, state
