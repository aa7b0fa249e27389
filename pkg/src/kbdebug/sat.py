"""Small complete SAT solver: DPLL with unit propagation.

Clauses are tuples of non-zero ints in DIMACS convention: literal v refers to
variable abs(v) (1-based) and is negated when v < 0. The instances this
package produces are tiny (tens of variables), so clarity wins over speed:
no watched literals, no clause learning. Branching picks the lowest-numbered
variable occurring in an unsatisfied clause, positive phase first, which makes
every caller deterministic.
"""
from __future__ import annotations

from typing import Iterable, Optional

ClauseT = tuple[int, ...]


def satisfiable(clauses: Iterable[ClauseT]) -> bool:
    """True iff the clause set is satisfiable."""
    return solve(clauses) is not None


def solve(clauses: Iterable[ClauseT]) -> Optional[dict[int, bool]]:
    """A satisfying assignment {var: bool} (partial; unmentioned vars are free),
    or None if the clause set is unsatisfiable."""
    cls: list[tuple[int, ...]] = []
    for c in clauses:
        uniq = tuple(dict.fromkeys(c))
        if not uniq:
            return None
        if any(-lit in uniq for lit in uniq):  # tautology
            continue
        cls.append(uniq)
    return _dpll(cls, {})


def _propagate(clauses: list[ClauseT], assign: dict[int, bool]) -> bool:
    """Exhaustive unit propagation into `assign`; False on conflict."""
    changed = True
    while changed:
        changed = False
        for c in clauses:
            unit = None
            unassigned = 0
            sat = False
            for lit in c:
                v = assign.get(abs(lit))
                if v is None:
                    unit = lit
                    unassigned += 1
                    if unassigned > 1:
                        break
                elif v == (lit > 0):
                    sat = True
                    break
            if sat or unassigned > 1:
                continue
            if unassigned == 0:
                return False
            assign[abs(unit)] = unit > 0
            changed = True
    return True


def _dpll(clauses: list[ClauseT], assign: dict[int, bool]) -> Optional[dict[int, bool]]:
    if not _propagate(clauses, assign):
        return None

    branch = None
    for c in clauses:
        sat = False
        cand = None
        for lit in c:
            v = assign.get(abs(lit))
            if v is None:
                if cand is None or abs(lit) < cand:
                    cand = abs(lit)
            elif v == (lit > 0):
                sat = True
                break
        if not sat:
            if cand is None:
                return None  # falsified clause survived propagation: conflict
            if branch is None or cand < branch:
                branch = cand
    if branch is None:
        return assign  # every clause satisfied

    for phase in (True, False):
        trial = dict(assign)
        trial[branch] = phase
        result = _dpll(clauses, trial)
        if result is not None:
            return result
    return None
