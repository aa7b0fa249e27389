from __future__ import annotations

import pytest

from kbdebug.bruteforce import brute_force_minimal_conflicts
from kbdebug.conflicts import quick_xplain
from kbdebug.reasoning import InadmissibleDpiError, dpi_from_dict

from conftest import FIXTURE_NAMES, ids, load_fixture


def test_chain_conflict_is_the_whole_kb(chain):
    assert sorted(quick_xplain(chain)) == [1, 2, 3, 4]


def test_valid_candidate_set_has_no_conflict(chain):
    assert quick_xplain(chain, candidates=[1, 2, 3]) is None


def test_partdx_first_conflict(partdx):
    # lowest-id minimal conflict reachable from the left split
    assert sorted(quick_xplain(partdx)) == [1, 3]


def test_conflict_is_minimal(layered):
    conflict = quick_xplain(layered)
    assert conflict is not None
    for ax in conflict:
        # dropping any element leaves a fault-free subset of the conflict
        assert layered.valid_kept(conflict - {ax})


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_returned_conflict_is_one_of_the_brute_force_conflicts(name):
    dpi = load_fixture(name)
    conflict = quick_xplain(dpi)
    if conflict is None:
        pytest.skip("fixture has no conflict")
    assert sorted(conflict) in ids(brute_force_minimal_conflicts(dpi))


def test_inadmissible_background_raises():
    dpi = dpi_from_dict({
        "kb": ["A sub B"],
        "background": ["C(w)", "clause !C(w)"],
    })
    with pytest.raises(InadmissibleDpiError):
        quick_xplain(dpi)


def test_conflict_respects_candidate_restriction(partdx):
    # restricted away from ax3, the only remaining minimal conflict is {2,4}
    assert sorted(quick_xplain(partdx, candidates=[1, 2, 4, 5])) == [2, 4]
