from __future__ import annotations

import json
from pathlib import Path

import pytest

from kbdebug.reasoning import Dpi, load_dpi

FIXTURES = Path(__file__).parent / "fixtures"

FIXTURE_NAMES = [
    "example_chain",
    "example_chain_full",
    "example_layered",
    "example_partdx",
    "example_team",
    "example_intro",
    "example_intro_incoherent",
]


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load_fixture(name: str) -> Dpi:
    return load_dpi(fixture_path(name))


def fixture_dict(name: str) -> dict:
    with open(fixture_path(name), "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def chain() -> Dpi:
    return load_fixture("example_chain")


@pytest.fixture(scope="session")
def chain_full() -> Dpi:
    return load_fixture("example_chain_full")


@pytest.fixture(scope="session")
def layered() -> Dpi:
    return load_fixture("example_layered")


@pytest.fixture(scope="session")
def partdx() -> Dpi:
    return load_fixture("example_partdx")


@pytest.fixture(scope="session")
def team() -> Dpi:
    return load_fixture("example_team")


@pytest.fixture(scope="session")
def intro() -> Dpi:
    return load_fixture("example_intro")


@pytest.fixture(scope="session")
def intro_incoherent() -> Dpi:
    return load_fixture("example_intro_incoherent")


def ids(sets) -> list[list[int]]:
    """Sorted id lists for readable set-of-sets comparisons."""
    return sorted(sorted(s) for s in sets)
