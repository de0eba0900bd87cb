"""Shared fixtures: the packaged catalog, templates and golden files."""

from __future__ import annotations

from pathlib import Path

import pytest

from gridresponse import (
    Catalog,
    AttackGraph,
    WeightVector,
    havex_template,
    load_default_catalog,
    stuxnet_template,
)

GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_default_catalog()


@pytest.fixture(scope="session")
def havex_graph() -> AttackGraph:
    return havex_template()


@pytest.fixture(scope="session")
def stuxnet_graph() -> AttackGraph:
    return stuxnet_template()


@pytest.fixture
def uniform_weights() -> WeightVector:
    return WeightVector.uniform()


@pytest.fixture(scope="session")
def golden_text():
    def read(name: str) -> str:
        return (GOLDEN_DIR / name).read_text(encoding="utf-8")

    return read
