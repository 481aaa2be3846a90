"""Shared fixtures for the steiner-ocycles test suite."""

import shutil
from pathlib import Path

import pytest

from steiner_ocycles.config import DEFAULT_DATA_DIR
from steiner_ocycles.designs.base_cases import base_case
from steiner_ocycles.designs.design_core import TripleSystem, make_triple_system

FANO_BLOCKS = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6)]


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    """Keep a developer's OCYCLE_* variables out of the tests."""
    for name in (
        "OCYCLE_DATA_DIR",
        "OCYCLE_LOG_LEVEL",
        "OCYCLE_LOG_FORMAT",
        "OCYCLE_AF_BUDGET",
        "OCYCLE_EXHAUSTIVE_LIMIT",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def fano() -> TripleSystem:
    return make_triple_system(7, FANO_BLOCKS)


@pytest.fixture
def base7():
    return base_case(7)


@pytest.fixture
def base9():
    return base_case(9)


@pytest.fixture
def data_copy(tmp_path) -> Path:
    """A writable copy of the packaged base-case directory."""
    target = tmp_path / "base_cases"
    shutil.copytree(DEFAULT_DATA_DIR, target)
    return target
