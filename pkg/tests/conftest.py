"""Shared fixtures: catalog entries and file paths."""

from pathlib import Path

import pytest

from src.catalog import models
from src.catalog.loader import load_ring
from src.catalog.registry import Catalog

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def catalog():
    return Catalog(DATA_DIR).load()


@pytest.fixture(scope="session")
def ising():
    return models.ising()


@pytest.fixture(scope="session")
def fibonacci():
    return load_ring(DATA_DIR / "fibonacci.ring.json")


@pytest.fixture(scope="session")
def broken_ising():
    return load_ring(FIXTURES / "broken_ising.ring.json")


@pytest.fixture
def data_env(monkeypatch):
    """Point the configured data directory at the repository's data/."""
    monkeypatch.setenv("FUSIONKIT_DATA_DIR", str(DATA_DIR))
    return DATA_DIR
