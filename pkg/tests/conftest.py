from __future__ import annotations

import pathlib
import shutil

import pytest

from mathwikibase.kb import Store, load_snapshot

DATA_DIR = pathlib.Path(__file__).parent / "data"
SNAPSHOT = DATA_DIR / "snapshot.jsonl"
CORPUS = DATA_DIR / "corpus.tex"


@pytest.fixture(scope="session")
def corpus() -> list[str]:
    lines = CORPUS.read_text(encoding="utf-8").splitlines()
    return [line for line in lines if line.strip()]


@pytest.fixture(scope="session")
def store() -> Store:
    """Read-only store over the checked-in snapshot; never write to it."""
    return load_snapshot(str(SNAPSHOT))


@pytest.fixture()
def fresh_snapshot(tmp_path) -> pathlib.Path:
    """Private snapshot copy for tests that modify the store."""
    target = tmp_path / "snapshot.jsonl"
    shutil.copy(SNAPSHOT, target)
    return target


@pytest.fixture()
def fresh_store(fresh_snapshot) -> Store:
    return load_snapshot(str(fresh_snapshot))
