from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
LISTINGS = FIXTURES / "listings"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def listings_dir() -> Path:
    return LISTINGS


@pytest.fixture(scope="session")
def site_table() -> dict:
    import json

    return json.loads((FIXTURES / "site_table.json").read_text())
