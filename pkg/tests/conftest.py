from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def corpus() -> Path:
    return Path(__file__).resolve().parent.parent / "corpus"
