from __future__ import annotations

from pathlib import Path

import pytest

from conlaw.constitution import default_constitution_path, load_default_constitution

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"
BANKING_YAML = default_constitution_path()


@pytest.fixture(scope="session")
def banking():
    return load_default_constitution()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
