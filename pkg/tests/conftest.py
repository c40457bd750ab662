import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from numsym.config import get_settings  # noqa: E402
from numsym.poset import build_window  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"

# Built-in instances with at most 8 non-root elements
CORPUS = [
    "young:2,1",
    "young:3,1",
    "young:3,2",
    "young:2,2,1",
    "box:3,3",
    "box:2,2,2",
    "chain:6",
    "antichain:4",
]


@pytest.fixture(params=CORPUS)
def corpus_window(request):
    return build_window(request.param)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def db_url(tmp_path) -> str:
    return f"sqlite:///{tmp_path / 'fixtures.db'}"


@pytest.fixture
def cli_env(tmp_path, monkeypatch):
    """Point the CLI settings at a throwaway fixture store."""
    monkeypatch.setenv("NUMSYM_DATABASE_URL", f"sqlite:///{tmp_path / 'cli.db'}")
    monkeypatch.setenv("NUMSYM_LOG_LEVEL", "WARNING")
    monkeypatch.delenv("NUMSYM_GROUP_CAP", raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
