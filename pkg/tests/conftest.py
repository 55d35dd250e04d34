import os
from pathlib import Path

import pytest

from dagstat.trees.sources import BinomialSource, BstSource, CatalanSource, parse_source

GOLDEN = Path(__file__).parent / "golden"

FIGURE_TERM = "f(f(a,f(a,f(a,a))),f(f(a,f(a,a)),f(a,a)))"

# Small table keeps construction cheap; every test level is far below it
CATALAN_TEST_LEVELS = 4096

# Worker count for long Monte Carlo runs; results do not depend on it
SLOW_WORKERS = max(2, os.cpu_count() or 2)


def oracle_sources():
    return [
        BstSource(),
        BinomialSource(0.3),
        BinomialSource(0.5),
        CatalanSource(CATALAN_TEST_LEVELS),
        parse_source("det:quarter"),
    ]


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def catalan_source() -> CatalanSource:
    return CatalanSource(CATALAN_TEST_LEVELS)


@pytest.fixture(params=oracle_sources(), ids=lambda src: src.spec)
def any_source(request):
    return request.param


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Keep user config files and DAGSTAT_* variables out of the tests."""
    for key in list(os.environ):
        if key.startswith("DAGSTAT_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.chdir(tmp_path)
