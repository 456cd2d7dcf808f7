"""
Shared test fixtures
Solved F-symbol tables are computed once per session
"""

import pytest

import config
from modules.catalog import builtin
from modules.fsolve import solve


@pytest.fixture(scope="session")
def fibonacci():
    return builtin("fibonacci")


@pytest.fixture(scope="session")
def ising():
    return builtin("ising")


@pytest.fixture(scope="session")
def su2_4():
    return builtin("su2-4")


@pytest.fixture(scope="session")
def fib_solved(fibonacci):
    return solve(fibonacci, workers=1)


@pytest.fixture(scope="session")
def fib_table(fib_solved):
    return fib_solved[0]


@pytest.fixture(scope="session")
def ising_solved(ising):
    return solve(ising, workers=1)


@pytest.fixture(scope="session")
def ising_table(ising_solved):
    return ising_solved[0]


@pytest.fixture(scope="session")
def su2_4_solved(su2_4):
    return solve(su2_4, workers=1)


@pytest.fixture(scope="session")
def su2_4_table(su2_4_solved):
    return su2_4_solved[0]


@pytest.fixture
def isolated_storage(tmp_path, monkeypatch):
    """Point the F-symbol cache and log file at a temporary directory."""
    monkeypatch.setattr(config, "FSYMBOLS_DIR", tmp_path / "fsymbols")
    monkeypatch.setattr(config, "LOG_FILE", tmp_path / "anyonlab.log")
    return tmp_path
