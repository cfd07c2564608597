import os

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    # keep the suite away from ~/.cache; tests that care pass their own dir
    d = tmp_path_factory.mktemp("cyclosrg-cache")
    old = os.environ.get("CYCLOSRG_CACHE_DIR")
    os.environ["CYCLOSRG_CACHE_DIR"] = str(d)
    yield d
    if old is None:
        os.environ.pop("CYCLOSRG_CACHE_DIR", None)
    else:
        os.environ["CYCLOSRG_CACHE_DIR"] = old


@pytest.fixture(scope="session")
def cache_dir(_isolated_cache):
    return _isolated_cache


ACCEPTANCE_LINES = []


@pytest.fixture
def report_line(capsys):
    """Print one acceptance line straight to the terminal, bypassing capture."""
    def emit(line):
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
