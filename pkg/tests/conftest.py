import os
from pathlib import Path

import pytest

from eurohoops.ingestion import F4Metadata, write_crowd, write_f4, write_results
from eurohoops.synth import generate_crowd, generate_league

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def league():
    return generate_league(seed=0)


@pytest.fixture(scope="session")
def data_files(tmp_path_factory, league):
    d = tmp_path_factory.mktemp("data")
    write_results(league, d / "results.csv")
    write_f4(F4Metadata({s - 1: ds.f4_prev for s, ds in league.items()}), d / "f4.csv")
    write_crowd(generate_crowd(league, 2019), d / "crowd.csv")
    return {"results": d / "results.csv", "f4": d / "f4.csv", "crowd": d / "crowd.csv"}


@pytest.fixture(scope="session")
def real_data():
    """Directory with the real results.csv / f4.csv / crowd.csv, via EUROHOOPS_DATA."""
    root = os.environ.get("EUROHOOPS_DATA")
    if not root or not (Path(root) / "results.csv").exists():
        pytest.skip("real dataset not supplied (set EUROHOOPS_DATA)")
    return Path(root)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
