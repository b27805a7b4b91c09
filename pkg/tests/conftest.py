import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def run_cli(*args, env=None, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "plcgen", *map(str, args)],
        capture_output=True, text=True, env=env, cwd=cwd,
    )


def read_fixture_tables():
    """Map (table, row, symbol) -> value text from the hand transcription."""
    out = {}
    for line in (FIXTURES / "tabulated_constants.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        table, row, symbol, value = line.split()
        out[(int(table), row, symbol)] = value
    return out


def dump_as_fixture_keys(doc):
    """Flatten a parsed ``params dump`` document onto the fixture's keys."""
    out = {}
    for i, row in doc["path_count"].items():
        for s, v in row.items():
            out[(3, f"i={i}", s)] = str(v)
    for i, row in doc["first_arrival"].items():
        for s, v in row.items():
            out[(4, f"i={i}", s)] = str(v)
    for k, row in doc["other_path"].items():
        for s, v in row.items():
            out[(5, f"k={k}", s)] = str(v)
    table_of_class = {"5": 6, "4": 7, "3": 8, "2": 9}
    for i, entry in doc["gev"].items():
        for name in ("xi", "eta", "eps"):
            e = entry[name]
            for coef in ("a", "b", "c"):
                if coef in e:
                    out[(table_of_class[i], f"i={i}", f"{e['symbol']}.{coef}")] = str(e[coef])
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
