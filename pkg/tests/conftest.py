import importlib.util
import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = Path(__file__).resolve().parents[1] / "src" / "metac" / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

# the python packages of the external solvers expose them as `python -m ...`
for key, module in (("METAC_ASP_BIN", "clingo"), ("METAC_ASPDC_BIN", "clingcon")):
    if not os.environ.get(key) and importlib.util.find_spec(module) is not None:
        os.environ[key] = f"{sys.executable} -m {module}"


@pytest.fixture
def corpus():
    return CORPUS


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, passed: bool, detail: str, skipped: bool = False):
    status = "SKIP" if skipped else ("PASS" if passed else "FAIL")
    line = f"criterion {number:>2}: {status}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
