import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parent.parent / "data"
CRITERIA = {}


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion."""
    def record(number, passed, detail=""):
        prev = CRITERIA.get(number)
        ok = passed and (prev is None or prev[0])
        details = [d for d in ((prev[1] if prev else ""), detail) if d]
        CRITERIA[number] = (ok, "; ".join(details))
        line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'}" + (f" ({detail})" if detail else "")
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, detail = CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if ok else 'FAIL'}" + (f" - {detail}" if detail else ""))
