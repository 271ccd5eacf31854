import pytest

ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (bool(ok), detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")
