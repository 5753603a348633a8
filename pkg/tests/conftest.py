import pytest

# (number, passed, detail) for every acceptance criterion that ran
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion():
    """Record and print the verdict of one acceptance criterion, then assert it."""

    def record(number: int, passed: bool, detail: str):
        ACCEPTANCE_LINES.append((number, passed, detail))
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        assert passed, f"criterion {number} failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
