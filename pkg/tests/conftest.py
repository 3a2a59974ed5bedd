"""Shared fixtures: the acceptance-criteria recorder and its summary section."""

import pytest

_criterion_lines: list[str] = []


@pytest.fixture(scope="session")
def criterion_recorder():
    """Collect one PASS/FAIL line per acceptance criterion.

    Lines are echoed immediately (visible with -s) and replayed in a
    dedicated terminal section at the end of the run so the verdict table
    survives output capturing.
    """

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} — {detail}"
        _criterion_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criterion_lines):
            terminalreporter.write_line(line)
