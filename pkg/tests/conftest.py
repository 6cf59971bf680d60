"""Shared pytest plumbing.

Collects one line per acceptance criterion as the suite runs and prints
the pass/fail table in the terminal summary, so a single `pytest -v`
shows both the unit results and the criterion scoreboard.
"""

from __future__ import annotations

import pytest

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def record_criterion():
    """Callable (index, label, passed, detail) -> None."""

    def _record(index: int, label: str, passed: bool, detail: str = "") -> None:
        _CRITERIA[index] = (label, bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for index in sorted(_CRITERIA):
        label, passed, detail = _CRITERIA[index]
        status = "PASS" if passed else "FAIL"
        line = f"[{index:2d}] {label:<52s} {status}"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
    n_fail = sum(1 for _, ok, _ in _CRITERIA.values() if not ok)
    terminalreporter.write_line(
        f"criteria passed: {len(_CRITERIA) - n_fail}/{len(_CRITERIA)}"
    )
