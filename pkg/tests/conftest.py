"""Shared fixtures and the acceptance-criteria summary.

Acceptance tests record one entry per criterion through the
`criterion` fixture; a terminal-summary hook prints one PASS/FAIL line
per criterion at the end of the run, independent of output capture.
An entry with ok=None marks a gated part that was skipped; it does not
affect the verdict.
"""

from collections import defaultdict

import pytest

from tfcurves import gf, levi

_ACCEPTANCE: dict[int, list[tuple[str, bool | None]]] = defaultdict(list)


def _record(number: int, label: str, ok: bool | None) -> bool | None:
    _ACCEPTANCE[number].append((label, ok))
    return ok


@pytest.fixture
def criterion():
    """Record (criterion number, label, ok) and return ok."""
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entries = _ACCEPTANCE[number]
        decided = [ok for _, ok in entries if ok is not None]
        if not decided:
            verdict = "SKIP"
        elif all(decided):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        labels = "; ".join(label for label, _ in entries)
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {labels}")


@pytest.fixture(scope="session")
def f2():
    return gf.ctx_for_q(2)


@pytest.fixture(scope="session")
def f3():
    return gf.ctx_for_q(3)


@pytest.fixture(scope="session")
def f4():
    return gf.ctx_for_q(4)


@pytest.fixture(scope="session")
def fano():
    return levi.incidence_matrix(2)
