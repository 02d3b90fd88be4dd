from __future__ import annotations

import contextlib

# criterion number -> (passed, detail), filled by tests/test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record one acceptance criterion; the summary prints a line per entry."""
    detail = {"text": ""}
    try:
        yield detail
    except BaseException as exc:
        CRITERIA[number] = (False, f"{title}: {detail['text'] or ''} {type(exc).__name__}: {exc}".strip())
        raise
    CRITERIA[number] = (True, f"{title}: {detail['text']}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, text = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} {text}")
