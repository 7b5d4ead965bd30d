"""Shared pytest plumbing: the acceptance-criteria result board.

Each acceptance test registers its verdict here; the terminal summary then
prints one PASS/FAIL line per criterion regardless of output capturing.
"""

_RESULTS: dict[int, tuple[str, bool]] = {}


def record_criterion(number: int, label: str, ok: bool) -> None:
    _RESULTS[number] = (label, ok)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        label, ok = _RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict} - {label}")
