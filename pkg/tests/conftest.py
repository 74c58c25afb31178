"""Collects the acceptance tests' outcomes into one line per criterion."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results: dict[int, list[tuple[str, str, float]]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            outcome = "xfail"
        else:
            outcome = report.outcome
        _results.setdefault(n, []).append((report.nodeid.split("::")[-1], outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        entries = _results[n]
        ok = all(outcome == "passed" for _, outcome, _ in entries)
        secs = sum(d for _, _, d in entries)
        bad = [f"{name} ({outcome})" for name, outcome, _ in entries if outcome != "passed"]
        detail = f"; not passing: {', '.join(bad)}" if bad else ""
        terminalreporter.write_line(
            f"CRITERION {n}: {'PASS' if ok else 'FAIL'} [{len(entries)} checks, {secs:.1f}s]{detail}"
        )
