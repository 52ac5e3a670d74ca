from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import _acceptance_log  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance_log.RESULTS):
        status, elapsed, limit, title = _acceptance_log.RESULTS[num]
        bound = f"limit {limit:.0f}s" if limit else "no limit"
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title} ({elapsed:.1f}s, {bound})")
