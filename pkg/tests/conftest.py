"""Shared pytest wiring for the suite."""

from __future__ import annotations

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Replay the acceptance-gate PASS/FAIL lines outside output capture."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "GATE_LINES", None)
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)
