import sys

# criterion number -> (passed, summary line), filled in by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[n]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {line}")
    sys.stdout.flush()
