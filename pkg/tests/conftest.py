"""Shared pytest hooks: print one summary line per release check."""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        import test_acceptance
    except ImportError:
        return
    lines = getattr(test_acceptance, "RESULTS", [])
    if lines:
        terminalreporter.write_sep("-", "acceptance summary")
        for line in lines:
            terminalreporter.write_line(line)
