# filled by test_acceptance; printed once the session ends
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
