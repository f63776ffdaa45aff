ACCEPTANCE_RESULTS: list = []  # (criterion label, ok, detail) appended by test_acceptance


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
