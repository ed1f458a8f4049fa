def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criteria with PASS/FAIL summary lines")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            if report.when != "call" or "acceptance" not in report.keywords:
                continue
            recorded = [v for k, v in report.user_properties if k == "acceptance"]
            lines.extend(recorded or [f"FAIL {report.nodeid}: raised before reaching its verdict"])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: s.split(" ", 2)[1]):
            terminalreporter.write_line(line)
