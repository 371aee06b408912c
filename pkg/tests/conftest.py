def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, after the normal report."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(rep.user_properties)
            if rep.when == "call" and "criterion" in props:
                status = "PASS" if outcome == "passed" else "FAIL"
                lines.append((props["criterion"], status, props.get("summary", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, status, summary in sorted(lines):
            terminalreporter.write_line(f"criterion {num:2d}: {status}  {summary}")
