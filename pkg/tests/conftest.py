import sys


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance") and hasattr(m, "RESULTS")),
               None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
    passed = sum(ok for ok, _ in mod.RESULTS.values())
    terminalreporter.write_line(f"{passed}/{len(mod.RESULTS)} criteria passed")
