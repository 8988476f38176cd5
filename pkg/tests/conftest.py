import pytest

from pointinterval.rulebase import expand_symmetry, load


@pytest.fixture(scope="session")
def rules():
    return expand_symmetry(load())


@pytest.fixture(scope="session")
def raw_rules():
    return load()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, details = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {'; '.join(details)}")
