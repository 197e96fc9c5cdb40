import pytest
from hypothesis import HealthCheck, settings

from negsssp import _debug

# every potential vector handed out anywhere in the suite is audited
_debug.enable(True)

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_acceptance = []


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the audit criterion sees the whole session
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


@pytest.fixture
def criterion(capsys):
    """``criterion(num, ok, detail)`` records and prints one PASS/FAIL line."""
    def record(num, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
        _acceptance.append((num, line))
        with capsys.disabled():
            print("\n" + line)
        return ok
    return record


def pytest_sessionfinish(session, exitstatus):
    st = _debug.stats()
    tr = session.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        if _acceptance:
            tr.write_sep("=", "acceptance")
            for _, line in sorted(_acceptance):
                tr.write_line(line)
        tr.write_line(f"potential audit: {st['checks']} checks, "
                      f"{st['violations']} violations")
    if st["violations"]:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED
