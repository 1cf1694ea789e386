from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("det", derandomize=True, max_examples=100)
settings.load_profile("det")

# criterion number -> [(title, passed)]
_ACCEPTANCE = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(num, title): acceptance criterion test"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        marker = item.get_closest_marker("acceptance")
        if marker:
            num, title = marker.args
            _ACCEPTANCE[num].append((title, rep.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        entries = _ACCEPTANCE[num]
        ok = all(passed for _, passed in entries)
        terminalreporter.write_line(
            f"criterion {num}: {'PASS' if ok else 'FAIL'} - {entries[0][0]}"
        )
