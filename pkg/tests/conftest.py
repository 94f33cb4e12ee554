import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

# property tests run 10^3 generated cases each
PROPERTY_CASES = int(os.environ.get("ARTIFACT_PROPERTY_CASES", "1000"))

settings.register_profile(
    "properties",
    max_examples=PROPERTY_CASES,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("properties")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pytest_configure(config):
    config.addinivalue_line("markers", "property: generated-case invariant checks")
    config.addinivalue_line("markers", "slow: Monte Carlo checks taking tens of seconds")


def pytest_collection_modifyitems(config, items):
    for item in items:
        fn = getattr(item, "function", None)
        if getattr(fn, "is_hypothesis_test", False):
            item.add_marker("property")


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}  {detail}")
