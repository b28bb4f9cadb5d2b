import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

CRITERIA = {
    1: "Jeffrey chain from uniform reproduces the exact P2 and P3 rows",
    2: "sequential MCE rows and the preservation witness",
    3: "conditioning reachability from uniform n=1 and a Jeffrey update to 1/10",
    4: "three-suspects envelopes, late generic evidence and the inconsistent order",
    5: "entailment survives constraining but not conditioning (20 random x)",
    6: "property suite over random models with n <= 3",
    7: "LP envelopes equal vertex envelopes; MCE beats the 1/400 grid",
    8: "ignorance: singletons, monotone under constraining, dilation instance",
    9: "CLI: byte-identical golden JSON and a single late-evidence warning",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for n in getattr(report, "criteria", ()):
        _outcomes.setdefault(n, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    report.criteria = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        runs = _outcomes.get(n)
        if runs is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {text}")
