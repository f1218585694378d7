import pytest
from hypothesis import HealthCheck, settings

from pcbounds import CountTable, PartialMediationMargins

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

_ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Record one pass/fail line per acceptance criterion.

    Lines are printed immediately (visible with -s or on failure) and
    replayed in the terminal summary so a plain ``pytest -v`` run always
    shows every verdict.
    """

    def log(criterion: int, passed: bool, detail: str) -> None:
        line = f"[criterion {criterion}] {'PASS' if passed else 'FAIL'}: {detail}"
        _ACCEPTANCE_LINES.append((criterion, line))
        print(line)

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES, key=lambda pair: pair[0]):
            terminalreporter.write_line(line)


@pytest.fixture
def reference_counts():
    return CountTable(
        exposed_event=30, exposed_total=100, unexposed_event=12, unexposed_total=100
    )


@pytest.fixture
def example1_margins():
    # Rates quoted as zero-probabilities in the source tables, so the
    # margins are built through the complement constructor.
    return PartialMediationMargins.from_zero_rates(
        y00_zero=0.98,
        y01_zero=0.165,
        y10_zero=0.315,
        y11_zero=0.143,
        m0_zero=0.73,
        m1_zero=0.981,
    )


@pytest.fixture
def example2_margins():
    return PartialMediationMargins.from_zero_rates(
        y00_zero=0.98,
        y01_zero=0.67,
        y10_zero=0.09,
        y11_zero=0.27,
        m0_zero=0.04,
        m1_zero=0.26,
    )
