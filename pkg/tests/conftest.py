import pytest

from hornbilliard.dynamics import StopConditions
from hornbilliard.experiments import sweep_records
from hornbilliard.geometry import build_horn

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def g21():
    return build_horn(2.0, 1.0, 0.3)


@pytest.fixture(scope="session")
def sweep1000(g21):
    """The 1000-trajectory random sweep shared by the acceptance criteria."""
    stop = StopConditions(theta_max=0.3, max_collisions=100_000)
    return sweep_records(g21, 1000, seed=20261015, stop=stop)


@pytest.fixture
def criterion():
    def record(label: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
