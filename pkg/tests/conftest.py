from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from progtree.structures import gf, modular_ring

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def gf2():
    return gf(2)


@pytest.fixture(scope="session")
def gf3():
    return gf(3)


@pytest.fixture(scope="session")
def z4():
    return modular_ring(4)


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    if acceptance and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(acceptance.RESULTS):
            terminalreporter.write_line(acceptance.RESULTS[k])
