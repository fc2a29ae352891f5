import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ssw.checks import random_primitive

settings.register_profile("ssw", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ssw")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_w(rng):
    return random_primitive(rng, 200)


@pytest.fixture
def report(request, capsys):
    """Print one criterion line immediately and again in the terminal summary."""
    lines = request.config.__dict__.setdefault("_ssw_criteria", [])

    def emit(number, passed, text, details=()):
        block = [f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}", *details]
        lines.extend(block)
        with capsys.disabled():
            print("\n" + "\n".join(block), flush=True)

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_ssw_criteria")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
