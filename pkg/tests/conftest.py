import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bargmann_pullback.decision import AffineMap
from bargmann_pullback.qform import QuadraticWeight
from bargmann_pullback.suites import random_affine, random_weight

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=2)


@st.composite
def weights(draw, n=None, positive_definite=None):
    n = draw(dims) if n is None else n
    pd = draw(st.booleans()) if positive_definite is None else positive_definite
    return random_weight(np.random.default_rng(draw(seeds)), n, positive_definite=pd)


@st.composite
def problems(draw):
    """(phi1, phi2, phi) with random dimensions and map scale."""
    rng = np.random.default_rng(draw(seeds))
    n1, n2 = draw(dims), draw(dims)
    phi1 = random_weight(rng, n1, positive_definite=bool(rng.integers(0, 2)))
    phi2 = random_weight(rng, n2, positive_definite=bool(rng.integers(0, 2)))
    phi = random_affine(rng, n1, n2, scale=float(rng.uniform(0.1, 1.5)))
    return phi1, phi2, phi


@pytest.fixture
def phi0():
    return QuadraticWeight.from_1d(0.25)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def radial_problem(a, b=0.0) -> tuple:
    phi0 = QuadraticWeight.from_1d(0.25)
    return phi0, phi0, AffineMap.from_1d(a, b)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
