import numpy as np
import pytest

from cotangent_kahler.base_manifold import SpaceForm
from cotangent_kahler.bundle import BundlePoint, point_with_energy, sample_point
from cotangent_kahler.families import ExampleFamily


@pytest.fixture
def M3():
    return SpaceForm(3, 1.0)


@pytest.fixture
def L1():
    return ExampleFamily(A=1.0, B=1.0, c=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def sample_points(M, count, seed=7, t_min=0.05, t_max=5.0):
    rng = np.random.default_rng(seed)
    return [sample_point(M, rng, t_min, t_max) for _ in range(count)]


@pytest.fixture
def points3(M3):
    return sample_points(M3, 4)


@pytest.fixture
def half_energy_point(M3):
    """A fixed point with t = 0.5 away from the chart origin."""
    return point_with_energy(M3, [0.3, -0.2, 0.5], [1.0, 0.4, -0.7], 0.5)


__all__ = ["sample_points", "BundlePoint", "record_criterion"]


ACCEPTANCE_LINES = {}


def record_criterion(number, title, ok, detail=""):
    ACCEPTANCE_LINES[number] = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
