import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cotangent_kahler.errors import Inadmissible
from cotangent_kahler.families import ConstantFamily, ExampleFamily, TabulatedFamily
from cotangent_kahler.oracles import FDConfig, fd_derivative

positive = st.floats(0.1, 5.0)


def test_example_family_values_at_one():
    lam, dlam, _ = ExampleFamily(A=1.0, B=1.0, c=1.0)(1.0)
    assert lam == pytest.approx(np.sqrt(2) / 2, rel=1e-15)
    assert dlam == pytest.approx(-np.sqrt(2) / 8, rel=1e-15)


@given(positive, positive, positive, st.floats(0.05, 20))
def test_example_derivatives_match_fd(A, B, c, t):
    L = ExampleFamily(A=A, B=B, c=c)
    cfg = FDConfig(h=1e-4, scheme="richardson", scale_guard=1e-3)
    lam, dlam, ddlam = L(t)
    fd1 = fd_derivative(lambda s: np.array([L(s[0])[0]]), np.array([t]), 0, cfg)[0]
    fd2 = fd_derivative(lambda s: np.array([L(s[0])[1]]), np.array([t]), 0, cfg)[0]
    assert fd1 == pytest.approx(dlam, rel=1e-7)
    assert fd2 == pytest.approx(ddlam, rel=1e-6)


@pytest.mark.parametrize("kwargs", [dict(A=0.0), dict(A=-1.0), dict(A=1.0, B=0.0), dict(A=1.0, c=-2.0)])
def test_example_rejects_nonpositive(kwargs):
    with pytest.raises(ValueError):
        ExampleFamily(**kwargs)


def test_constant_family():
    assert ConstantFamily(A=2.0, lam0=0.7)(3.0) == (0.7, 0.0, 0.0)


def test_tabulated_reproduces_example_family(tmp_path):
    ref = ExampleFamily(A=1.0, B=1.0, c=1.0)
    grid = np.linspace(0.05, 6.0, 400)
    path = tmp_path / "lam.csv"
    np.savetxt(path, np.column_stack([grid, ref(grid)[0]]), delimiter=",")
    tab = TabulatedFamily.from_file(path, A=1.0)
    for t in (0.3, 1.0, 4.2):
        lam, dlam, _ = tab(t)
        assert lam == pytest.approx(ref(t)[0], rel=1e-7)
        assert dlam == pytest.approx(ref(t)[1], rel=1e-4)


def test_tabulated_refuses_extrapolation():
    tab = TabulatedFamily.from_function(lambda t: 1 / (1 + t), np.linspace(0.1, 2.0, 20), A=1.0)
    with pytest.raises(Inadmissible):
        tab(3.0)


def test_tabulated_needs_increasing_grid():
    with pytest.raises(ValueError):
        TabulatedFamily(A=1.0, t_grid=(1.0, 0.5, 2.0, 3.0), values=(1.0, 1.0, 1.0, 1.0))
