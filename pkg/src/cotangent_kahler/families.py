"""Built-in choices of the free function ``lambda(t)``.

A family is callable: ``family(t)`` returns ``(lam, dlam, ddlam)``, the value
and first two derivatives in ``t``. ``A`` is the positive constant tying
``a1 = A t lambda``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import Inadmissible


@dataclass(frozen=True)
class LambdaFamily:
    A: float
    family_id = "abstract"

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"A must be positive, got {self.A!r}")

    def __call__(self, t: float) -> tuple[float, float, float]:
        raise NotImplementedError

    def value(self, t: float) -> float:
        return self(t)[0]


@dataclass(frozen=True)
class ExampleFamily(LambdaFamily):
    """``lambda(t) = sqrt(2c) / (A sqrt(t) + B)`` with ``A, B > 0``.

    Admissible for every ``t > 0`` on a sphere of curvature ``c``.
    """

    B: float = 1.0
    c: float = 1.0
    family_id = "example"

    def __post_init__(self):
        super().__post_init__()
        if not self.B > 0:
            raise ValueError(f"B must be positive, got {self.B!r}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c!r}")

    def __call__(self, t):
        k = np.sqrt(2.0 * self.c)
        rt = np.sqrt(t)
        u = self.A * rt + self.B
        du = 0.5 * self.A / rt
        ddu = -0.25 * self.A / (t * rt)
        lam = k / u
        dlam = -k * du / u**2
        ddlam = -k * ddu / u**2 + 2.0 * k * du**2 / u**3
        return lam, dlam, ddlam


@dataclass(frozen=True)
class ConstantFamily(LambdaFamily):
    """``lambda(t) = lam0``; admissible only for ``t < 2c / (A lam0)^2``."""

    lam0: float = 1.0
    family_id = "constant"

    def __call__(self, t):
        return float(self.lam0), 0.0, 0.0


@dataclass(frozen=True)
class TabulatedFamily(LambdaFamily):
    """Cubic-spline interpolant of sampled ``(t, lambda)`` pairs.

    Derivatives come from the spline itself, so they are only as good as
    the sampling; evaluation outside the tabulated range is refused.
    """

    t_grid: tuple = ()
    values: tuple = ()
    _spline: CubicSpline = field(init=False, repr=False, compare=False, default=None)
    family_id = "tabulated"

    def __post_init__(self):
        super().__post_init__()
        t_grid = np.asarray(self.t_grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if t_grid.ndim != 1 or t_grid.size < 4 or t_grid.shape != values.shape:
            raise ValueError("need at least four (t, lambda) samples of matching length")
        if np.any(np.diff(t_grid) <= 0) or t_grid[0] <= 0:
            raise ValueError("t samples must be positive and strictly increasing")
        object.__setattr__(self, "t_grid", tuple(t_grid))
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "_spline", CubicSpline(t_grid, values))

    @classmethod
    def from_function(cls, fn, t_grid, A: float) -> "TabulatedFamily":
        t_grid = np.asarray(t_grid, dtype=float)
        return cls(A=A, t_grid=tuple(t_grid), values=tuple(fn(t_grid)))

    @classmethod
    def from_file(cls, path, A: float) -> "TabulatedFamily":
        """Two-column text/CSV file of ``t, lambda`` rows."""
        data = np.loadtxt(path, delimiter="," if str(path).endswith(".csv") else None, ndmin=2)
        return cls(A=A, t_grid=tuple(data[:, 0]), values=tuple(data[:, 1]))

    def __call__(self, t):
        if not self.t_grid[0] <= t <= self.t_grid[-1]:
            raise Inadmissible(t, "outside the tabulated range")
        s = self._spline
        return float(s(t)), float(s(t, 1)), float(s(t, 2))
