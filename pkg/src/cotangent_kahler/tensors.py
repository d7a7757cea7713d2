"""Dense component arrays with declared index variance."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class MTensor:
    """Components of an M-tensor field at a single point.

    ``variance`` holds one character per index, ``"u"`` (upper) or ``"l"``
    (lower). Declared (anti)symmetric index pairs are checked on
    construction up to a roundoff-sized tolerance.
    """

    data: np.ndarray
    variance: str
    symmetric: list = field(default_factory=list)
    antisymmetric: list = field(default_factory=list)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        if len(self.variance) != data.ndim or set(self.variance) - {"u", "l"}:
            raise ValueError(f"variance {self.variance!r} does not match rank {data.ndim}")
        if data.ndim and len(set(data.shape)) != 1:
            raise ValueError(f"all index ranges must agree, got shape {data.shape}")
        scale = 1.0 + float(np.max(np.abs(data), initial=0.0))
        for pair, sign in [(p, 1.0) for p in self.symmetric] + [(p, -1.0) for p in self.antisymmetric]:
            swapped = np.swapaxes(data, *pair)
            if np.max(np.abs(data - sign * swapped), initial=0.0) > 1e-9 * scale:
                kind = "symmetric" if sign > 0 else "antisymmetric"
                raise ValueError(f"components are not {kind} in indices {pair}")

    @property
    def n(self) -> int:
        return self.data.shape[0] if self.data.ndim else 0

    @property
    def rank(self) -> tuple[int, int]:
        return self.variance.count("u"), self.variance.count("l")

    @property
    def shape(self):
        return self.data.shape

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __getitem__(self, idx):
        return self.data[idx]
