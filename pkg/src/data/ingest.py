"""Loading (x, y) data sets and generating synthetic test signals.

Input files are CSVs with an ``x`` and a ``y`` column (header case and
surrounding whitespace are ignored). Rows are sorted by ``x``; rows with a
missing value are dropped, and two rows sharing the same ``x`` are an error
rather than being averaged.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..grid.design import DesignGrid
from ..utils.errors import DomainError

DESIGNS = ("uniform", "random")


@dataclass(frozen=True, eq=False)
class DataSet:
    x: np.ndarray
    y: np.ndarray
    source: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if x.size != y.size:
            raise DomainError(f"x and y differ in length: {x.size} != {y.size}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)

    def grid(self, a: float | None = None, b: float | None = None) -> DesignGrid:
        return DesignGrid(self.x, a, b)


def load_dataset(path: str | Path) -> DataSet:
    """Read a CSV with header ``x,y`` into a sorted, duplicate-free DataSet."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"No data file: {path}")
    df = pd.read_csv(path)
    df = df.rename(columns={c: str(c).strip().lower() for c in df.columns})
    missing = {"x", "y"} - set(df.columns)
    if missing:
        raise DomainError(f"{path} must contain columns x and y, missing {sorted(missing)}")
    df = df[["x", "y"]].apply(pd.to_numeric, errors="coerce").dropna()
    df = df.sort_values("x", kind="mergesort")
    dup = df["x"].duplicated(keep=False)
    if dup.any():
        raise DomainError(f"{path} has duplicate x values: {sorted(df.loc[dup, 'x'].unique().tolist())[:5]}")
    if len(df) < 2:
        raise DomainError(f"{path} has fewer than 2 usable rows")
    return DataSet(df["x"].to_numpy(), df["y"].to_numpy(), str(path))


def heterogeneous_truth(x) -> np.ndarray:
    """Smooth on [0, 1/3], then an oscillation with two bumps toward the right end."""
    x = np.asarray(x, dtype=np.float64)
    smooth = 0.6 * np.sin(2.0 * np.pi * x / 1.5)
    wiggle = 0.5 * np.sin(12.0 * np.pi * x) * (x > 1.0 / 3.0) * (x - 1.0 / 3.0) ** 2 * 9.0 / 4.0
    bumps = 1.2 * np.exp(-((x - 0.72) / 0.03) ** 2) - 0.8 * np.exp(-((x - 0.88) / 0.02) ** 2)
    return smooth + wiggle + bumps


def heterogeneous_signal(n: int, rng: np.random.Generator, design: str = "random",
                         noise: float = 0.1) -> tuple[DataSet, np.ndarray]:
    """Noisy samples of ``heterogeneous_truth`` on [0, 1] and the noiseless values.

    The random design draws sorted Beta(1.2, 0.9) points, denser to the
    right where the signal varies more, and pins the ends at 0 and 1.
    """
    if design not in DESIGNS:
        raise DomainError(f"unknown design {design!r}, expected one of {DESIGNS}")
    if n < 4:
        raise DomainError(f"need at least 4 points, got {n}")
    if design == "uniform":
        x = np.linspace(0.0, 1.0, n)
    else:
        inner = np.sort(rng.beta(1.2, 0.9, size=n - 2))
        x = np.concatenate([[0.0], inner, [1.0]])
        if np.any(np.diff(x) <= 0):
            x = np.linspace(0.0, 1.0, n)
    truth = heterogeneous_truth(x)
    y = truth + noise * rng.standard_normal(n)
    return DataSet(x, y, f"synthetic:{design}"), truth
