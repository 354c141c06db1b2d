"""Condition numbers of the three least squares routes on random knot sets."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from scipy.stats import median_abs_deviation

from ..basis.falling_factorial import FFBasisSpec, ffb_matrix
from ..grid.banded import condition_number
from ..grid.design import DesignGrid
from ..utils.errors import DomainError
from ..utils.logs import kv
from .projection import ROUTES, deriv_constraint_matrix
from .sparse import dbs_values_sparse

logger = logging.getLogger(__name__)

DESIGNS = ("even", "random")
BENCH_COLUMNS = ["n", "design", "route", "median_kappa", "mad_kappa"]


def _design(name: str) -> str:
    name = "random" if name == "uniform-random" else name
    if name not in DESIGNS:
        raise DomainError(f"unknown design {name!r}, expected one of {DESIGNS}")
    return name


def route_condition_numbers(grid: DesignGrid, k: int, knots) -> dict[str, float]:
    """kappa of H_T, of (A_{J^c})^T and of N_T for one knot set."""
    spec = FFBasisSpec(k, grid, knots)
    A_c = deriv_constraint_matrix(grid, k, spec.knots)
    return {
        "FF": condition_number(ffb_matrix(spec)),
        "DD": condition_number(A_c.T.tocsr()) if A_c.shape[0] else 1.0,
        "DB": condition_number(dbs_values_sparse(grid, k, spec.knots).values),
    }


def _one_rep(n: int, k: int, r: int, design: str, seed: np.random.SeedSequence) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    grid = DesignGrid.uniform(n) if design == "even" else DesignGrid.uniform_random(n, rng)
    knots = np.sort(rng.choice(np.arange(k, n - 1), size=r, replace=False))
    return route_condition_numbers(grid, k, knots)


def _summarize(values: np.ndarray) -> tuple[float, float]:
    med = float(np.median(values))
    if not np.isfinite(med):
        return med, float("inf")
    return med, float(median_abs_deviation(values))


def cond_benchmark(n: int, k: int = 3, r: int | None = None, design: str = "even",
                   reps: int = 30, seed: int = 0, workers: int = 1) -> pd.DataFrame:
    """Median and MAD of the condition number per route over ``reps`` knot draws.

    Knots are drawn without replacement from positions k..n-2; r defaults
    to floor(n / 10). Each repetition gets its own spawned seed, so results
    do not depend on ``workers``.
    """
    design = _design(design)
    if n < 50:
        raise DomainError(f"benchmark needs n >= 50, got {n}")
    r = n // 10 if r is None else int(r)
    if r < 0 or r > n - k - 1:
        raise DomainError(f"cannot draw {r} knots from {n - k - 1} positions")
    seeds = np.random.SeedSequence(seed).spawn(reps)
    logger.info(kv("COND_BENCH", n=n, k=k, r=r, design=design, reps=reps, seed=seed, workers=workers))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _one_rep(n, k, r, design, s), seeds))
    else:
        results = [_one_rep(n, k, r, design, s) for s in seeds]
    rows = []
    for route in ROUTES:
        med, mad = _summarize(np.array([res[route] for res in results]))
        rows.append({"n": n, "design": design, "route": route, "median_kappa": med, "mad_kappa": mad})
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)
