"""Solver settings and fit results."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping

import numpy as np

from ..utils.errors import DomainError

MODES = ("standard", "dbspline")


@dataclass(frozen=True)
class SolverConfig:
    """Tuning parameter and ADMM settings.

    ``rho`` defaults to ``lam`` (1.0 when ``lam`` is 0) and is the starting
    value; with ``auto_rho`` it is rebalanced every ``rho_period`` iterations
    during the first half of the run. The stopping rule
    combines absolute and relative residual tolerances:
    ||r|| <= sqrt(p) tol_primal + rel_tol max(||D theta||, ||z||) and
    ||s|| <= sqrt(n) tol_dual + rel_tol ||rho D^T u||.
    """
    lam: float = 1.0
    rho: float | None = None
    max_iter: int = 20000
    tol_primal: float = 1e-8
    tol_dual: float = 1e-8
    rel_tol: float = 1e-6
    polish: bool = True
    mode: str = "standard"
    warm_iters: int = 200
    max_expansions: int = 5
    auto_rho: bool = True
    rho_period: int = 10

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"lambda must be nonnegative, got {self.lam}")
        if self.rho is not None and self.rho <= 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if min(self.tol_primal, self.tol_dual, self.rel_tol) <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.mode not in MODES:
            raise DomainError(f"unknown solver mode {self.mode!r}, expected one of {MODES}")
        if self.warm_iters < 1 or self.rho_period < 1:
            raise DomainError(f"warm_iters and rho_period must be at least 1, got {self.warm_iters}, {self.rho_period}")
        if self.max_expansions < 0:
            raise DomainError(f"max_expansions must be nonnegative, got {self.max_expansions}")

    @property
    def effective_rho(self) -> float:
        if self.rho is not None:
            return float(self.rho)
        return float(self.lam) if self.lam > 0 else 1.0

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any] | None) -> "SolverConfig":
        mapping = dict(mapping or {})
        if "lambda" in mapping and "lam" not in mapping:
            mapping["lam"] = mapping.pop("lambda")
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in mapping.items() if k in known and v is not None})

    def with_overrides(self, **overrides) -> "SolverConfig":
        """Copy with the non-None overrides applied (CLI flags over YAML values)."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True, eq=False)
class FitResult:
    """Fitted values and diagnostics of one solve.

    ``objective`` is 1/2 ||y - theta_hat||^2 + lam * penalty. For trend
    filtering the penalty is ||C^{k+1} theta_hat||_1; for the quadratic
    smoothers it is half the quadratic form, so both families share that
    identity. ``active_set`` holds zero-based rows of the penalized
    difference operator that are nonzero at the solution.
    """
    theta_hat: np.ndarray
    objective: float
    penalty: float
    active_set: np.ndarray
    kkt_residual: float
    iters: int
    method: str
    lam: float
    converged: bool = True
    df: float = float("nan")
    r_norm: float = 0.0
    s_norm: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def n_active(self) -> int:
        return int(self.active_set.size)
