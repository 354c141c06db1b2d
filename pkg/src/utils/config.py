"""Numerical tolerance record used across the library."""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Any, Mapping

from .io import read_config


@dataclass(frozen=True)
class NumericsConfig:
    """Tolerance constants.

    identity_tol is relative; pivot_floor is relative to the largest
    pivot of a factorization; active_tol is relative to max(1, max|v|);
    node_guard is relative to the interval length b - a.
    """
    identity_tol: float = 1e-8
    pivot_floor: float = 1e-14
    active_tol: float = 1e-8
    node_guard: float = 1e-12

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any] | None) -> "NumericsConfig":
        mapping = mapping or {}
        known = {f.name for f in fields(cls)}
        return cls(**{k: float(v) for k, v in mapping.items() if k in known})


DEFAULT_NUMERICS = NumericsConfig()


def load_numerics_config(path: str) -> NumericsConfig:
    """Read the ``numerics`` section of a YAML config file."""
    cfg = read_config(path) or {}
    return NumericsConfig.from_mapping(cfg.get("numerics"))
