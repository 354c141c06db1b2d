"""Error and goodness-of-fit measures used by the command-line tools."""

from __future__ import annotations

import numpy as np


def rss(y, theta) -> float:
    """Residual sum of squares of a fit.

    Parameters
    ----------
    y : array_like
        Observed responses.
    theta : array_like
        Fitted values aligned with ``y``.

    Returns
    -------
    float
        ``sum((y - theta) ** 2)``.
    """
    y = np.asarray(y, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    return float(np.sum((y - theta) ** 2))


def r_squared(y, theta) -> float:
    """Fraction of the variance of ``y`` explained by ``theta``.

    Returns 0.0 when ``y`` is constant, mirroring how a flat response has
    nothing left to explain.
    """
    y = np.asarray(y, dtype=np.float64)
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss <= 0:
        return 0.0
    return 1.0 - rss(y, theta) / tss


def relative_deviation(value, reference) -> float:
    """Largest entrywise deviation relative to the reference scale.

    Parameters
    ----------
    value, reference : array_like
        Arrays of the same shape (scalars allowed).

    Returns
    -------
    float
        ``max|value - reference| / max(1, max|reference|)``; the floor of 1
        keeps identities whose exact value is 0 on an absolute scale.
    """
    value = np.asarray(value, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    scale = max(1.0, float(np.abs(reference).max(initial=0.0)))
    return float(np.abs(value - reference).max(initial=0.0)) / scale


def round_significant(values, digits: int = 12) -> np.ndarray:
    """Round every entry to ``digits`` significant digits (zeros stay zero)."""
    values = np.asarray(values, dtype=np.float64)
    return np.array([float(f"{v:.{digits}g}") for v in values.ravel()]).reshape(values.shape)
