"""Performance and dynamics metrics: R^2, memory capacity, NMSE, ESP divergence."""

from __future__ import annotations

import numpy as np


def _values(x) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=float)


def r_squared(y_true, y_pred, return_flag: bool = False):
    """Squared Pearson correlation cov^2(y, yhat) / (var(y) var(yhat)).

    A constant series on either side makes the ratio undefined; that case
    returns 0.0 (no linear association) and, with `return_flag`, a True
    degenerate marker so capacity sums stay well defined.
    """
    yt, yp = _values(y_true), _values(y_pred)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise ValueError(f"series shapes differ: {yt.shape} vs {yp.shape}")
    if len(yt) < 2:
        raise ValueError("need at least two samples")
    # exact constant check: np.var of a constant array can round off above 0
    if yt.max() == yt.min() or yp.max() == yp.min():
        return (0.0, True) if return_flag else 0.0
    vt, vp = np.var(yt), np.var(yp)
    cov = np.mean((yt - yt.mean()) * (yp - yp.mean()))
    r2 = float(cov * cov / (vt * vp))
    r2 = min(r2, 1.0)  # clip roundoff excursions above the Cauchy-Schwarz bound
    return (r2, False) if return_flag else r2


def memory_capacity(r2_by_tau: dict) -> float:
    """Sum of R^2 values over the delay set."""
    if not r2_by_tau:
        raise ValueError("need at least one delay entry")
    return float(sum(r2_by_tau.values()))


def nmse(y_true, y_pred) -> float:
    """Normalized mean squared error sum((y - yhat)^2) / sum(y^2)."""
    yt, yp = _values(y_true), _values(y_pred)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise ValueError(f"series shapes differ: {yt.shape} vs {yp.shape}")
    denom = float(np.sum(yt * yt))
    if denom <= 0.0:
        raise ValueError("target series is identically zero; NMSE undefined")
    return float(np.sum((yt - yp) ** 2) / denom)


def esp_divergence(component_runs) -> np.ndarray:
    """Per-timestep mean absolute difference over all unordered run pairs."""
    runs = [np.asarray(r, dtype=float) for r in component_runs]
    if len(runs) < 2:
        raise ValueError("need at least two runs")
    length = len(runs[0])
    if any(len(r) != length for r in runs):
        raise ValueError("runs must have equal length")
    stack = np.stack(runs)
    total = np.zeros(length)
    n_pairs = 0
    for i in range(len(runs)):
        for j in range(i + 1, len(runs)):
            total += np.abs(stack[i] - stack[j])
            n_pairs += 1
    return total / n_pairs
