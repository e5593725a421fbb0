"""Linear readout layer: design matrices, least-squares training, prediction.

Training uses minimal-norm least squares (pseudoinverse semantics via a
singular-value cutoff) instead of the explicit normal-equations inverse,
which is singular whenever feature columns are collinear. Both agree when
the normal equations are well posed.
"""

from __future__ import annotations

import numpy as np

SV_CUTOFF = 1e-12  # relative singular-value cutoff, in units of sigma_max


def _values(x) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=float)


def assemble_design_matrix(features, row_range: tuple[int, int]) -> np.ndarray:
    """Select feature rows [start, stop) and append the all-ones bias column."""
    vals = _values(features)
    if vals.ndim != 2:
        raise ValueError("feature matrix must be two-dimensional")
    start, stop = row_range
    if not (0 <= start < stop <= vals.shape[0]):
        raise ValueError(f"row range [{start}, {stop}) invalid for {vals.shape[0]} rows")
    rows = vals[start:stop]
    return np.hstack([rows, np.ones((rows.shape[0], 1))])


def fit_readout(x: np.ndarray, y, ridge: float = 0.0) -> np.ndarray:
    """Minimal-norm least-squares weights for y ~ X w.

    With `ridge` > 0 solves the Tikhonov-regularized normal equations
    instead; the default is the plain pseudoinverse solution.
    """
    x = np.asarray(x, dtype=float)
    yv = _values(y)
    if x.ndim != 2 or yv.ndim != 1 or x.shape[0] != yv.shape[0]:
        raise ValueError(f"incompatible shapes X {x.shape}, y {yv.shape}")
    if x.shape[0] < 1:
        raise ValueError("need at least one training row")
    if ridge > 0.0:
        gram = x.T @ x + ridge * np.eye(x.shape[1])
        return np.linalg.solve(gram, x.T @ yv)
    w, *_ = np.linalg.lstsq(x, yv, rcond=SV_CUTOFF)
    return w


def predict(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Readout prediction X w."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.ndim != 2 or x.shape[1] != w.shape[0]:
        raise ValueError(f"incompatible shapes X {x.shape}, w {w.shape}")
    return x @ w
