# Copyright (c) The UniGAP Authors. All rights reserved.
"""Ridge regression on smoothed features."""
import numpy as np
import scipy.linalg

from unigap.utils.exceptions import NonFiniteError, ShapeError


def _as_column(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    return y[:, None] if y.ndim == 1 else y


def ridge_fit(h: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """``(H^T H / n + lam I)^-1 H^T Y / n`` by a positive-definite solve.

    Args:
        h (np.ndarray): ``n x m`` design.
        y (np.ndarray): ``n`` or ``n x t`` targets.
        lam (float): Ridge strength, positive.

    Returns:
        np.ndarray: ``m x t`` coefficients.
    """
    if lam <= 0:
        raise ValueError(f'lam must be positive, got {lam}')
    h = np.asarray(h, dtype=np.float64)
    y = _as_column(y)
    if h.shape[0] != y.shape[0]:
        raise ShapeError('ridge_fit', h.shape, y.shape)
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(y))):
        raise NonFiniteError('ridge_fit received non-finite inputs')
    n, m = h.shape
    gram = h.T @ h / n + lam * np.eye(m)
    return scipy.linalg.solve(gram, h.T @ y / n, assume_a='pos')


def test_risk(h_test: np.ndarray, theta: np.ndarray,
              y_test: np.ndarray) -> float:
    """``||Y - H theta||^2 / n_test``."""
    h_test = np.asarray(h_test, dtype=np.float64)
    y_test = _as_column(y_test)
    theta = _as_column(theta)
    if h_test.shape[1] != theta.shape[0] or h_test.shape[0] != y_test.shape[0]:
        raise ShapeError('test_risk', h_test.shape, theta.shape, y_test.shape)
    residual = y_test - h_test @ theta
    return float(np.sum(residual**2) / h_test.shape[0])


# keep pytest from collecting the risk function as a test
test_risk.__test__ = False
