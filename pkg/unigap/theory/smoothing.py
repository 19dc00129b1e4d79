# Copyright (c) The UniGAP Authors. All rights reserved.
"""Closed-form covariance of smoothed latent features and its decay rate."""
import logging
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from mmengine.logging import print_log

from .curve import MODES, RiskCurve

SINGULAR_JITTER = 1e-10
SINGULAR_TOL = 1e-12


def _checked_sigma(sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError(f'sigma must be square, got {sigma.shape}')
    if not np.allclose(sigma, sigma.T, atol=1e-12):
        raise ValueError('sigma must be symmetric')
    eigvals = scipy.linalg.eigvalsh(sigma)
    if eigvals.min() < -1e-10:
        raise ValueError('sigma must be positive semidefinite')
    if eigvals.min() < SINGULAR_TOL:
        print_log(
            f'sigma is singular (min eigenvalue {eigvals.min():.3g}), '
            f'adding {SINGULAR_JITTER:g} * I',
            logger='current',
            level=logging.WARNING)
        sigma = sigma + SINGULAR_JITTER * np.eye(sigma.shape[0])
    return sigma


def _propagation(sigma: np.ndarray) -> np.ndarray:
    eye = np.eye(sigma.shape[0])
    a = scipy.linalg.solve(sigma + eye, sigma, assume_a='pos').T
    return (a + a.T) / 2


def propagation_matrix(sigma: np.ndarray) -> np.ndarray:
    """``A = (I + sigma^-1)^-1``, evaluated as ``sigma (sigma + I)^-1``."""
    return _propagation(_checked_sigma(sigma))


def smoothing_covariance(sigma: np.ndarray,
                         k: int,
                         mode: str = 'plain',
                         p: float = 0.5) -> np.ndarray:
    """Covariance of features after ``k`` rounds of smoothing.

    ``plain`` gives ``A^(2k) sigma``. ``unigap`` gives
    ``1/2 A^(k-1) (I + ((1-p) I + p A)^2) sigma`` where ``p`` is the
    expected insertion rate.
    """
    if k < 1:
        raise ValueError(f'k must be at least 1, got {k}')
    if mode not in MODES:
        raise ValueError(f'mode must be one of {MODES}, got {mode!r}')
    if not 0.0 <= p <= 1.0:
        raise ValueError(f'p must be in [0, 1], got {p}')
    sigma = _checked_sigma(sigma)
    a = _propagation(sigma)
    eye = np.eye(sigma.shape[0])
    if mode == 'plain':
        out = np.linalg.matrix_power(a, 2 * k) @ sigma
    else:
        mix = (1.0 - p) * eye + p * a
        out = 0.5 * np.linalg.matrix_power(a, k - 1) @ (eye + mix @ mix) \
            @ sigma
    return (out + out.T) / 2


def operator_norm(matrix: np.ndarray,
                  max_iters: int = 50,
                  tol: float = 1e-10,
                  rng: Optional[np.random.Generator] = None) -> float:
    """Spectral norm by power iteration on ``M^T M``."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if rng is None:
        rng = np.random.default_rng(0)
    gram = matrix.T @ matrix
    v = rng.standard_normal(gram.shape[0])
    norm = np.linalg.norm(v)
    if norm == 0 or not np.any(gram):
        return 0.0
    v /= norm
    estimate = 0.0
    for _ in range(max_iters):
        w = gram @ v
        w_norm = np.linalg.norm(w)
        if w_norm == 0:
            return 0.0
        v = w / w_norm
        if abs(w_norm - estimate) <= tol * w_norm:
            estimate = w_norm
            break
        estimate = w_norm
    return float(np.sqrt(estimate))


def fit_decay_slope(k: Sequence[int],
                    values: Sequence[float],
                    tail: float = 0.5) -> float:
    """Least-squares slope of ``log(value)`` against ``k`` over the last
    ``tail`` fraction of rounds (``k >= tail * k_max``)."""
    k = np.asarray(k, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    keep = (k >= tail * k.max()) & (values > 0)
    if keep.sum() < 2:
        raise ValueError('need at least two positive values to fit a slope')
    slope, _ = np.polyfit(k[keep], np.log(values[keep]), 1)
    return float(slope)


def rate_check(sigma: np.ndarray, k_max: int, p: float = 0.5) -> RiskCurve:
    """Operator norms of both smoothed covariances for ``k = 1..k_max``
    with their fitted decay slopes.

    A ratio ``slope(unigap) / slope(plain)`` near 0.5 means smoothing
    proceeds at about half the rate with insertion.
    """
    if k_max < 4:
        raise ValueError(f'k_max must be at least 4, got {k_max}')
    sigma = _checked_sigma(sigma)
    ks = np.arange(1, k_max + 1)
    values = {
        mode: np.array([
            operator_norm(smoothing_covariance(sigma, int(k), mode, p))
            for k in ks
        ])
        for mode in MODES
    }
    slopes = {mode: fit_decay_slope(ks, v) for mode, v in values.items()}
    degenerate = any(s >= 0 for s in slopes.values())
    if degenerate:
        print_log(
            f'non-decaying smoothing curve, slopes {slopes}',
            logger='current',
            level=logging.WARNING)
    return RiskCurve(ks, values, 'covariance_norm', slopes, degenerate)
