# Copyright (c) The UniGAP Authors. All rights reserved.
"""Joint optimum of a linear GNN with a learnable propagation mix.

The propagation operator ``M(t) = I + t (P - I)`` interpolates between no
message passing (``t = 0``) and the normalized adjacency ``P``
(``t = 1``); ``H(t) = M(t)^k X``. The objective, without the MAD term, is
``||Y - H theta||^2 / 2n + lam/2 ||theta||^2 + gamma t^2``.
"""
from typing import NamedTuple, Optional, Tuple

import numpy as np
from mmengine.logging import print_log
from scipy.optimize import minimize

from unigap.datasets import (GraphBundle, normalize_adjacency,
                             synth_latent_graph)
from .ridge import ridge_fit


class StationarityResult(NamedTuple):
    theta: np.ndarray
    theta_u: float
    grad_norm: float
    theta_residual: float
    theta_u_residual: float
    converged: bool


def _features_and_derivative(p_op: np.ndarray, x: np.ndarray, t: float,
                             k: int) -> Tuple[np.ndarray, np.ndarray]:
    """``H(t)`` and ``dH/dt``."""
    eye = np.eye(p_op.shape[0])
    m = eye + t * (p_op - eye)
    powers = [eye]
    for _ in range(k):
        powers.append(m @ powers[-1])
    d = p_op - eye
    dh = sum(powers[j] @ d @ powers[k - 1 - j] for j in range(k)) @ x
    return powers[k] @ x, dh


def stationarity_check(g: Optional[GraphBundle] = None,
                       k: int = 2,
                       lam: float = 0.1,
                       gamma: float = 0.1,
                       seed: int = 0,
                       gtol: float = 1e-10) -> StationarityResult:
    """Minimize the joint objective and measure how well the optimum
    satisfies both closed-form optimality conditions.

    ``theta_residual`` compares ``theta`` with the ridge solution on
    ``H(t)``; ``theta_u_residual`` compares ``t`` with
    ``(dH/dt theta)^T (Y - H theta) / (2 n gamma)``.

    Args:
        g (GraphBundle, optional): Graph with regression targets. Defaults
            to a 20-node latent-space graph drawn from ``seed``.
    """
    if g is None:
        g = synth_latent_graph(20, 3, density=4.0, seed=seed, obs_dim=3)
    if g.targets is None:
        raise ValueError(f'graph {g.name!r} carries no regression targets')
    x = np.asarray(g.features, dtype=np.float64)
    y = np.asarray(g.targets, dtype=np.float64).reshape(-1)
    n, m = x.shape
    p_op = normalize_adjacency(g).toarray()

    def objective(z: np.ndarray) -> Tuple[float, np.ndarray]:
        theta, t = z[:m], z[m]
        h, dh = _features_and_derivative(p_op, x, t, k)
        r = y - h @ theta
        value = r @ r / (2 * n) + lam / 2 * theta @ theta + gamma * t * t
        grad_theta = -h.T @ r / n + lam * theta
        grad_t = -(dh @ theta) @ r / n + 2 * gamma * t
        return value, np.append(grad_theta, grad_t)

    result = minimize(
        objective,
        np.zeros(m + 1),
        jac=True,
        method='BFGS',
        options=dict(gtol=gtol, maxiter=10000))
    theta, t = result.x[:m], float(result.x[m])
    _, grad = objective(result.x)
    h, dh = _features_and_derivative(p_op, x, t, k)
    theta_closed = ridge_fit(h, y, lam).reshape(-1)
    t_closed = (dh @ theta) @ (y - h @ theta) / (2 * n * gamma)
    grad_norm = float(np.linalg.norm(grad))
    out = StationarityResult(theta, t, grad_norm,
                             float(np.linalg.norm(theta - theta_closed)),
                             float(abs(t - t_closed)), grad_norm < 1e-8)
    print_log(
        f'stationarity: t={t:.6g} |grad|={grad_norm:.3g} '
        f'residuals theta={out.theta_residual:.3g} '
        f't={out.theta_u_residual:.3g}',
        logger='current')
    return out
