# Copyright (c) The UniGAP Authors. All rights reserved.
"""Synthetic graphs: the latent-space random graph model and a
stochastic block model."""
from typing import Optional, Sequence, Union

import numpy as np

from .bundle import GraphBundle, SplitMasks

CovarianceSpec = Union[float, Sequence[float], np.ndarray]


def covariance_matrix(sigma: CovarianceSpec, d: int) -> np.ndarray:
    """Expand a scalar, diagonal or full covariance spec to ``d x d``."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim == 0:
        cov = float(sigma) * np.eye(d)
    elif sigma.ndim == 1:
        if sigma.shape[0] != d:
            raise ValueError(f'diagonal covariance needs {d} entries, '
                             f'got {sigma.shape[0]}')
        cov = np.diag(sigma)
    else:
        if sigma.shape != (d, d):
            raise ValueError(f'covariance must be {d}x{d}, got {sigma.shape}')
        cov = sigma
    if not np.allclose(cov, cov.T, atol=1e-12):
        raise ValueError('covariance must be symmetric')
    if np.linalg.eigvalsh(cov).min() < -1e-10:
        raise ValueError('covariance must be positive semidefinite')
    return cov


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(cov)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.T


def random_split(n: int,
                 rng: np.random.Generator,
                 train: float = 0.5,
                 val: float = 0.25) -> SplitMasks:
    order = rng.permutation(n)
    n_train = max(1, int(round(train * n)))
    n_val = max(1, int(round(val * n)))
    if n_train + n_val >= n:
        raise ValueError(f'{n} nodes are too few for a three-way split')
    masks = [np.zeros(n, dtype=bool) for _ in range(3)]
    masks[0][order[:n_train]] = True
    masks[1][order[n_train:n_train + n_val]] = True
    masks[2][order[n_train + n_val:]] = True
    return SplitMasks(*masks)


def synth_latent_graph(n: int,
                       d: int,
                       sigma: CovarianceSpec = 1.0,
                       density: float = 5.0,
                       seed: int = 0,
                       obs_dim: Optional[int] = None,
                       feature_noise: float = 2.0,
                       target_noise: float = 0.1,
                       train_ratio: float = 0.5,
                       val_ratio: float = 0.25) -> GraphBundle:
    """Sample a graph from the latent-space random graph model.

    Latents ``Z ~ N(0, sigma)``. Node pairs are weighted by the Gaussian
    kernel ``exp(-|z_i - z_j|^2 / 2)`` and exactly ``round(density * n /
    2)`` of them are drawn without replacement in proportion to that
    weight (Gumbel top-k), so the mean degree is ``density`` and a
    neighbor's expected latent is ``(I + sigma^-1)^-1 z_i``. Observed
    features are ``Z P + feature_noise * E`` for a fixed random projection
    ``P``, regression targets are ``Z theta + noise`` and labels mark the
    targets above their median.

    Args:
        n (int): Number of nodes, at least 2.
        d (int): Latent dimension.
        sigma: Scalar, diagonal or full latent covariance.
        density (float): Target mean degree.
        seed (int): Seed for every draw.
        obs_dim (int, optional): Observed feature width. Defaults to
            ``4 * d``.
        feature_noise (float): Standard deviation of the observation noise.
    """
    if n < 2:
        raise ValueError(f'need at least 2 nodes, got {n}')
    if feature_noise < 0:
        raise ValueError(
            f'feature_noise must be nonnegative, got {feature_noise}')
    cov = covariance_matrix(sigma, d)
    max_pairs = n * (n - 1) // 2
    n_pairs = int(round(density * n / 2))
    if density < 0 or n_pairs > max_pairs:
        raise ValueError(
            f'density {density} is infeasible for {n} nodes (mean degree '
            f'must lie in [0, {n - 1}])')

    rng = np.random.default_rng(seed)
    latent = rng.standard_normal((n, d)) @ _psd_sqrt(cov)
    obs_dim = 4 * d if obs_dim is None else obs_dim
    projection = rng.standard_normal((d, obs_dim)) / np.sqrt(d)
    features = latent @ projection
    if feature_noise > 0:
        features = features + feature_noise * rng.standard_normal(
            features.shape)
    theta = rng.standard_normal(d) / np.sqrt(d)
    targets = latent @ theta + target_noise * rng.standard_normal(n)

    iu, ju = np.triu_indices(n, k=1)
    if n_pairs:
        diff = latent[iu] - latent[ju]
        log_weight = -0.5 * np.einsum('ij,ij->i', diff, diff)
        keys = log_weight + rng.gumbel(size=log_weight.shape)
        top = np.argsort(-keys, kind='stable')[:n_pairs]
        src, dst = iu[top], ju[top]
    else:
        src = dst = np.zeros(0, dtype=np.int64)

    labels = (targets > np.median(targets)).astype(np.int64)
    masks = random_split(n, rng, train_ratio, val_ratio)
    return GraphBundle.from_edges(
        src,
        dst,
        n,
        features,
        labels,
        masks,
        name='latent',
        latent=latent,
        targets=targets[:, None])


def synth_sbm(sizes: Sequence[int] = (60, 60),
              p_in: float = 0.1,
              p_out: float = 0.05,
              feature_dim: int = 8,
              signal: float = 1.0,
              seed: int = 0) -> GraphBundle:
    """A stochastic block model with Gaussian class-mean features."""
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = labels.shape[0]
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, p_in, p_out)
    upper = np.triu(rng.random((n, n)) < prob, k=1)
    src, dst = np.nonzero(upper)
    means = rng.standard_normal((len(sizes), feature_dim)) * signal
    features = means[labels] + rng.standard_normal((n, feature_dim))
    masks = random_split(n, rng, 0.3, 0.2)
    return GraphBundle.from_edges(
        src, dst, n, features, labels, masks, name='sbm')
