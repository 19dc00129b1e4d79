# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional, Union

import numpy as np
from mmengine.config import Config

from unigap.datasets import GraphBundle, covariance_matrix, synth_latent_graph
from unigap.utils.exceptions import ConfigError


@dataclass
class LatentSpec:
    """Parameters of the latent-space graph model and its risk analysis.

    ``sigma`` may be a scalar, a diagonal or a full ``dim x dim``
    covariance. ``lam`` and ``gamma`` are the ridge strengths of the
    downstream and propagation parameters; ``beta`` is carried for
    completeness and never enters the closed forms. ``p`` is the expected
    insertion rate.
    """

    sigma: Union[float, list, np.ndarray] = 1.0
    dim: int = 4
    n_train: int = 200
    n_val: int = 50
    n_test: int = 200
    lam: float = 1e-3
    gamma: float = 0.1
    beta: float = 1.0
    p: float = 0.5
    k_max: int = 32
    density: float = 20.0
    obs_dim: Optional[int] = None
    feature_noise: float = 2.0
    target_noise: float = 0.1
    seeds: List[int] = field(default_factory=lambda: [0])

    def __post_init__(self) -> None:
        errors = []
        try:
            self.sigma = covariance_matrix(self.sigma, int(self.dim))
        except ValueError as e:
            errors.append(f'sigma: {e}')
        if self.lam <= 0:
            errors.append(f'lam must be positive, got {self.lam}')
        if self.gamma <= 0:
            errors.append(f'gamma must be positive, got {self.gamma}')
        if self.beta < 0:
            errors.append(f'beta must be nonnegative, got {self.beta}')
        if not 0.0 <= self.p <= 1.0:
            errors.append(f'p must be in [0, 1], got {self.p}')
        if self.k_max < 4:
            errors.append(f'k_max must be at least 4, got {self.k_max}')
        if self.feature_noise < 0:
            errors.append(
                f'feature_noise must be nonnegative, got {self.feature_noise}')
        if self.obs_dim is not None and self.obs_dim < 1:
            errors.append(f'obs_dim must be at least 1, got {self.obs_dim}')
        for name in ('n_train', 'n_val', 'n_test'):
            if getattr(self, name) < 1:
                errors.append(f'{name} must be at least 1')
        if errors:
            raise ConfigError(errors)

    @property
    def n_nodes(self) -> int:
        return self.n_train + self.n_val + self.n_test

    def graph(self, seed: Optional[int] = None) -> GraphBundle:
        """Draw a graph with the configured split sizes."""
        n = self.n_nodes
        return synth_latent_graph(
            n,
            self.dim,
            self.sigma,
            density=self.density,
            seed=self.seeds[0] if seed is None else seed,
            obs_dim=self.obs_dim,
            feature_noise=self.feature_noise,
            target_noise=self.target_noise,
            train_ratio=self.n_train / n,
            val_ratio=self.n_val / n)

    def to_dict(self) -> dict:
        out = asdict(self)
        out['sigma'] = np.asarray(self.sigma).tolist()
        return out


def load_latent_spec(path: str) -> LatentSpec:
    """Read a :class:`LatentSpec` from a config file; unknown keys are
    rejected together with any invalid values."""
    cfg = Config.fromfile(path)
    known = {f.name for f in fields(LatentSpec)}
    values = {k: v for k, v in cfg.to_dict().items() if not k.startswith('_')}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f'unknown key {k!r}' for k in unknown)
    return LatentSpec(**values)
