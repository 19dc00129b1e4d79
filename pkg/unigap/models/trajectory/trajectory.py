# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from unigap.datasets.io import write_matrix_bin
from unigap.diffcore import Variable, l2_normalize_rows


def periodic_normalize(tensor: np.ndarray,
                       norm_period: Optional[int]) -> np.ndarray:
    """Row-normalize every slice whose 1-based layer index is a multiple
    of ``norm_period``; ``None`` disables normalization."""
    out = np.array(tensor, dtype=np.float64, copy=True)
    if norm_period is None:
        return out
    if norm_period < 1:
        raise ValueError(f'norm_period must be >= 1 or None, '
                         f'got {norm_period}')
    for layer in range(out.shape[0]):
        if (layer + 1) % norm_period == 0:
            out[layer] = l2_normalize_rows(out[layer])
    return out


@dataclass(frozen=True)
class Trajectory:
    """Detached ``L x N x d`` stack of per-layer node representations."""

    tensor: np.ndarray
    norm_period: Optional[int] = 2

    def __post_init__(self) -> None:
        tensor = np.asarray(self.tensor, dtype=np.float64)
        if tensor.ndim != 3:
            raise ValueError(
                f'trajectory must be L x N x d, got shape {tensor.shape}')
        tensor.setflags(write=False)
        object.__setattr__(self, 'tensor', tensor)

    @property
    def num_layers(self) -> int:
        return self.tensor.shape[0]

    @property
    def num_nodes(self) -> int:
        return self.tensor.shape[1]

    @property
    def width(self) -> int:
        return self.tensor.shape[2]

    @property
    def is_zero(self) -> bool:
        return not np.any(self.tensor)

    def as_variable(self) -> Variable:
        return Variable(self.tensor)

    def permute_nodes(self, perm: Sequence[int]) -> 'Trajectory':
        return Trajectory(self.tensor[:, perm, :], self.norm_period)

    def dump(self, path: str) -> None:
        """Write as an ``(L*N) x d`` binary matrix (layer-major)."""
        write_matrix_bin(self.tensor.reshape(-1, self.width), path)


def collect_from_model(hidden_states: List[Variable],
                       n_original: int,
                       norm_period: Optional[int] = 2,
                       num_layers: Optional[int] = None) -> Trajectory:
    """Snapshot the original-node rows of each layer's hidden state.

    The result is a plain array, so later epochs cannot push gradients
    into it.
    """
    if num_layers is not None and len(hidden_states) != num_layers:
        raise ValueError(f'expected {num_layers} hidden states, '
                         f'got {len(hidden_states)}')
    if not hidden_states:
        raise ValueError('no hidden states to collect')
    for h in hidden_states:
        if h.shape[0] < n_original:
            raise ValueError(f'hidden state has {h.shape[0]} rows, fewer '
                             f'than {n_original} original nodes')
    stacked = np.stack([h.data[:n_original] for h in hidden_states])
    return Trajectory(periodic_normalize(stacked, norm_period), norm_period)


def project_trajectory(t: Trajectory, width: int,
                       rng: np.random.Generator) -> Trajectory:
    """Map a trajectory to ``width`` channels by a fixed Gaussian
    projection, then re-apply the periodic normalization."""
    if t.width == width:
        return t
    projection = rng.standard_normal((t.width, width)) / np.sqrt(t.width)
    return Trajectory(
        periodic_normalize(t.tensor @ projection, t.norm_period),
        t.norm_period)
