# Copyright (c) The UniGAP Authors. All rights reserved.
"""Multi-view condensation: compress an ``L``-hop trajectory into one
vector per node."""
from typing import Optional, Union

import numpy as np

from unigap.diffcore import (Variable, add, as_variable, matmul, mul,
                             reduce_sum, reshape, softmax, transpose)
from unigap.registry import MODELS
from unigap.utils.exceptions import ShapeError
from ..base import BaseComponent, glorot_uniform
from ..layers import AttentionReadout, HopAttentionBlock
from ..trajectory import Trajectory

TrajectoryLike = Union[Trajectory, Variable, np.ndarray]


def _as_tensor(t: TrajectoryLike) -> Variable:
    if isinstance(t, Trajectory):
        return t.as_variable()
    return as_variable(t)


class BaseMVC(BaseComponent):
    """Shared shape bookkeeping of the MVC encoders.

    Args:
        in_channels (int): Trajectory width ``d``.
        num_layers (int): Trajectory length ``L``.
        out_channels (int, optional): Condensed width. Defaults to
            ``in_channels``.
    """

    def __init__(self,
                 in_channels: int,
                 num_layers: int,
                 out_channels: Optional[int] = None) -> None:
        super().__init__()
        if num_layers < 1:
            raise ValueError(f'num_layers must be >= 1, got {num_layers}')
        self.in_channels = in_channels
        self.num_layers = num_layers
        self.out_channels = out_channels or in_channels

    def _check(self, t: Variable) -> None:
        if t.ndim != 3 or t.shape[0] != self.num_layers \
                or t.shape[2] != self.in_channels:
            raise ShapeError(f'{type(self).__name__}', t.shape,
                             (self.num_layers, None, self.in_channels))

    def __call__(self, t: TrajectoryLike) -> Variable:
        return self.forward(t)


@MODELS.register_module()
class TrajectoryMLPMixer(BaseMVC):
    """Score each hop, softmax over hops, pool, then mix channels.

    ``s[l, i] = <w_traj, T[l, i]>``, ``a = softmax_l(s)`` and the output
    is ``(sum_l a[l, i] T[l, i]) W_channel``.
    """

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.hop_weights: Optional[np.ndarray] = None
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        self.w_traj = self.parameter(
            glorot_uniform(rng, 1, self.in_channels))
        self.w_channel = self.parameter(
            glorot_uniform(rng, self.in_channels, self.out_channels))

    def forward(self, t: TrajectoryLike) -> Variable:
        t = _as_tensor(t)
        self._check(t)
        length, n, _ = t.shape
        scores = reshape(matmul(t, transpose(self.w_traj)), (length, n))
        weights = softmax(scores, axis=0)
        self.hop_weights = weights.data
        pooled = reduce_sum(mul(reshape(weights, (length, n, 1)), t), axis=0)
        return matmul(pooled, self.w_channel)


@MODELS.register_module()
class TrajectoryTransformer(BaseMVC):
    """Shallow Transformer over each node's hop tokens with an attention
    readout.

    Args:
        num_heads (int): Attention heads. Defaults to 2.
        ffn_ratio (int): Feed-forward expansion. Defaults to 2.
        num_blocks (int): Encoder blocks. Defaults to 1.
    """

    def __init__(self,
                 in_channels: int,
                 num_layers: int,
                 out_channels: Optional[int] = None,
                 num_heads: int = 2,
                 ffn_ratio: int = 2,
                 num_blocks: int = 1) -> None:
        super().__init__(in_channels, num_layers, out_channels)
        self.num_blocks = num_blocks
        for i in range(num_blocks):
            setattr(self, f'block{i}',
                    HopAttentionBlock(in_channels, num_heads, ffn_ratio))
        self.readout = AttentionReadout(in_channels)
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        self.hop_embedding = self.parameter(
            0.02 * rng.standard_normal((self.num_layers, self.in_channels)))
        for i in range(self.num_blocks):
            getattr(self, f'block{i}').init_weights(rng)
        self.readout.init_weights(rng)
        self.w_channel = self.parameter(
            glorot_uniform(rng, self.in_channels, self.out_channels))

    def forward(self, t: TrajectoryLike) -> Variable:
        t = _as_tensor(t)
        self._check(t)
        tokens = add(transpose(t, (1, 0, 2)), self.hop_embedding)
        for i in range(self.num_blocks):
            tokens = getattr(self, f'block{i}').forward(tokens)
        return matmul(self.readout.forward(tokens), self.w_channel)


def mvc_tmm(t: TrajectoryLike, encoder: TrajectoryMLPMixer) -> Variable:
    return encoder.forward(t)


def mvc_tt(t: TrajectoryLike, encoder: TrajectoryTransformer) -> Variable:
    return encoder.forward(t)
