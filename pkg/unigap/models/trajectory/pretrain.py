# Copyright (c) The UniGAP Authors. All rights reserved.
"""Masked-feature reconstruction pretext for the trajectory encoder."""
from typing import Dict, List, NamedTuple, Optional

import numpy as np
from mmengine.logging import print_log

from unigap.datasets import GraphBundle
from unigap.diffcore import Tape, Variable, adam_step, backward, mse_loss
from unigap.utils.exceptions import DivergenceError, NonFiniteError
from ..backbones import GCN


class PretextResult(NamedTuple):
    encoder: GCN
    state: Dict[str, np.ndarray]
    losses: List[float]


def pretrain_encoder(g: GraphBundle,
                     num_layers: int = 2,
                     hidden_channels: int = 64,
                     mask_ratio: float = 0.3,
                     epochs: int = 100,
                     lr: float = 0.01,
                     weight_decay: float = 0.0,
                     activation: str = 'relu',
                     rng: Optional[np.random.Generator] = None,
                     log_interval: int = 0) -> PretextResult:
    """Train a GCN encoder to reconstruct masked feature entries.

    Each epoch zeroes a fresh ``mask_ratio`` share of feature entries and
    scores the decoder head by mean squared error on the masked entries
    (on all entries when ``mask_ratio`` is 0). The encoder's graph layers
    double as the source of pretrained trajectories and as a warm start
    for a downstream GCN of the same shape.
    """
    if not 0.0 <= mask_ratio < 1.0:
        raise ValueError(f'mask_ratio must be in [0, 1), got {mask_ratio}')
    rng = np.random.default_rng(0) if rng is None else rng
    encoder = GCN(
        g.num_features,
        hidden_channels,
        num_classes=g.num_features,
        num_layers=num_layers,
        activation=activation,
        dropout=0.0)
    encoder.init_weights(rng)
    operator = encoder.prepare_adjacency(g.adjacency)
    params = encoder.parameters()
    state: Dict = {}
    losses = []
    for epoch in range(epochs):
        if mask_ratio > 0:
            masked = rng.random(g.features.shape) < mask_ratio
            inputs = np.where(masked, 0.0, g.features)
        else:
            masked, inputs = None, g.features
        encoder.zero_grad()
        try:
            with Tape() as tape:
                recon, _ = encoder.forward(operator, Variable(inputs))
                loss = mse_loss(recon, g.features, masked)
            if not np.isfinite(loss.item()):
                raise NonFiniteError('pretext loss is not finite')
            backward(tape, loss)
        except NonFiniteError as e:
            raise DivergenceError(
                f'pretext diverged at epoch {epoch} (lr={lr}, '
                f'mask_ratio={mask_ratio}, hidden={hidden_channels}): '
                f'{e}') from e
        adam_step([p.data for p in params], [p.grad for p in params],
                  state,
                  lr=lr,
                  weight_decay=weight_decay)
        losses.append(loss.item())
        if log_interval and (epoch + 1) % log_interval == 0:
            print_log(
                f'pretext epoch {epoch + 1}/{epochs} loss={losses[-1]:.6f}',
                logger='current')
    return PretextResult(encoder, encoder.state_dict(), losses)
