# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Dict, Optional

import numpy as np

from unigap.datasets import GraphBundle
from unigap.diffcore import Variable
from unigap.registry import TRAJECTORIES
from .precompute import precompute_mp, precompute_zero
from .pretrain import PretextResult, pretrain_encoder
from .trajectory import Trajectory, collect_from_model


class BaseTrajectory:
    """Initial trajectory strategy.

    Args:
        norm_period (int, optional): Row-normalize every ``norm_period``
            layers. ``None`` disables normalization. Defaults to 2.
    """

    def __init__(self, norm_period: Optional[int] = 2) -> None:
        self.norm_period = norm_period

    def compute(self, g: GraphBundle, num_layers: int, width: int,
                rng: np.random.Generator) -> Trajectory:
        raise NotImplementedError

    def warm_start_state(self) -> Optional[Dict[str, np.ndarray]]:
        return None


@TRAJECTORIES.register_module()
class ZeroTrajectory(BaseTrajectory):

    def compute(self, g, num_layers, width, rng=None):
        return precompute_zero(g, num_layers, width, self.norm_period)


@TRAJECTORIES.register_module()
class MessagePassingTrajectory(BaseTrajectory):
    """Propagated raw features; width is the input feature width."""

    def __init__(self,
                 operator: str = 'adjacency',
                 norm_period: Optional[int] = 2) -> None:
        super().__init__(norm_period)
        self.operator = operator

    def compute(self, g, num_layers, width, rng=None):
        return precompute_mp(g, num_layers, self.operator, self.norm_period)


@TRAJECTORIES.register_module()
class PretrainedTrajectory(BaseTrajectory):
    """Hidden states of a pretext-trained GCN encoder.

    With ``warm_start=True`` the encoder's graph layers also initialize a
    downstream GCN of matching shape.
    """

    def __init__(self,
                 norm_period: Optional[int] = 2,
                 mask_ratio: float = 0.3,
                 epochs: int = 100,
                 lr: float = 0.01,
                 weight_decay: float = 0.0,
                 warm_start: bool = True) -> None:
        super().__init__(norm_period)
        self.mask_ratio = mask_ratio
        self.epochs = epochs
        self.lr = lr
        self.weight_decay = weight_decay
        self.warm_start = warm_start
        self.result: Optional[PretextResult] = None

    def compute(self, g, num_layers, width, rng=None):
        self.result = pretrain_encoder(
            g,
            num_layers=num_layers,
            hidden_channels=width,
            mask_ratio=self.mask_ratio,
            epochs=self.epochs,
            lr=self.lr,
            weight_decay=self.weight_decay,
            rng=rng)
        encoder = self.result.encoder.eval()
        _, hidden = encoder(g.adjacency, Variable(g.features))
        return collect_from_model(hidden, g.n_nodes, self.norm_period,
                                  num_layers)

    def warm_start_state(self):
        if not self.warm_start or self.result is None:
            return None
        names = self.result.encoder.graph_layer_names()
        return {name: self.result.state[name] for name in names}
