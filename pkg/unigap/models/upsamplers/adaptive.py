# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Optional, Tuple

import numpy as np

from unigap.datasets import AugmentedGraph, GraphBundle
from unigap.diffcore import Variable, take
from unigap.registry import MODELS
from ..base import BaseComponent, glorot_uniform
from .augment import build_augmented
from .decision import InsertionDecision, edge_logits, sample_mask


def reverse_edge_index(src: np.ndarray, dst: np.ndarray,
                       n_nodes: int) -> np.ndarray:
    """For each directed edge, the position of its ``(min, max)``
    orientation in the row-major sorted edge list."""
    keys = src * n_nodes + dst
    canon = np.minimum(src, dst) * n_nodes + np.maximum(src, dst)
    idx = np.searchsorted(keys, canon)
    assert np.all(keys[idx] == canon), 'edge list is not symmetric'
    return idx


@MODELS.register_module()
class AdaptiveUpsampler(BaseComponent):
    """Learned per-edge insertion with a straight-through Gumbel mask.

    Args:
        in_channels (int): Width of the condensed trajectory.
        init_mode (str): Inserted-feature rule, see
            :func:`build_augmented`. Defaults to ``adaptive``.
        tie_reverse (bool): Share one decision between ``(i, j)`` and
            ``(j, i)``. Defaults to False.
        gate (bool): Scale inserted rows by the hard mask. Defaults to True.
    """

    def __init__(self,
                 in_channels: int,
                 init_mode: str = 'adaptive',
                 tie_reverse: bool = False,
                 gate: bool = True) -> None:
        super().__init__()
        self.in_channels = in_channels
        self.init_mode = init_mode
        self.tie_reverse = tie_reverse
        self.gate = gate
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        self.weight = self.parameter(
            glorot_uniform(rng, 2, 2 * self.in_channels))

    def decide(self,
               condensed: Variable,
               g: GraphBundle,
               temperature: float = 1.0,
               noise: bool = True,
               rng: Optional[np.random.Generator] = None
               ) -> InsertionDecision:
        src, dst = g.edges()
        logits = edge_logits(condensed, src, dst, self.weight)
        decision = sample_mask(logits, src, dst, temperature, noise, rng=rng)
        if self.tie_reverse and src.size:
            idx = reverse_edge_index(src, dst, g.n_nodes)
            hard = take(decision.hard, idx)
            soft = take(decision.soft, idx)
            decision = InsertionDecision(
                src, dst, logits, soft, hard.data[:, 1].astype(np.int64),
                hard)
        return decision

    def forward(self,
                condensed: Variable,
                g: GraphBundle,
                features: Variable,
                temperature: float = 1.0,
                noise: bool = True,
                rng: Optional[np.random.Generator] = None
                ) -> Tuple[AugmentedGraph, InsertionDecision]:
        decision = self.decide(condensed, g, temperature, noise, rng)
        aug = build_augmented(
            g, features, decision, self.init_mode, gate=self.gate)
        return aug, decision
