# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Optional

import numpy as np

from unigap.diffcore import (Variable, add, matmul, mul, reduce_sum, relu,
                             reshape, scale, softmax, transpose)
from unigap.registry import MODELS
from ..base import BaseComponent, glorot_uniform


@MODELS.register_module()
class HopAttentionBlock(BaseComponent):
    """Self-attention and feed-forward over each node's hop sequence.

    Tokens are laid out ``N x L x d``; attention never crosses nodes.

    Args:
        embed_channels (int): Token width ``d``.
        num_heads (int): Attention heads; must divide ``d``. Defaults to 2.
        ffn_ratio (int): Hidden expansion of the feed-forward layer.
            Defaults to 2.
    """

    def __init__(self,
                 embed_channels: int,
                 num_heads: int = 2,
                 ffn_ratio: int = 2) -> None:
        super().__init__()
        assert embed_channels % num_heads == 0, \
            'embed_channels should be divisible by num_heads.'
        self.embed_channels = embed_channels
        self.num_heads = num_heads
        self.head_channels = embed_channels // num_heads
        self.ffn_channels = ffn_ratio * embed_channels
        self.attn_probs: Optional[np.ndarray] = None
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        d, f = self.embed_channels, self.ffn_channels
        for name in ('query', 'key', 'value', 'out'):
            setattr(self, f'{name}_weight',
                    self.parameter(glorot_uniform(rng, d, d)))
        self.ffn_weight1 = self.parameter(glorot_uniform(rng, d, f))
        self.ffn_bias1 = self.parameter(np.zeros(f))
        self.ffn_weight2 = self.parameter(glorot_uniform(rng, f, d))
        self.ffn_bias2 = self.parameter(np.zeros(d))

    def _split_heads(self, x: Variable) -> Variable:
        n, length, _ = x.shape
        x = reshape(x, (n, length, self.num_heads, self.head_channels))
        return transpose(x, (0, 2, 1, 3))

    def forward(self, tokens: Variable) -> Variable:
        n, length, d = tokens.shape
        q = self._split_heads(matmul(tokens, self.query_weight))
        k = self._split_heads(matmul(tokens, self.key_weight))
        v = self._split_heads(matmul(tokens, self.value_weight))
        scores = scale(
            matmul(q, transpose(k, (0, 1, 3, 2))),
            1.0 / np.sqrt(self.head_channels))
        probs = softmax(scores, axis=-1)
        self.attn_probs = probs.data
        mixed = transpose(matmul(probs, v), (0, 2, 1, 3))
        mixed = matmul(reshape(mixed, (n, length, d)), self.out_weight)
        x = add(tokens, mixed)
        hidden = relu(add(matmul(x, self.ffn_weight1), self.ffn_bias1))
        return add(x, add(matmul(hidden, self.ffn_weight2), self.ffn_bias2))


@MODELS.register_module()
class AttentionReadout(BaseComponent):
    """Pool a hop sequence with softmax scores against a learned query."""

    def __init__(self, embed_channels: int) -> None:
        super().__init__()
        self.embed_channels = embed_channels
        self.weights: Optional[np.ndarray] = None
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        self.query = self.parameter(
            glorot_uniform(rng, self.embed_channels, 1))

    def forward(self, tokens: Variable) -> Variable:
        n, length, d = tokens.shape
        scores = reshape(matmul(tokens, self.query), (n, length))
        weights = softmax(scores, axis=1)
        self.weights = weights.data
        return reduce_sum(
            mul(reshape(weights, (n, length, 1)), tokens), axis=1)
