# Copyright (c) The UniGAP Authors. All rights reserved.
from abc import ABCMeta, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from unigap.diffcore import (CsrMatrix, Variable, add, dropout, elu, matmul,
                             prelu, relu)
from unigap.utils.exceptions import ShapeError
from ..base import BaseComponent, glorot_uniform

ACTIVATIONS = ('relu', 'elu', 'prelu', 'identity')


class BaseGNN(BaseComponent, metaclass=ABCMeta):
    """Message-passing classifier with constant hidden width.

    ``num_layers`` graph layers map the input to width ``hidden_channels``;
    a separate linear head maps the last hidden state to class logits, so
    every hidden state returned by :meth:`forward` has the same width.

    Args:
        in_channels (int): Input feature width.
        hidden_channels (int): Width ``d`` of every hidden layer.
        num_classes (int): Number of output classes.
        num_layers (int): Number of graph layers ``L``. Defaults to 2.
        activation (str): One of ``relu``, ``elu``, ``prelu`` or
            ``identity``. Defaults to ``relu``.
        dropout (float): Dropout rate applied to the input of every layer
            and of the head. Defaults to 0.5.
        bias (bool): Whether layers carry a bias. Defaults to True.
    """

    def __init__(self,
                 in_channels: int,
                 hidden_channels: int,
                 num_classes: int,
                 num_layers: int = 2,
                 activation: str = 'relu',
                 dropout: float = 0.5,
                 bias: bool = True) -> None:
        super().__init__()
        assert num_layers >= 1, 'num_layers must be at least 1'
        if activation not in ACTIVATIONS:
            raise ValueError(f'unknown activation {activation!r}, expected '
                             f'one of {ACTIVATIONS}')
        if not 0.0 <= dropout < 1.0:
            raise ValueError(f'dropout must be in [0, 1), got {dropout}')
        self.in_channels = in_channels
        self.hidden_channels = hidden_channels
        self.num_classes = num_classes
        self.num_layers = num_layers
        self.activation = activation
        self.dropout = dropout
        self.bias = bias
        self.init_weights(np.random.default_rng(0))

    @abstractmethod
    def layer_input_width(self, layer: int) -> int:
        """Rows of the weight matrix of graph layer ``layer``."""

    @abstractmethod
    def prepare_adjacency(self, adjacency: CsrMatrix) -> CsrMatrix:
        """Turn a binary (possibly directed) adjacency into the operator
        consumed by :meth:`propagate`."""

    @abstractmethod
    def propagate(self, operator: CsrMatrix, h: Variable,
                  layer: int) -> Variable:
        """Aggregate and transform ``h`` for graph layer ``layer``."""

    def init_weights(self, rng: np.random.Generator) -> None:
        """Glorot-uniform weights, zero biases, prelu slopes at 0.25."""
        d = self.hidden_channels
        for layer in range(self.num_layers):
            fan_in = self.layer_input_width(layer)
            setattr(self, f'weight{layer}',
                    self.parameter(glorot_uniform(rng, fan_in, d)))
            if self.bias:
                setattr(self, f'bias{layer}', self.parameter(np.zeros(d)))
            if self.activation == 'prelu':
                setattr(self, f'slope{layer}',
                        self.parameter(np.full(1, 0.25)))
        self.head_weight = self.parameter(
            glorot_uniform(rng, d, self.num_classes))
        if self.bias:
            self.head_bias = self.parameter(np.zeros(self.num_classes))

    def _activate(self, h: Variable, layer: int) -> Variable:
        if self.activation == 'relu':
            return relu(h)
        if self.activation == 'elu':
            return elu(h)
        if self.activation == 'prelu':
            return prelu(h, getattr(self, f'slope{layer}'))
        return h

    def _maybe_bias(self, h: Variable, layer: int) -> Variable:
        if self.bias:
            return add(h, getattr(self, f'bias{layer}'))
        return h

    def forward(self,
                operator: CsrMatrix,
                features: Variable,
                training: bool = False,
                rng: Optional[np.random.Generator] = None
                ) -> Tuple[Variable, List[Variable]]:
        """Run all layers on a prepared operator.

        Returns:
            tuple: ``(logits, hidden_states)`` where ``hidden_states`` holds
            the post-activation output of each of the ``L`` graph layers.
        """
        if features.shape[1] != self.in_channels:
            raise ShapeError(f'{type(self).__name__}.forward',
                             features.shape, (None, self.in_channels))
        if operator.shape[0] != features.shape[0]:
            raise ShapeError(f'{type(self).__name__}.forward',
                             operator.shape, features.shape)
        h = features
        hidden_states = []
        for layer in range(self.num_layers):
            h = dropout(h, self.dropout, rng=rng, training=training)
            h = self._activate(
                self._maybe_bias(self.propagate(operator, h, layer), layer),
                layer)
            hidden_states.append(h)
        out = dropout(h, self.dropout, rng=rng, training=training)
        logits = matmul(out, self.head_weight)
        if self.bias:
            logits = add(logits, self.head_bias)
        return logits, hidden_states

    def __call__(self, adjacency: CsrMatrix, features: Variable, **kwargs):
        """Prepare ``adjacency`` and run :meth:`forward`."""
        return self.forward(
            self.prepare_adjacency(adjacency), features, **kwargs)
