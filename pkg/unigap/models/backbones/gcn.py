# Copyright (c) The UniGAP Authors. All rights reserved.
from unigap.datasets.transforms import normalize_adjacency
from unigap.diffcore import CsrMatrix, Variable, matmul, spmm
from unigap.registry import MODELS
from .base_gnn import BaseGNN


@MODELS.register_module()
class GCN(BaseGNN):
    """Graph convolution: ``H' = act(A_hat H W + b)`` with the
    self-looped, degree-normalized adjacency ``A_hat``."""

    def layer_input_width(self, layer: int) -> int:
        return self.in_channels if layer == 0 else self.hidden_channels

    def prepare_adjacency(self, adjacency: CsrMatrix) -> CsrMatrix:
        return normalize_adjacency(adjacency)

    def propagate(self, operator: CsrMatrix, h: Variable,
                  layer: int) -> Variable:
        return spmm(operator, matmul(h, getattr(self, f'weight{layer}')))

    def graph_layer_names(self):
        """Parameters shared with the pretext encoder."""
        names = []
        for layer in range(self.num_layers):
            names.append(f'weight{layer}')
            if self.bias:
                names.append(f'bias{layer}')
        return names
