# Copyright (c) The UniGAP Authors. All rights reserved.
from unigap.datasets.transforms import row_normalize_adjacency
from unigap.diffcore import CsrMatrix, Variable, concat_cols, matmul, spmm
from unigap.registry import MODELS
from .base_gnn import BaseGNN


@MODELS.register_module()
class GraphSAGE(BaseGNN):
    """Mean-aggregation SAGE: ``H' = act([H || mean_N(H)] W + b)``.

    Nodes without neighbors aggregate a zero vector, so on an edgeless
    graph the model is an MLP on the features.
    """

    def layer_input_width(self, layer: int) -> int:
        width = self.in_channels if layer == 0 else self.hidden_channels
        return 2 * width

    def prepare_adjacency(self, adjacency: CsrMatrix) -> CsrMatrix:
        return row_normalize_adjacency(adjacency, self_loops=False)

    def propagate(self, operator: CsrMatrix, h: Variable,
                  layer: int) -> Variable:
        neighbors = spmm(operator, h)
        return matmul(
            concat_cols(h, neighbors), getattr(self, f'weight{layer}'))
