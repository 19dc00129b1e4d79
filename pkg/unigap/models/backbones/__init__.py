# Copyright (c) The UniGAP Authors. All rights reserved.
from .base_gnn import ACTIVATIONS, BaseGNN
from .gcn import GCN
from .linear import aggregation_operator, linear_gnn
from .sage import GraphSAGE

__all__ = [
    'BaseGNN', 'GCN', 'GraphSAGE', 'ACTIVATIONS', 'linear_gnn',
    'aggregation_operator'
]
