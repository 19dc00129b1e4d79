# Copyright (c) The UniGAP Authors. All rights reserved.
import numpy as np

from unigap.datasets.transforms import (normalize_adjacency,
                                        row_normalize_adjacency)


def aggregation_operator(adjacency, mode: str = 'mean'):
    """``D~^-1 A~`` for ``mean``, ``D~^-1/2 A~ D~^-1/2`` for ``sym``."""
    if mode == 'mean':
        return row_normalize_adjacency(adjacency, self_loops=True)
    if mode == 'sym':
        return normalize_adjacency(adjacency)
    raise ValueError(f"mode must be 'mean' or 'sym', got {mode!r}")


def linear_gnn(adjacency, features: np.ndarray, k: int,
               mode: str = 'mean') -> np.ndarray:
    """``k`` rounds of parameter-free linear message passing."""
    if k < 0:
        raise ValueError(f'k must be nonnegative, got {k}')
    op = aggregation_operator(adjacency, mode)
    h = np.asarray(features, dtype=np.float64)
    for _ in range(k):
        h = np.asarray(op @ h)
    return h
