# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Optional

import numpy as np

from unigap.datasets import (GraphBundle, normalize_adjacency,
                             normalized_laplacian)
from unigap.diffcore import l2_normalize_rows
from .trajectory import Trajectory

OPERATORS = ('adjacency', 'laplacian')


def precompute_zero(g: GraphBundle,
                    num_layers: int,
                    width: int,
                    norm_period: Optional[int] = 2) -> Trajectory:
    """All-zero trajectory; the upsampler is bypassed while it is in use."""
    return Trajectory(
        np.zeros((num_layers, g.n_nodes, width)), norm_period)


def precompute_mp(g: GraphBundle,
                  num_layers: int,
                  operator: str = 'adjacency',
                  norm_period: Optional[int] = 2) -> Trajectory:
    """Parameter-free propagation ``T(l) = P T(l-1)`` with ``T(0) = X``.

    ``P`` is the normalized adjacency or the normalized Laplacian. Each
    normalized slice feeds the next step.
    """
    if operator == 'adjacency':
        prop = normalize_adjacency(g)
    elif operator == 'laplacian':
        prop = normalized_laplacian(g)
    else:
        raise ValueError(f'operator must be one of {OPERATORS}, '
                         f'got {operator!r}')
    h = g.features
    slices = []
    for layer in range(num_layers):
        h = np.asarray(prop @ h)
        if norm_period is not None and (layer + 1) % norm_period == 0:
            h = l2_normalize_rows(h)
        slices.append(h)
    return Trajectory(np.stack(slices), norm_period)
