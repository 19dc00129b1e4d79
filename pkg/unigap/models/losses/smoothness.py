# Copyright (c) The UniGAP Authors. All rights reserved.
"""Over-smoothing measures and the anti-smoothing training objective."""
from typing import Union

import numpy as np

from unigap.diffcore import (CsrMatrix, Variable, as_variable,
                             masked_softmax_cross_entropy, mul, reduce_sum,
                             row_l2_normalize, scale, spmm, sub, take)

MAD_MODES = ('literal', 'per_edge')


def mad(features: Union[Variable, np.ndarray],
        src,
        dst,
        mode: str = 'literal') -> Variable:
    """Mean average cosine distance over directed edges.

    ``literal`` divides the summed distances by the number of nodes,
    ``per_edge`` by the number of edges. A zero row has distance 1 to
    everything.
    """
    if mode not in MAD_MODES:
        raise ValueError(f'mode must be one of {MAD_MODES}, got {mode!r}')
    features = as_variable(features)
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    num_edges = src.size
    if num_edges == 0:
        return Variable(np.zeros(()))
    normed = row_l2_normalize(features)
    cosine = reduce_sum(mul(take(normed, src), take(normed, dst)), axis=1)
    total = sub(float(num_edges), reduce_sum(cosine))
    denom = features.shape[0] if mode == 'literal' else num_edges
    return scale(total, 1.0 / denom)


def dirichlet_energy(features: Union[Variable, np.ndarray],
                     laplacian: CsrMatrix) -> Variable:
    """``trace(X^T L X) / N``."""
    features = as_variable(features)
    return scale(
        reduce_sum(mul(features, spmm(laplacian, features))),
        1.0 / features.shape[0])


def total_loss(logits: Variable,
               labels,
               mask,
               aug_features: Variable,
               src,
               dst,
               beta: float = 1.0) -> Variable:
    """Masked cross-entropy minus ``beta`` times per-edge MAD of the
    augmented graph's representations."""
    if beta < 0:
        raise ValueError(f'beta must be nonnegative, got {beta}')
    ce = masked_softmax_cross_entropy(logits, labels, mask)
    if beta == 0:
        return ce
    return sub(ce, scale(mad(aug_features, src, dst, 'per_edge'), beta))
