# Copyright (c) The UniGAP Authors. All rights reserved.
import numpy as np

from unigap.datasets import AugmentedGraph, GraphBundle
from unigap.diffcore import (Variable, add, as_variable, concat_axis0,
                             csr_from_edges, mul, scale, take)
from .decision import INSERT, KEEP, InsertionDecision

INIT_MODES = ('zero', 'mean', 'adaptive')


def _inserted_features(features: Variable, decision: InsertionDecision,
                       chosen: np.ndarray, init_mode: str,
                       alpha: float) -> Variable:
    src = decision.src[chosen]
    dst = decision.dst[chosen]
    if init_mode == 'zero':
        return Variable(np.zeros((chosen.size, features.shape[1])))
    x_src = take(features, src)
    x_dst = take(features, dst)
    if init_mode == 'mean':
        return add(scale(x_src, alpha), scale(x_dst, 1.0 - alpha))
    soft = take(as_variable(decision.soft), chosen)
    return add(
        mul(take(soft, [KEEP], axis=1), x_src),
        mul(take(soft, [INSERT], axis=1), x_dst))


def build_augmented(g: GraphBundle,
                    features: Variable,
                    decision: InsertionDecision,
                    init_mode: str = 'adaptive',
                    alpha: float = 0.5,
                    gate: bool = True,
                    adjacency=None) -> AugmentedGraph:
    """Insert a node on every directed edge selected by ``decision``.

    Edge ``i -> j`` with ``mask = 1`` becomes ``i -> k -> j`` for a new
    node ``k = N + position``. Rows ``0..N-1`` of ``features`` are kept
    as they are; new rows follow ``init_mode``:

    - ``zero``: zeros.
    - ``mean``: ``alpha * x_i + (1 - alpha) * x_j``.
    - ``adaptive``: ``p_keep * x_i + p_insert * x_j`` from the soft
      decision, on the tape.

    With ``gate=True`` and a straight-through decision, new rows are
    scaled by the hard insert indicator (value 1) so the downstream loss
    also reaches the sampler through the mask.

    Args:
        adjacency: Binary adjacency the decision was made on. Defaults to
            ``g.adjacency``.
    """
    if init_mode not in INIT_MODES:
        raise ValueError(f'init_mode must be one of {INIT_MODES}, '
                         f'got {init_mode!r}')
    adjacency = g.adjacency if adjacency is None else adjacency
    n = g.n_nodes
    features = as_variable(features)
    if features.shape[0] != n:
        raise ValueError(f'features have {features.shape[0]} rows, '
                         f'graph has {n} nodes')
    if decision.num_edges != adjacency.nnz:
        raise ValueError(f'decision covers {decision.num_edges} edges, '
                         f'graph has {adjacency.nnz}')

    chosen = np.flatnonzero(decision.mask)
    if chosen.size == 0:
        return AugmentedGraph(g, adjacency, features)

    new_ids = n + np.arange(chosen.size)
    src_sel = decision.src[chosen]
    dst_sel = decision.dst[chosen]
    keep = np.ones(decision.num_edges, dtype=bool)
    keep[chosen] = False
    src = np.concatenate([decision.src[keep], src_sel, new_ids])
    dst = np.concatenate([decision.dst[keep], new_ids, dst_sel])
    aug_adj = csr_from_edges(src, dst, n + chosen.size)

    inserted = _inserted_features(features, decision, chosen, init_mode,
                                  alpha)
    if gate and decision.hard is not None:
        inserted = mul(inserted, take(take(decision.hard, chosen), [INSERT],
                                      axis=1))
    insertions = np.stack([new_ids, src_sel, dst_sel], axis=1)
    return AugmentedGraph(g, aug_adj, concat_axis0(features, inserted),
                          insertions)
