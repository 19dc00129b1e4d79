# Copyright (c) The UniGAP Authors. All rights reserved.
import logging
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from mmengine.logging import print_log

from unigap.datasets import GraphBundle
from unigap.diffcore import (CsrMatrix, Variable, csr_from_edges,
                             masked_softmax_cross_entropy)
from unigap.registry import MODELS
from ..base import BaseComponent, glorot_uniform
from .decision import edge_logits

INTRA, INTER = 0, 1


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


@MODELS.register_module()
class AdaEdgeEditor(BaseComponent):
    """Prediction-driven edge editing with a learned edge head.

    The head classifies an edge as intra- (column 0) or inter-class
    (column 1) from the last-layer representations of its endpoints and is
    fit to pseudo labels from the current node predictions. After each
    epoch, edges whose endpoints are predicted in different classes are
    removed and non-adjacent pairs predicted in the same class are added,
    each ranked by the head and capped at ``budget_ratio`` of the
    undirected edges (at least one). Edits accumulate across epochs and
    keep the graph symmetric.
    """

    def __init__(self, in_channels: int, budget_ratio: float = 0.01) -> None:
        super().__init__()
        self.in_channels = in_channels
        self.budget_ratio = budget_ratio
        self.adjacency: Optional[CsrMatrix] = None
        self.init_weights(np.random.default_rng(0))

    def init_weights(self, rng: np.random.Generator) -> None:
        self.weight = self.parameter(
            glorot_uniform(rng, 2, 2 * self.in_channels))

    def reset(self, g: GraphBundle) -> None:
        self.adjacency = g.adjacency.copy()

    def current_edges(self) -> Tuple[np.ndarray, np.ndarray]:
        adj = self.adjacency
        src = np.repeat(np.arange(adj.shape[0]), np.diff(adj.indptr))
        return src, adj.indices.astype(np.int64)

    def budget(self) -> int:
        return max(1, int(self.budget_ratio * self.adjacency.nnz // 2))

    def auxiliary_loss(self, condensed: Variable,
                       predictions: np.ndarray) -> Optional[Variable]:
        """Cross-entropy of the edge head against predicted-class
        agreement."""
        src, dst = self.current_edges()
        if src.size == 0:
            return None
        logits = edge_logits(condensed, src, dst, self.weight)
        pseudo = (predictions[src] != predictions[dst]).astype(np.int64)
        return masked_softmax_cross_entropy(
            logits, pseudo, np.ones(src.size, dtype=bool))

    def edit(self, condensed: np.ndarray, probs: np.ndarray) -> Tuple[int,
                                                                      int]:
        """Apply one round of removals and additions.

        Args:
            condensed (np.ndarray): ``N x d`` last-layer representations.
            probs (np.ndarray): ``N x C`` predicted class probabilities.

        Returns:
            tuple[int, int]: Undirected edges removed and added.
        """
        pred = probs.argmax(axis=1)
        conf = probs.max(axis=1)
        budget = self.budget()
        h = Variable(condensed)
        n = self.adjacency.shape[0]

        src, dst = self.current_edges()
        upper = src < dst
        src, dst = src[upper], dst[upper]
        removable = np.flatnonzero(pred[src] != pred[dst])
        removed = np.zeros((0, 2), dtype=np.int64)
        if removable.size:
            p_inter = _softmax_rows(
                edge_logits(h, src[removable], dst[removable],
                            self.weight).data)[:, INTER]
            order = np.argsort(-p_inter, kind='stable')[:budget]
            removed = np.stack(
                [src[removable[order]], dst[removable[order]]], axis=1)

        pool = max(2, int(np.ceil(np.sqrt(2 * budget))) + 1)
        cand_src, cand_dst = [], []
        for c in np.unique(pred):
            members = np.flatnonzero(pred == c)
            members = members[np.argsort(-conf[members],
                                         kind='stable')][:pool]
            iu, ju = np.triu_indices(members.size, k=1)
            a = np.minimum(members[iu], members[ju])
            b = np.maximum(members[iu], members[ju])
            cand_src.append(a)
            cand_dst.append(b)
        added = np.zeros((0, 2), dtype=np.int64)
        if cand_src:
            a = np.concatenate(cand_src)
            b = np.concatenate(cand_dst)
            absent = np.asarray(self.adjacency[a, b]).ravel() == 0
            a, b = a[absent], b[absent]
            if a.size:
                p_intra = _softmax_rows(
                    edge_logits(h, a, b, self.weight).data)[:, INTRA]
                score = p_intra * conf[a] * conf[b]
                order = np.argsort(-score, kind='stable')[:budget]
                added = np.stack([a[order], b[order]], axis=1)

        adj = sp.lil_matrix(self.adjacency)
        for i, j in removed:
            adj[i, j] = 0
            adj[j, i] = 0
        for i, j in added:
            adj[i, j] = 1
            adj[j, i] = 1
        coo = sp.coo_matrix(adj)
        self.adjacency = csr_from_edges(coo.row, coo.col, n)
        if removed.shape[0] == 0 and added.shape[0] == 0:
            print_log(
                'adaedge: no candidate edits this epoch',
                logger='current',
                level=logging.DEBUG)
        return int(removed.shape[0]), int(added.shape[0])
