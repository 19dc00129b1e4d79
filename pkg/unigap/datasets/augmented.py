# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from unigap.diffcore import CsrMatrix, Variable, csr_from_edges
from .bundle import GraphBundle


@dataclass
class AugmentedGraph:
    """A graph after node insertion.

    Rows ``0..n_original-1`` are the original nodes. ``insertions`` is a
    ``K x 3`` integer array of ``(new_node_id, src, dst)`` records: the
    directed edge ``src -> dst`` was replaced by ``src -> k -> dst``.
    ``adjacency`` is the binary directed adjacency over ``N + K`` nodes.
    """

    base: GraphBundle
    adjacency: CsrMatrix
    features: Variable
    insertions: np.ndarray = field(
        default_factory=lambda: np.zeros((0, 3), dtype=np.int64))
    normalized: Optional[CsrMatrix] = field(default=None, repr=False)

    @classmethod
    def identity(cls, g: GraphBundle,
                 features: Optional[Variable] = None) -> 'AugmentedGraph':
        """The original graph viewed as an augmentation with no
        insertions."""
        if features is None:
            features = Variable(g.features)
        return cls(g, g.adjacency, features)

    @property
    def n_original(self) -> int:
        return self.base.n_nodes

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_inserted(self) -> int:
        return int(self.insertions.shape[0])

    @property
    def n_directed_edges(self) -> int:
        return self.adjacency.nnz

    @property
    def original_ids(self) -> np.ndarray:
        return np.arange(self.n_original)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        adj = self.adjacency
        src = np.repeat(np.arange(adj.shape[0]), np.diff(adj.indptr))
        return src, adj.indices.astype(np.int64)

    def padded_labels(self) -> np.ndarray:
        """Labels over all nodes; inserted nodes are unlabeled (-1)."""
        return np.concatenate([
            self.base.labels,
            np.full(self.n_inserted, -1, dtype=np.int64)
        ])

    def contract(self) -> CsrMatrix:
        """Merge every inserted node back into the edge it split."""
        src, dst = self.edges()
        keep = (src < self.n_original) & (dst < self.n_original)
        src = np.concatenate([src[keep], self.insertions[:, 1]])
        dst = np.concatenate([dst[keep], self.insertions[:, 2]])
        return csr_from_edges(src, dst, self.n_original)

    def degrees(self) -> Tuple[np.ndarray, np.ndarray]:
        """``(in_degree, out_degree)`` of the directed view."""
        adj = sp.csr_matrix(self.adjacency)
        return (np.asarray(adj.sum(axis=0)).ravel().astype(np.int64),
                np.asarray(adj.sum(axis=1)).ravel().astype(np.int64))
