# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from unigap.diffcore.sparse import CsrMatrix, canonical, csr_from_edges

SPLIT_NAMES = ('train', 'val', 'test')


@dataclass(frozen=True)
class SplitMasks:
    """Disjoint train/val/test node masks."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def __post_init__(self) -> None:
        for name in SPLIT_NAMES:
            object.__setattr__(self, name,
                               np.asarray(getattr(self, name), dtype=bool))
        n = self.train.shape[0]
        assert self.val.shape == (n, ) and self.test.shape == (n, ), \
            'split masks must have one entry per node'
        overlap = (self.train.astype(int) + self.val + self.test) > 1
        if overlap.any():
            raise ValueError(
                f'split masks overlap at nodes {np.flatnonzero(overlap)[:5]}')

    def as_dict(self):
        return {name: getattr(self, name) for name in SPLIT_NAMES}

    def padded(self, n_total: int) -> 'SplitMasks':
        """Masks extended with False for appended (inserted) nodes."""
        pad = n_total - self.train.shape[0]
        return SplitMasks(*(np.concatenate([m, np.zeros(pad, dtype=bool)])
                            for m in (self.train, self.val, self.test)))


@dataclass(frozen=True)
class GraphBundle:
    """An immutable attributed graph with node labels and splits.

    ``adjacency`` is binary, symmetric and free of self-loops; undirected
    edges are stored as both directed pairs. ``labels`` uses ``-1`` for
    unlabeled nodes. ``latent`` and ``targets`` are only present on graphs
    drawn from the latent-space generator.
    """

    adjacency: CsrMatrix
    features: np.ndarray
    labels: np.ndarray
    masks: SplitMasks
    name: str = 'graph'
    latent: Optional[np.ndarray] = field(default=None, repr=False)
    targets: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        adj = canonical(self.adjacency)
        adj.data[:] = 1.0
        object.__setattr__(self, 'adjacency', adj)
        object.__setattr__(self, 'features',
                           np.asarray(self.features, dtype=np.float64))
        object.__setattr__(self, 'labels',
                           np.asarray(self.labels, dtype=np.int64))
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError(f'adjacency must be square, got {adj.shape}')
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ValueError(f'features shape {self.features.shape} does '
                             f'not match {n} nodes')
        if self.labels.shape != (n, ):
            raise ValueError(f'labels shape {self.labels.shape} does not '
                             f'match {n} nodes')
        if adj.diagonal().any():
            raise ValueError('stored adjacency must not contain self-loops')
        if (adj != adj.T).nnz:
            raise ValueError('adjacency must be symmetric')

    @classmethod
    def from_edges(cls, src, dst, n_nodes: int, features, labels,
                   masks: SplitMasks, **kwargs) -> 'GraphBundle':
        """Symmetrize and deduplicate a directed edge list, dropping
        self-loops."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        keep = src != dst
        src, dst = src[keep], dst[keep]
        adj = csr_from_edges(
            np.concatenate([src, dst]), np.concatenate([dst, src]), n_nodes)
        return cls(adj, features, labels, masks, **kwargs)

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_directed_edges(self) -> int:
        return self.adjacency.nnz

    @property
    def n_undirected_edges(self) -> int:
        return self.adjacency.nnz // 2

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_classes(self) -> int:
        labeled = self.labels[self.labels >= 0]
        return int(labeled.max()) + 1 if labeled.size else 0

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """Directed edges ``(src, dst)`` in CSR (row-major) order."""
        adj = self.adjacency
        src = np.repeat(np.arange(adj.shape[0]), np.diff(adj.indptr))
        return src, adj.indices.astype(np.int64)

    def edge_array(self) -> np.ndarray:
        src, dst = self.edges()
        return np.stack([src, dst], axis=1)

    def with_adjacency(self, adjacency: CsrMatrix) -> 'GraphBundle':
        return replace(self, adjacency=adjacency)
