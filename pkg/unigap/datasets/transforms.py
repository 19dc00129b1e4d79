# Copyright (c) The UniGAP Authors. All rights reserved.
"""Adjacency normalizations used by message passing and the metrics."""
from typing import Union

import numpy as np
import scipy.sparse as sp

from unigap.diffcore.sparse import CsrMatrix, canonical
from .bundle import GraphBundle

GraphLike = Union[GraphBundle, CsrMatrix]


def _adjacency(g: GraphLike) -> CsrMatrix:
    adj = g.adjacency if isinstance(g, GraphBundle) else g
    return sp.csr_matrix(adj, dtype=np.float64)


def _inv_sqrt(degree: np.ndarray) -> np.ndarray:
    out = np.zeros_like(degree, dtype=np.float64)
    np.divide(1.0, np.sqrt(degree), out=out, where=degree > 0)
    return out


def normalize_adjacency(g: GraphLike, self_loops: bool = True) -> CsrMatrix:
    """``D_row^-1/2 (A + I) D_col^-1/2``.

    For a symmetric adjacency this is the usual symmetric normalization.
    Augmented graphs are directed; their out-degree scales rows and their
    in-degree scales columns, which keeps the spectral radius at most 1.
    """
    adj = _adjacency(g)
    if self_loops:
        adj = adj + sp.identity(adj.shape[0], dtype=np.float64, format='csr')
    row_deg = np.asarray(adj.sum(axis=1)).ravel()
    col_deg = np.asarray(adj.sum(axis=0)).ravel()
    out = sp.diags(_inv_sqrt(row_deg)) @ adj @ sp.diags(_inv_sqrt(col_deg))
    return canonical(out)


def normalized_laplacian(g: GraphLike) -> CsrMatrix:
    """``I - normalize_adjacency(g)``."""
    n = _adjacency(g).shape[0]
    return canonical(
        sp.identity(n, dtype=np.float64, format='csr') -
        normalize_adjacency(g))


def laplacian(g: GraphLike, normalized: bool = True) -> CsrMatrix:
    if normalized:
        return normalized_laplacian(g)
    adj = _adjacency(g)
    degree = np.asarray(adj.sum(axis=1)).ravel()
    return canonical(sp.diags(degree) - adj)


def row_normalize_adjacency(g: GraphLike,
                            self_loops: bool = False) -> CsrMatrix:
    """``D^-1 A`` (mean over neighbors); isolated rows stay zero."""
    adj = _adjacency(g)
    if self_loops:
        adj = adj + sp.identity(adj.shape[0], dtype=np.float64, format='csr')
    degree = np.asarray(adj.sum(axis=1)).ravel()
    inv = np.zeros_like(degree)
    np.divide(1.0, degree, out=inv, where=degree > 0)
    return canonical(sp.diags(inv) @ adj)
