# Copyright (c) The UniGAP Authors. All rights reserved.
"""Canonical CSR storage.

``CsrMatrix`` is :class:`scipy.sparse.csr_matrix` kept in canonical form
(sorted column indices, no duplicates, no explicit zeros).
"""
import numpy as np
import scipy.sparse as sp

from unigap.utils.exceptions import ShapeError

CsrMatrix = sp.csr_matrix


def canonical(mat) -> CsrMatrix:
    """Return a canonical float64 copy of ``mat``."""
    out = sp.csr_matrix(mat, dtype=np.float64, copy=True)
    out.sum_duplicates()
    out.eliminate_zeros()
    out.sort_indices()
    return out


def csr_from_edges(src, dst, n_nodes: int, values=None) -> CsrMatrix:
    """Build an ``n_nodes x n_nodes`` matrix from directed edge arrays.

    Duplicate pairs are merged; with ``values=None`` the result is binary.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.shape != dst.shape:
        raise ShapeError('csr_from_edges', src.shape, dst.shape)
    binary = values is None
    if binary:
        values = np.ones(src.shape[0], dtype=np.float64)
    mat = sp.coo_matrix((values, (src, dst)), shape=(n_nodes, n_nodes))
    mat = canonical(mat)
    if binary:
        mat.data[:] = 1.0
    return mat


def identity(n: int) -> CsrMatrix:
    return sp.identity(n, dtype=np.float64, format='csr')


def densify(mat) -> np.ndarray:
    return np.asarray(mat.toarray(), dtype=np.float64)


def check_csr(mat: CsrMatrix) -> None:
    """Assert the canonical-form invariants of ``mat``."""
    rows, cols = mat.shape
    ptr, idx = mat.indptr, mat.indices
    assert ptr.shape[0] == rows + 1, 'row_ptr must have rows + 1 entries'
    assert ptr[-1] == mat.nnz, 'last row_ptr entry must equal nnz'
    assert np.all(np.diff(ptr) >= 0), 'row_ptr must be nondecreasing'
    assert idx.size == 0 or (idx.min() >= 0 and idx.max() < cols), \
        'col_idx out of range'
    for r in range(rows):
        row = idx[ptr[r]:ptr[r + 1]]
        assert np.all(np.diff(row) > 0), \
            f'row {r} column indices are not strictly increasing'
