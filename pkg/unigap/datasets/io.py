# Copyright (c) The UniGAP Authors. All rights reserved.
"""Bundle directories and raw graph sources.

A bundle directory holds ``edges.csv`` (``src,dst``), ``features.csv``
(headerless, one row per node) or ``features.bin``, ``labels.csv``
(``node,label``) and ``splits.csv`` (``node,split``).
"""
import logging
import os
import os.path as osp
import struct
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from mmengine.logging import print_log
from mmengine.utils import mkdir_or_exist

from unigap.utils.exceptions import BundleFormatError
from unigap.utils.fileio import atomic_path, write_csv
from .bundle import SPLIT_NAMES, GraphBundle, SplitMasks

MATRIX_MAGIC = b'UGAPMAT1'
_HEADER = struct.Struct('<8sII')
BINARY_FEATURE_THRESHOLD = 10_000


def write_matrix_bin(array: np.ndarray, path: str) -> None:
    """Write a 2-D float64 matrix with a 16-byte (magic, rows, cols)
    header followed by little-endian row-major values."""
    array = np.asarray(array, dtype='<f8')
    if array.ndim == 1:
        array = array[None, :]
    if array.ndim != 2:
        raise ValueError(f'expected a matrix, got shape {array.shape}')
    with atomic_path(path) as tmp:
        with open(tmp, 'wb') as f:
            f.write(_HEADER.pack(MATRIX_MAGIC, *array.shape))
            f.write(np.ascontiguousarray(array).tobytes())


def read_matrix_bin(path: str) -> np.ndarray:
    with open(path, 'rb') as f:
        head = f.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise BundleFormatError('truncated header', path)
        magic, rows, cols = _HEADER.unpack(head)
        if magic != MATRIX_MAGIC:
            raise BundleFormatError(f'bad magic {magic!r}', path)
        values = np.frombuffer(f.read(), dtype='<f8')
    if values.size != rows * cols:
        raise BundleFormatError(
            f'expected {rows}x{cols} values, found {values.size}', path)
    return values.reshape(rows, cols).astype(np.float64)


def _first_bad_row(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0])


def _read_indexed(path: str, columns: List[str],
                  int_columns: List[str]) -> pd.DataFrame:
    """Read a headed CSV, reporting the first malformed row by line."""
    if not osp.exists(path):
        raise BundleFormatError('missing file', path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise BundleFormatError(f'malformed CSV ({e})', path) from None
    except pd.errors.EmptyDataError:
        raise BundleFormatError('empty file', path) from None
    if list(frame.columns) != columns:
        raise BundleFormatError(
            f'expected header {",".join(columns)}, '
            f'got {",".join(frame.columns)}', path, 1)
    for col in int_columns:
        parsed = pd.to_numeric(frame[col].str.strip(), errors='coerce')
        bad = parsed.isna().to_numpy() | (parsed % 1 != 0).to_numpy()
        if bad.any():
            row = _first_bad_row(bad)
            raise BundleFormatError(
                f'{col} is not an integer: {frame[col].iloc[row]!r}', path,
                row + 2)
        frame[col] = parsed.astype(np.int64)
    return frame


def _check_range(frame: pd.DataFrame, col: str, n: int, path: str) -> None:
    values = frame[col].to_numpy()
    bad = (values < 0) | (values >= n)
    if bad.any():
        row = _first_bad_row(bad)
        raise BundleFormatError(
            f'node index {values[row]} out of range [0, {n})', path, row + 2)


def read_feature_csv(path: str) -> np.ndarray:
    if not osp.exists(path):
        raise BundleFormatError('missing file', path)
    widths = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            widths.append(line.count(',') + 1)
            if widths[-1] != widths[0]:
                raise BundleFormatError(
                    f'row has {widths[-1]} columns, expected {widths[0]}',
                    path, lineno)
    if not widths:
        raise BundleFormatError('empty file', path)
    frame = pd.read_csv(
        path, header=None, float_precision='round_trip', dtype=np.float64)
    return frame.to_numpy(dtype=np.float64)


def load_bundle(path: str, name: Optional[str] = None) -> GraphBundle:
    """Load and validate a bundle directory.

    Duplicate edges are merged and reverse edges added, so the returned
    adjacency is symmetric. Self-loops are dropped.
    """
    if not osp.isdir(path):
        raise BundleFormatError('bundle directory not found', path)
    bin_path = osp.join(path, 'features.bin')
    if osp.exists(bin_path):
        features = read_matrix_bin(bin_path)
    else:
        features = read_feature_csv(osp.join(path, 'features.csv'))
    n = features.shape[0]

    edges_path = osp.join(path, 'edges.csv')
    edges = _read_indexed(edges_path, ['src', 'dst'], ['src', 'dst'])
    _check_range(edges, 'src', n, edges_path)
    _check_range(edges, 'dst', n, edges_path)

    labels_path = osp.join(path, 'labels.csv')
    label_rows = _read_indexed(labels_path, ['node', 'label'],
                               ['node', 'label'])
    _check_range(label_rows, 'node', n, labels_path)
    labels = np.full(n, -1, dtype=np.int64)
    labels[label_rows['node'].to_numpy()] = label_rows['label'].to_numpy()

    split_masks = _read_splits(osp.join(path, 'splits.csv'), n)

    return GraphBundle.from_edges(
        edges['src'].to_numpy(),
        edges['dst'].to_numpy(),
        n,
        features,
        labels,
        split_masks,
        name=name or osp.basename(osp.normpath(path)))


def _read_splits(splits_path: str, n: int) -> SplitMasks:
    split_rows = _read_indexed(splits_path, ['node', 'split'], ['node'])
    _check_range(split_rows, 'node', n, splits_path)
    split_names = split_rows['split'].str.strip().to_numpy()
    unknown = ~np.isin(split_names, SPLIT_NAMES)
    if unknown.any():
        row = _first_bad_row(unknown)
        raise BundleFormatError(
            f'unknown split {split_names[row]!r}, expected one of '
            f'{list(SPLIT_NAMES)}', splits_path, row + 2)
    masks = {}
    for split in SPLIT_NAMES:
        mask = np.zeros(n, dtype=bool)
        mask[split_rows['node'].to_numpy()[split_names == split]] = True
        if not mask.any():
            raise BundleFormatError(f'split {split!r} is empty', splits_path)
        masks[split] = mask
    try:
        split_masks = SplitMasks(**masks)
    except ValueError as e:
        raise BundleFormatError(str(e), splits_path) from None
    return split_masks


def save_bundle(g: GraphBundle, path: str,
                binary: Optional[bool] = None) -> None:
    """Write ``g`` as a bundle directory; output bytes depend only on
    ``g``."""
    mkdir_or_exist(path)
    src, dst = g.edges()
    upper = src < dst
    write_csv(
        pd.DataFrame({
            'src': src[upper],
            'dst': dst[upper]
        }), osp.join(path, 'edges.csv'))

    if binary is None:
        binary = g.n_nodes > BINARY_FEATURE_THRESHOLD
    bin_path = osp.join(path, 'features.bin')
    csv_path = osp.join(path, 'features.csv')
    if binary:
        write_matrix_bin(g.features, bin_path)
    else:
        with atomic_path(csv_path) as tmp:
            pd.DataFrame(g.features).to_csv(
                tmp,
                header=False,
                index=False,
                float_format='%.17g',
                lineterminator='\n')
        if osp.exists(bin_path):
            # a stale binary file would shadow the CSV on load
            os.remove(bin_path)

    write_csv(
        pd.DataFrame({
            'node': np.arange(g.n_nodes),
            'label': g.labels
        }), osp.join(path, 'labels.csv'))

    nodes, names = [], []
    for split, mask in g.masks.as_dict().items():
        idx = np.flatnonzero(mask)
        nodes.append(idx)
        names.append(np.full(idx.size, split, dtype=object))
    nodes = np.concatenate(nodes)
    names = np.concatenate(names)
    order = np.argsort(nodes, kind='stable')
    write_csv(
        pd.DataFrame({
            'node': nodes[order],
            'split': names[order]
        }), osp.join(path, 'splits.csv'))


def planetoid_split(labels: np.ndarray,
                    seed: int = 0,
                    per_class: int = 20,
                    num_val: int = 500,
                    num_test: int = 1000) -> SplitMasks:
    """Seeded Planetoid-style split: ``per_class`` training nodes per class,
    then ``num_val`` and ``num_test`` from the remaining labeled nodes
    (truncated on small graphs, keeping every split nonempty)."""
    rng = np.random.default_rng(seed)
    labels = np.asarray(labels)
    n = labels.shape[0]
    train = np.zeros(n, dtype=bool)
    for c in np.unique(labels[labels >= 0]):
        members = rng.permutation(np.flatnonzero(labels == c))
        train[members[:min(per_class, max(members.size - 2, 1))]] = True
    rest = rng.permutation(np.flatnonzero(~train & (labels >= 0)))
    if rest.size < 2:
        raise ValueError('too few labeled nodes for a train/val/test split')
    n_val = min(num_val, rest.size // 2)
    n_test = min(num_test, rest.size - n_val)
    val = np.zeros(n, dtype=bool)
    test = np.zeros(n, dtype=bool)
    val[rest[:n_val]] = True
    test[rest[n_val:n_val + n_test]] = True
    return SplitMasks(train, val, test)


def _tokenize(path: str) -> List[Tuple[int, List[str]]]:
    if not osp.exists(path):
        raise BundleFormatError('missing file', path)
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.replace(',', ' ').split()
            if parts:
                rows.append((lineno, parts))
    return rows


def load_linqs(path: str, name: Optional[str] = None,
               seed: int = 0) -> GraphBundle:
    """Read a LINQS ``<name>.content`` / ``<name>.cites`` pair.

    ``path`` is the directory holding both files. Citations that mention
    unknown paper ids are skipped with a warning.
    """
    if name is None:
        content = [f for f in sorted(_listdir(path)) if f.endswith('.content')]
        if len(content) != 1:
            raise BundleFormatError('expected exactly one .content file',
                                    path)
        name = content[0][:-len('.content')]
    content_path = osp.join(path, f'{name}.content')
    cites_path = osp.join(path, f'{name}.cites')

    ids, rows, classes = {}, [], []
    width = None
    for lineno, parts in _tokenize(content_path):
        if len(parts) < 3:
            raise BundleFormatError('expected id, features and label',
                                    content_path, lineno)
        if width is None:
            width = len(parts) - 2
        elif len(parts) - 2 != width:
            raise BundleFormatError(
                f'row has {len(parts) - 2} features, expected {width}',
                content_path, lineno)
        try:
            rows.append([float(v) for v in parts[1:-1]])
        except ValueError:
            raise BundleFormatError('non-numeric feature', content_path,
                                    lineno) from None
        if parts[0] in ids:
            raise BundleFormatError(f'duplicate id {parts[0]!r}',
                                    content_path, lineno)
        ids[parts[0]] = len(ids)
        classes.append(parts[-1])
    if not rows:
        raise BundleFormatError('no nodes', content_path)

    class_names = sorted(set(classes))
    labels = np.array([class_names.index(c) for c in classes])

    src, dst, skipped = [], [], 0
    for lineno, parts in _tokenize(cites_path):
        if len(parts) != 2:
            raise BundleFormatError('expected two ids', cites_path, lineno)
        if parts[0] not in ids or parts[1] not in ids:
            skipped += 1
            continue
        # LINQS stores "cited citing"
        dst.append(ids[parts[0]])
        src.append(ids[parts[1]])
    if skipped:
        print_log(
            f'{cites_path}: skipped {skipped} citations to unknown ids',
            logger='current',
            level=logging.WARNING)

    n = len(rows)
    return GraphBundle.from_edges(
        src,
        dst,
        n,
        np.array(rows),
        labels,
        planetoid_split(labels, seed=seed),
        name=name)


def load_edgelist(path: str, name: Optional[str] = None,
                  seed: int = 0) -> GraphBundle:
    """Read a raw source directory: ``edges.txt`` ("src dst" or
    "src,dst" per line), headerless ``features.csv`` and ``labels.txt``
    (one integer label per node, ``-1`` for unlabeled)."""
    features = read_feature_csv(osp.join(path, 'features.csv'))
    n = features.shape[0]
    edges_path = osp.join(path, 'edges.txt')
    src, dst = [], []
    for lineno, parts in _tokenize(edges_path):
        if len(parts) != 2:
            raise BundleFormatError('expected "src dst"', edges_path, lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise BundleFormatError('non-integer node id', edges_path,
                                    lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise BundleFormatError(
                f'node index out of range [0, {n})', edges_path, lineno)
        src.append(i)
        dst.append(j)

    labels_path = osp.join(path, 'labels.txt')
    labels = []
    for lineno, parts in _tokenize(labels_path):
        try:
            labels.append(int(parts[0]))
        except ValueError:
            raise BundleFormatError('non-integer label', labels_path,
                                    lineno) from None
    if len(labels) != n:
        raise BundleFormatError(
            f'{len(labels)} labels for {n} feature rows', labels_path)
    labels = np.array(labels)
    splits_path = osp.join(path, 'splits.csv')
    masks = _read_splits(splits_path, n) if osp.exists(splits_path) \
        else planetoid_split(labels, seed=seed)
    return GraphBundle.from_edges(
        src,
        dst,
        n,
        features,
        labels,
        masks,
        name=name or osp.basename(osp.normpath(path)))


def _listdir(path: str) -> List[str]:
    if not osp.isdir(path):
        raise BundleFormatError('source directory not found', path)
    return os.listdir(path)


SOURCE_READERS = dict(bundle=load_bundle, linqs=load_linqs,
                      edgelist=load_edgelist)


def read_source(path: str, fmt: str = 'bundle', **kwargs) -> GraphBundle:
    if fmt not in SOURCE_READERS:
        raise ValueError(f'unknown source format {fmt!r}, expected one of '
                         f'{sorted(SOURCE_READERS)}')
    if fmt == 'bundle':
        kwargs.pop('seed', None)
    return SOURCE_READERS[fmt](path, **kwargs)
