# Copyright (c) The UniGAP Authors. All rights reserved.
import os

import numpy as np
import pytest

from unigap.datasets import GraphBundle, SplitMasks, save_bundle, synth_sbm

DATA_ENV = 'UNIGAP_DATA'


def _masks(n, train, val, test):
    out = []
    for idx in (train, val, test):
        mask = np.zeros(n, dtype=bool)
        mask[list(idx)] = True
        out.append(mask)
    return SplitMasks(*out)


@pytest.fixture
def make_masks():
    """Build split masks from index lists."""
    return _masks


@pytest.fixture
def two_node_graph():
    """A single edge between two differently labeled nodes."""
    return GraphBundle.from_edges([0], [1],
                                  2,
                                  np.array([[1.0, 0.0], [0.0, 1.0]]),
                                  np.array([0, 1]),
                                  _masks(2, [0], [1], []),
                                  name='pair')


@pytest.fixture
def path_graph():
    """0-1-2-3-4-5 with labels 0,0,0,1,1,1."""
    n = 6
    features = np.eye(n)[:, :4] + 0.1 * np.arange(n)[:, None]
    return GraphBundle.from_edges(
        np.arange(n - 1),
        np.arange(1, n),
        n,
        features,
        np.array([0, 0, 0, 1, 1, 1]),
        _masks(n, [0, 5], [1, 4], [2, 3]),
        name='path')


@pytest.fixture
def toy_graph():
    return synth_sbm((12, 12),
                     p_in=0.4,
                     p_out=0.05,
                     feature_dim=5,
                     signal=2.0,
                     seed=0)


@pytest.fixture
def toy_bundle(tmp_path, toy_graph):
    path = tmp_path / 'toy'
    save_bundle(toy_graph, str(path))
    return str(path)


@pytest.fixture
def data_root():
    root = os.environ.get(DATA_ENV)
    if not root or not os.path.isdir(root):
        pytest.skip(f'${DATA_ENV} does not point at prepared bundles')
    return root


@pytest.fixture
def rng():
    return np.random.default_rng(0)
