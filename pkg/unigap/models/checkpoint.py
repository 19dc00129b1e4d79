# Copyright (c) The UniGAP Authors. All rights reserved.
import os.path as osp
from typing import Dict

import numpy as np
from mmengine.fileio import load
from mmengine.utils import mkdir_or_exist

from unigap.datasets.io import read_matrix_bin, write_matrix_bin
from unigap.utils.fileio import write_json

MANIFEST = 'manifest.json'


def save_checkpoint(state: Dict[str, np.ndarray], directory: str) -> None:
    """One binary matrix file per parameter plus a shape manifest."""
    mkdir_or_exist(directory)
    manifest = {}
    for name, value in state.items():
        value = np.asarray(value, dtype=np.float64)
        filename = f'{name}.bin'
        write_matrix_bin(value.reshape(1, -1) if value.ndim < 2 else
                         value.reshape(-1, value.shape[-1]),
                         osp.join(directory, filename))
        manifest[name] = dict(file=filename, shape=list(value.shape))
    write_json(manifest, osp.join(directory, MANIFEST))


def load_checkpoint(directory: str) -> Dict[str, np.ndarray]:
    manifest = load(osp.join(directory, MANIFEST))
    state = {}
    for name in sorted(manifest):
        entry = manifest[name]
        value = read_matrix_bin(osp.join(directory, entry['file']))
        state[name] = value.reshape(entry['shape'])
    return state
