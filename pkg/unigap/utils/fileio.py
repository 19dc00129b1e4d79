# Copyright (c) The UniGAP Authors. All rights reserved.
import os
import os.path as osp
import tempfile
from contextlib import contextmanager
from typing import Iterator

import pandas as pd
from mmengine.fileio import dump
from mmengine.utils import mkdir_or_exist


@contextmanager
def atomic_path(path: str) -> Iterator[str]:
    """Yield a temporary path that replaces ``path`` on success."""
    directory = osp.dirname(osp.abspath(path))
    mkdir_or_exist(directory)
    fd, tmp = tempfile.mkstemp(
        prefix=f'.{osp.basename(path)}.', suffix='.tmp', dir=directory)
    os.close(fd)
    try:
        yield tmp
        os.replace(tmp, path)
    finally:
        if osp.exists(tmp):
            os.remove(tmp)


def write_csv(frame: pd.DataFrame, path: str) -> None:
    with atomic_path(path) as tmp:
        frame.to_csv(tmp, index=False, lineterminator='\n')


def read_csv(path: str, **kwargs) -> pd.DataFrame:
    kwargs.setdefault('float_precision', 'round_trip')
    return pd.read_csv(path, **kwargs)


def write_json(obj, path: str) -> None:
    with atomic_path(path) as tmp:
        dump(obj, tmp, file_format='json', indent=2, sort_keys=True)


def write_text(text: str, path: str) -> None:
    with atomic_path(path) as tmp:
        with open(tmp, 'w') as f:
            f.write(text)
