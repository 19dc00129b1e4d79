# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from unigap.utils.fileio import read_csv, write_csv

COLUMNS = ['epoch', 'split', 'metric', 'value']
BEST = 'best'


class ExperimentReport:
    """Long-format per-epoch metrics of one training session.

    Each row is ``(epoch, split, metric, value)``; ``split`` is one of
    ``train``, ``val``, ``test``, ``graph`` (graph-level measurements) or
    ``best`` for the summary rows of the best validation epoch.
    """

    def __init__(self, rows: Optional[List] = None, meta: Dict = None):
        self.rows: List = list(rows or [])
        self.meta = dict(meta or {})

    def add(self, epoch: int, split: str, metric: str, value) -> None:
        self.rows.append((int(epoch), split, metric, float(value)))

    def add_many(self, epoch: int, split: str, metrics: Dict) -> None:
        for metric, value in metrics.items():
            self.add(epoch, split, metric, value)

    def set_best(self, epoch: int, metrics: Dict[str, float]) -> None:
        self.rows = [r for r in self.rows if r[1] != BEST]
        self.add_many(epoch, BEST, metrics)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=COLUMNS)
        return frame.astype({'epoch': np.int64, 'value': np.float64})

    def to_csv(self, path: str) -> None:
        write_csv(self.to_frame(), path)

    @classmethod
    def from_csv(cls, path: str) -> 'ExperimentReport':
        frame = read_csv(path, dtype={'split': str, 'metric': str})
        rows = [(int(e), s, m, float(v))
                for e, s, m, v in frame[COLUMNS].itertuples(index=False)]
        return cls(rows)

    def series(self, split: str, metric: str) -> np.ndarray:
        return np.array([
            r[3] for r in self.rows if r[1] == split and r[2] == metric
        ])

    @property
    def num_epochs(self) -> int:
        epochs = {r[0] for r in self.rows if r[1] != BEST}
        return len(epochs)

    @property
    def best_epoch(self) -> Optional[int]:
        for r in self.rows:
            if r[1] == BEST:
                return r[0]
        return None

    @property
    def best(self) -> Dict[str, float]:
        return {r[2]: r[3] for r in self.rows if r[1] == BEST}

    def __eq__(self, other) -> bool:
        return isinstance(other, ExperimentReport) and self.rows == other.rows

    def __repr__(self) -> str:
        return (f'ExperimentReport(epochs={self.num_epochs}, '
                f'best_epoch={self.best_epoch})')
