# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from unigap.utils.fileio import read_csv, write_csv
from unigap.utils.plotting import plot_lines

MODES = ('plain', 'unigap')


@dataclass
class RiskCurve:
    """Per-round values of a smoothing measure for each propagation mode.

    Attributes:
        k (np.ndarray): Strictly increasing round counts.
        values (dict): ``mode -> array`` aligned with ``k``, nonnegative.
        kind (str): ``covariance_norm`` or ``risk``.
        slopes (dict): Fitted log-linear decay slope per mode.
        degenerate (bool): Set when a curve does not decay.
    """

    k: np.ndarray
    values: Dict[str, np.ndarray]
    kind: str = 'covariance_norm'
    slopes: Dict[str, float] = field(default_factory=dict)
    degenerate: bool = False

    def __post_init__(self) -> None:
        self.k = np.asarray(self.k, dtype=np.int64)
        if np.any(np.diff(self.k) <= 0):
            raise ValueError('k values must be strictly increasing')
        self.values = {
            mode: np.asarray(v, dtype=np.float64)
            for mode, v in self.values.items()
        }
        for mode, v in self.values.items():
            if v.shape != self.k.shape:
                raise ValueError(f'{mode} has {v.size} values for '
                                 f'{self.k.size} rounds')
            if np.any(v < 0):
                raise ValueError(f'{mode} values must be nonnegative')

    @property
    def slope_ratio(self) -> Optional[float]:
        """``slope(unigap) / slope(plain)``; 0.5 means half the rate."""
        plain = self.slopes.get('plain')
        if not plain:
            return None
        return self.slopes.get('unigap', np.nan) / plain

    def argmin(self, mode: str) -> int:
        """Round with the smallest value (first on ties)."""
        return int(self.k[np.argmin(self.values[mode])])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            dict(k=int(k), mode=mode, value=float(v))
            for mode, values in self.values.items()
            for k, v in zip(self.k, values)
        ], columns=['k', 'mode', 'value'])

    def to_csv(self, path: str) -> None:
        write_csv(self.to_frame(), path)

    @classmethod
    def from_csv(cls, path: str, kind: str = 'covariance_norm') -> 'RiskCurve':
        frame = read_csv(path)
        modes = list(pd.unique(frame['mode']))
        k = frame[frame['mode'] == modes[0]]['k'].to_numpy()
        values = {
            m: frame[frame['mode'] == m]['value'].to_numpy()
            for m in modes
        }
        return cls(k, values, kind)

    def plot(self, path: str) -> None:
        """Log-scale SVG with one line per mode."""
        plot_lines(
            self.to_frame(),
            'k',
            'value',
            'mode',
            path,
            xlabel='rounds of message passing',
            ylabel=self.kind.replace('_', ' '),
            logy=self.kind == 'covariance_norm')
