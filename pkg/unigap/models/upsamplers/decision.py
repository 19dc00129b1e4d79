# Copyright (c) The UniGAP Authors. All rights reserved.
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import pandas as pd

from unigap.diffcore import (Variable, concat_cols, gumbel_softmax_st, matmul,
                             take, transpose)

KEEP, INSERT = 0, 1


@dataclass
class InsertionDecision:
    """Per-directed-edge insertion choice.

    ``soft`` rows are ``(keep, insert)`` probabilities; ``mask[e]`` is 1
    when edge ``e`` receives a new node. ``hard`` is the straight-through
    one-hot on the tape, ``None`` for heuristic (non-learned) decisions.
    """

    src: np.ndarray
    dst: np.ndarray
    logits: Optional[Union[Variable, np.ndarray]]
    soft: Union[Variable, np.ndarray]
    mask: np.ndarray
    hard: Optional[Variable] = None

    @classmethod
    def empty(cls, src, dst) -> 'InsertionDecision':
        """Keep every edge."""
        n = len(src)
        soft = np.tile([1.0, 0.0], (n, 1))
        return cls(
            np.asarray(src), np.asarray(dst), None, soft,
            np.zeros(n, dtype=np.int64))

    @property
    def num_edges(self) -> int:
        return int(self.mask.shape[0])

    @property
    def num_insertions(self) -> int:
        return int(self.mask.sum())

    def soft_array(self) -> np.ndarray:
        return self.soft.data if isinstance(self.soft, Variable) \
            else np.asarray(self.soft)

    def to_frame(self) -> pd.DataFrame:
        """Dump layout: ``src, dst, p_insert, mask``."""
        return pd.DataFrame({
            'src': self.src,
            'dst': self.dst,
            'p_insert': self.soft_array()[:, INSERT],
            'mask': self.mask
        })


def edge_logits(condensed: Variable, src, dst, weight: Variable) -> Variable:
    """``P[e] = W [h_src || h_dst]`` for every directed edge ``e``.

    ``weight`` is ``2 x 2d``; ``(i, j)`` and ``(j, i)`` get independent
    rows.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    n = condensed.shape[0]
    for name, ends in (('src', src), ('dst', dst)):
        if ends.size and (ends.min() < 0 or ends.max() >= n):
            raise IndexError(f'edge {name} endpoint out of range [0, {n})')
    pairs = concat_cols(take(condensed, src), take(condensed, dst))
    return matmul(pairs, transpose(weight))


def sample_mask(logits: Variable,
                src,
                dst,
                temperature: float = 1.0,
                noise: bool = True,
                seed: Optional[int] = None,
                rng: Optional[np.random.Generator] = None
                ) -> InsertionDecision:
    hard, soft = gumbel_softmax_st(
        logits, temperature, noise, seed=seed, rng=rng)
    mask = hard.data[:, INSERT].astype(np.int64)
    return InsertionDecision(
        np.asarray(src), np.asarray(dst), logits, soft, mask, hard)


def halfhop_mask(src,
                 dst,
                 p: float,
                 seed: Optional[int] = None,
                 rng: Optional[np.random.Generator] = None
                 ) -> InsertionDecision:
    """Insert on each directed edge independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f'p must be in [0, 1], got {p}')
    src = np.asarray(src, dtype=np.int64)
    if rng is None:
        rng = np.random.default_rng(seed)
    mask = (rng.random(src.shape[0]) < p).astype(np.int64)
    const = np.tile([1.0 - p, p], (src.shape[0], 1))
    return InsertionDecision(src, np.asarray(dst), const, const, mask)
