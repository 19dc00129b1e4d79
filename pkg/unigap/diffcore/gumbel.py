# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Optional, Tuple

import numpy as np

from unigap.utils.exceptions import NonFiniteError, ShapeError
from .ops import scale, softmax
from .tape import Variable, as_variable, make_result

_U_MIN = 1e-12


def sample_gumbel(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard Gumbel draws ``-log(-log(U))`` with clamped ``U``."""
    u = np.clip(rng.random(shape), _U_MIN, 1.0 - _U_MIN)
    return -np.log(-np.log(u))


def gumbel_softmax_st(logits: Variable,
                      temperature: float = 1.0,
                      noise: bool = True,
                      seed: Optional[int] = None,
                      rng: Optional[np.random.Generator] = None
                      ) -> Tuple[Variable, Variable]:
    """Straight-through Gumbel-Softmax over two columns (keep, insert).

    Returns:
        tuple[Variable, Variable]: ``(hard, soft)``. ``hard`` is exactly
        one-hot per row; column 1 wins when ``soft[:, 0] <= soft[:, 1]``.
        Its backward passes the upstream gradient to ``soft`` unchanged,
        i.e. ``hard = onehot - detach(soft) + soft``.
    """
    if temperature <= 0:
        raise ValueError(f'temperature must be positive, got {temperature}')
    logits = as_variable(logits)
    if logits.ndim != 2 or logits.shape[1] != 2:
        raise ShapeError('gumbel_softmax_st', logits.shape, (None, 2))
    if not np.all(np.isfinite(logits.data)):
        raise NonFiniteError('gumbel_softmax_st received non-finite logits')

    z = logits
    if noise:
        if rng is None:
            rng = np.random.default_rng(seed)
        z = logits + sample_gumbel(logits.shape, rng)
    soft = softmax(scale(z, 1.0 / temperature), axis=1)

    insert = soft.data[:, 0] <= soft.data[:, 1]
    onehot = np.stack([~insert, insert], axis=1).astype(np.float64)
    hard = make_result(onehot, (soft, ), lambda g: (g, ), 'straight_through')
    return hard, soft


def annealed_temperature(start: float, end: Optional[float], epoch: int,
                         max_epochs: int) -> float:
    """Linear schedule from ``start`` to ``end`` over ``max_epochs``."""
    if end is None or max_epochs <= 1:
        return float(start)
    frac = min(max(epoch / (max_epochs - 1), 0.0), 1.0)
    return float(start + (end - start) * frac)
