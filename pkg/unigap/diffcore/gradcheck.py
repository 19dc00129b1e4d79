# Copyright (c) The UniGAP Authors. All rights reserved.
"""Central finite-difference oracles for gradient tests."""
from typing import Callable, List, Sequence

import numpy as np

from .tape import Tape, Variable, backward


def numerical_grad(fn: Callable[[], Variable],
                   var: Variable,
                   h: float = 1e-5) -> np.ndarray:
    """Central differences of scalar ``fn()`` w.r.t. ``var.data``."""
    grad = np.zeros_like(var.data)
    flat = var.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        plus = fn().item()
        flat[i] = orig - h
        minus = fn().item()
        flat[i] = orig
        out[i] = (plus - minus) / (2 * h)
    return grad


def analytic_grads(fn: Callable[[], Variable],
                   variables: Sequence[Variable]) -> List[np.ndarray]:
    for v in variables:
        v.requires_grad = True
        v.zero_grad()
    with Tape() as tape:
        loss = fn()
    backward(tape, loss)
    return [
        np.zeros_like(v.data) if v.grad is None else v.grad.copy()
        for v in variables
    ]


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(np.abs(analytic).max(initial=0.0),
                np.abs(numeric).max(initial=0.0), 1e-8)
    return float(np.abs(analytic - numeric).max(initial=0.0) / scale)


def check_grad(fn: Callable[[], Variable],
               variables: Sequence[Variable],
               h: float = 1e-5) -> float:
    """Max relative error between backward and central differences.

    ``fn`` must rebuild the computation from ``variables`` on every call.
    """
    analytic = analytic_grads(fn, variables)
    errors = [
        relative_error(a, numerical_grad(fn, v, h))
        for a, v in zip(analytic, variables)
    ]
    return max(errors)
