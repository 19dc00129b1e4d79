# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Dict, Optional, Sequence, Tuple

import numpy as np


def adam_step(params: Sequence[np.ndarray],
              grads: Sequence[Optional[np.ndarray]],
              state: Dict,
              lr: float,
              betas: Tuple[float, float] = (0.9, 0.999),
              eps: float = 1e-8,
              weight_decay: float = 0.0) -> Dict:
    """One adaptive-moment update with decoupled weight decay, in place.

    ``state`` holds ``step`` and per-parameter ``exp_avg``/``exp_avg_sq``
    lists; it is initialized on first use. Parameters whose gradient is
    ``None`` are left untouched.
    """
    if lr <= 0:
        raise ValueError(f'learning rate must be positive, got {lr}')
    beta1, beta2 = betas
    if not state:
        state['step'] = 0
        state['exp_avg'] = [np.zeros_like(p) for p in params]
        state['exp_avg_sq'] = [np.zeros_like(p) for p in params]
    state['step'] += 1
    step = state['step']
    bias1 = 1.0 - beta1**step
    bias2 = 1.0 - beta2**step

    for i, (param, grad) in enumerate(zip(params, grads)):
        if grad is None:
            continue
        if grad.shape != param.shape:
            raise ValueError(f'gradient shape {grad.shape} does not match '
                             f'parameter shape {param.shape}')
        m, v = state['exp_avg'][i], state['exp_avg_sq'][i]
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * grad * grad
        if weight_decay:
            param *= 1.0 - lr * weight_decay
        param -= lr * (m / bias1) / (np.sqrt(v / bias2) + eps)
    return state
