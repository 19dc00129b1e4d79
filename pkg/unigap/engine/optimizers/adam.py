# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Dict, List, Sequence, Tuple, Union

from unigap.diffcore import Variable, adam_step
from unigap.registry import OPTIMIZERS

ParamGroups = Union[Sequence[Variable], Sequence[Dict]]


@OPTIMIZERS.register_module()
class Adam:
    """Adaptive-moment optimizer with decoupled weight decay.

    Each parameter keeps its own step count, so parameters that receive
    gradients only after a warmup start with proper bias correction.

    Args:
        params: Variables or param groups (dicts with ``params`` and
            optional ``lr`` / ``weight_decay`` overrides).
        lr (float): Base learning rate.
        betas (tuple[float, float]): Moment decay rates.
        eps (float): Denominator floor.
        weight_decay (float): Decoupled decay coefficient.
    """

    def __init__(self,
                 params: ParamGroups,
                 lr: float = 0.01,
                 betas: Tuple[float, float] = (0.9, 0.999),
                 eps: float = 1e-8,
                 weight_decay: float = 0.0) -> None:
        if lr <= 0:
            raise ValueError(f'learning rate must be positive, got {lr}')
        self.defaults = dict(
            lr=lr, betas=tuple(betas), eps=eps, weight_decay=weight_decay)
        params = list(params)
        if params and isinstance(params[0], Variable):
            params = [dict(params=params)]
        self.param_groups: List[Dict] = []
        for group in params:
            group = dict(group)
            group['params'] = list(group['params'])
            for key, value in self.defaults.items():
                group.setdefault(key, value)
            self.param_groups.append(group)
        self.state: Dict[int, Dict] = {}

    def zero_grad(self) -> None:
        for group in self.param_groups:
            for p in group['params']:
                p.zero_grad()

    def step(self) -> None:
        for group in self.param_groups:
            for p in group['params']:
                if p.grad is None:
                    continue
                adam_step([p.data], [p.grad],
                          self.state.setdefault(id(p), {}),
                          lr=group['lr'],
                          betas=group['betas'],
                          eps=group['eps'],
                          weight_decay=group['weight_decay'])
