# Copyright (c) The UniGAP Authors. All rights reserved.
from collections import OrderedDict
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from unigap.diffcore import Variable


def glorot_uniform(rng: np.random.Generator, fan_in: int,
                   fan_out: int) -> np.ndarray:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


class BaseComponent:
    """Parameter container with ``torch.nn.Module``-like bookkeeping.

    Attributes holding a trainable :class:`Variable` are registered as
    parameters; attributes holding a :class:`BaseComponent` are registered
    as children. ``named_parameters`` walks both in assignment order.
    """

    def __init__(self) -> None:
        object.__setattr__(self, '_parameters', OrderedDict())
        object.__setattr__(self, '_children', OrderedDict())
        object.__setattr__(self, 'training', True)

    def __setattr__(self, name: str, value) -> None:
        params = self.__dict__.get('_parameters')
        children = self.__dict__.get('_children')
        if params is None:
            raise AttributeError(
                'BaseComponent.__init__() must run before assignments')
        params.pop(name, None)
        children.pop(name, None)
        if isinstance(value, Variable) and value.requires_grad:
            value.name = value.name or name
            params[name] = value
        elif isinstance(value, BaseComponent):
            children[name] = value
        object.__setattr__(self, name, value)

    def parameter(self, data: np.ndarray, name: Optional[str] = None):
        return Variable(data, requires_grad=True, name=name)

    def named_children(self) -> Iterator[Tuple[str, 'BaseComponent']]:
        yield from self._children.items()

    def named_parameters(self,
                         prefix: str = '') -> Iterator[Tuple[str, Variable]]:
        for name, param in self._parameters.items():
            yield (f'{prefix}.{name}' if prefix else name), param
        for name, child in self._children.items():
            yield from child.named_parameters(
                f'{prefix}.{name}' if prefix else name)

    def parameters(self):
        return [p for _, p in self.named_parameters()]

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.zero_grad()

    def train(self, mode: bool = True) -> 'BaseComponent':
        object.__setattr__(self, 'training', mode)
        for _, child in self.named_children():
            child.train(mode)
        return self

    def eval(self) -> 'BaseComponent':
        return self.train(False)

    def state_dict(self) -> Dict[str, np.ndarray]:
        return OrderedDict(
            (name, p.data.copy()) for name, p in self.named_parameters())

    def load_state_dict(self, state: Dict[str, np.ndarray],
                        strict: bool = True) -> None:
        own = dict(self.named_parameters())
        if strict:
            missing = sorted(set(own) - set(state))
            unexpected = sorted(set(state) - set(own))
            if missing or unexpected:
                raise KeyError(f'state mismatch: missing={missing}, '
                               f'unexpected={unexpected}')
        for name, value in state.items():
            if name not in own:
                continue
            value = np.asarray(value, dtype=np.float64)
            if value.shape != own[name].shape:
                raise ValueError(f'{name}: shape {value.shape} does not '
                                 f'match {own[name].shape}')
            own[name].data = value.copy()
