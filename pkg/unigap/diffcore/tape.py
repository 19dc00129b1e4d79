# Copyright (c) The UniGAP Authors. All rights reserved.
"""Reverse-mode differentiation over numpy arrays.

A :class:`Tape` is activated with ``with Tape() as tape:``; every operation
whose inputs require gradients appends a node to the active tape. Outside of
an active tape operations are evaluated eagerly and nothing is recorded,
which is how evaluation passes run.
"""
import threading
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from unigap.utils.exceptions import NonFiniteError, TapeError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_local = threading.local()


def _tape_stack() -> List['Tape']:
    if not hasattr(_local, 'stack'):
        _local.stack = []
    return _local.stack


def current_tape() -> Optional['Tape']:
    stack = _tape_stack()
    return stack[-1] if stack else None


class Variable:
    """A float64 array handle that can take part in differentiation.

    Args:
        data (array-like): Values, converted to a float64 array.
        requires_grad (bool): Whether gradients are accumulated into
            :attr:`grad` for this variable. Defaults to False.
        name (str, optional): Name used in error messages and checkpoints.
    """

    __array_priority__ = 100

    def __init__(self,
                 data,
                 requires_grad: bool = False,
                 name: Optional[str] = None) -> None:
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.node_id: Optional[int] = None
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def is_leaf(self) -> bool:
        return self.node_id is None

    def zero_grad(self) -> None:
        self.grad = None

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __repr__(self) -> str:
        name = f' name={self.name!r}' if self.name else ''
        return (f'Variable(shape={self.shape}{name}, '
                f'requires_grad={self.requires_grad})')

    def __add__(self, other):
        from . import ops
        return ops.add(self, other)

    def __radd__(self, other):
        from . import ops
        return ops.add(other, self)

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops
        return ops.mul(self, other)

    def __rmul__(self, other):
        from . import ops
        return ops.mul(other, self)

    def __neg__(self):
        from . import ops
        return ops.scale(self, -1.0)

    def __matmul__(self, other):
        from . import ops
        return ops.matmul(self, other)


class _Node:
    __slots__ = ('output', 'parents', 'backward')

    def __init__(self, output: Variable, parents: Tuple[Variable, ...],
                 backward: BackwardFn) -> None:
        self.output = output
        self.parents = parents
        self.backward = backward


class Tape:
    """Ordered record of differentiable operations.

    Nodes are appended as operations execute, so every node's parents
    precede it. A tape supports exactly one :func:`backward` call, after
    which it is reset and marked consumed.
    """

    def __init__(self) -> None:
        self.nodes: List[_Node] = []
        self.consumed = False

    def __enter__(self) -> 'Tape':
        if self.consumed:
            raise TapeError('cannot record on a consumed tape')
        _tape_stack().append(self)
        return self

    def __exit__(self, *exc) -> None:
        stack = _tape_stack()
        if stack and stack[-1] is self:
            stack.pop()

    def __len__(self) -> int:
        return len(self.nodes)

    def owns(self, var: Variable) -> bool:
        idx = var.node_id
        return (idx is not None and idx < len(self.nodes)
                and self.nodes[idx].output is var)

    def record(self, output: Variable, parents: Tuple[Variable, ...],
               backward: BackwardFn) -> Variable:
        if self.consumed:
            raise TapeError('cannot record on a consumed tape')
        output.requires_grad = True
        output.node_id = len(self.nodes)
        self.nodes.append(_Node(output, parents, backward))
        return output


def as_variable(x) -> Variable:
    return x if isinstance(x, Variable) else Variable(x)


def make_result(data: np.ndarray, parents: Sequence[Variable],
                backward: BackwardFn, op: str) -> Variable:
    """Wrap ``data`` and record it on the active tape when needed."""
    if not np.all(np.isfinite(data)):
        raise NonFiniteError(f'{op} produced non-finite values')
    out = Variable(data)
    tape = current_tape()
    if tape is not None and any(p.requires_grad for p in parents):
        tape.record(out, tuple(parents), backward)
    return out


def detach(x: Variable) -> Variable:
    """A constant view of ``x`` that stops gradient flow."""
    return Variable(x.data, requires_grad=False, name=x.name)


def backward(tape: Tape, loss: Variable) -> List[Variable]:
    """Back-propagate from scalar ``loss`` through ``tape``.

    Gradients are accumulated into ``.grad`` of every leaf variable with
    ``requires_grad=True`` reached from ``loss``. The tape is consumed.

    Returns:
        list[Variable]: The leaves that received a gradient.
    """
    if tape.consumed:
        raise TapeError('tape already consumed')
    if loss.data.size != 1:
        raise TapeError(
            f'loss must be a scalar, got shape {tuple(loss.shape)}')
    if not tape.owns(loss):
        raise TapeError('loss was not recorded on this tape')

    grads = {id(loss): np.ones_like(loss.data)}
    leaves = {}
    for node in reversed(tape.nodes[:loss.node_id + 1]):
        upstream = grads.pop(id(node.output), None)
        if upstream is None:
            continue
        parent_grads = node.backward(upstream)
        for parent, grad in zip(node.parents, parent_grads):
            if grad is None or not parent.requires_grad:
                continue
            if grad.shape != parent.shape:
                grad = grad.reshape(parent.shape)
            if tape.owns(parent):
                key = id(parent)
                grads[key] = grads[key] + grad if key in grads else grad
            elif parent.is_leaf:
                parent.grad = (grad.copy() if parent.grad is None else
                               parent.grad + grad)
                leaves[id(parent)] = parent

    tape.nodes.clear()
    tape.consumed = True
    return list(leaves.values())
