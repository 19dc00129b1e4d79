# Copyright (c) The UniGAP Authors. All rights reserved.
"""Differentiable array operations.

Every function takes :class:`Variable` (or array-like) inputs and returns a
new :class:`Variable`; the backward closure of each op maps the upstream
gradient to one gradient per input (``None`` for non-differentiable
inputs).
"""
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from unigap.utils.exceptions import NonFiniteError, ShapeError
from .tape import Variable, as_variable, make_result

ArrayLike = Union[Variable, np.ndarray, float]


def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _broadcast_shape(op: str, a: Variable, b: Variable):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(op, a.shape, b.shape) from None


def add(a: ArrayLike, b: ArrayLike) -> Variable:
    a, b = as_variable(a), as_variable(b)
    _broadcast_shape('add', a, b)

    def _backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return make_result(a.data + b.data, (a, b), _backward, 'add')


def sub(a: ArrayLike, b: ArrayLike) -> Variable:
    a, b = as_variable(a), as_variable(b)
    _broadcast_shape('sub', a, b)

    def _backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return make_result(a.data - b.data, (a, b), _backward, 'sub')


def mul(a: ArrayLike, b: ArrayLike) -> Variable:
    """Hadamard product with numpy broadcasting."""
    a, b = as_variable(a), as_variable(b)
    _broadcast_shape('hadamard', a, b)

    def _backward(g):
        return (_unbroadcast(g * b.data, a.shape),
                _unbroadcast(g * a.data, b.shape))

    return make_result(a.data * b.data, (a, b), _backward, 'hadamard')


hadamard = mul


def matmul(a: ArrayLike, b: ArrayLike) -> Variable:
    """(Batched) matrix product over the last two axes."""
    a, b = as_variable(a), as_variable(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError('matmul', a.shape, b.shape)
    try:
        out = np.matmul(a.data, b.data)
    except ValueError:
        raise ShapeError('matmul', a.shape, b.shape) from None

    def _backward(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2))
        gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return make_result(out, (a, b), _backward, 'matmul')


def concat(tensors: Sequence[ArrayLike], axis: int = 0) -> Variable:
    tensors = [as_variable(t) for t in tensors]
    ref = tensors[0]
    ax = axis % ref.ndim
    for t in tensors[1:]:
        if t.ndim != ref.ndim or any(
                s != r for i, (s, r) in enumerate(zip(t.shape, ref.shape))
                if i != ax):
            raise ShapeError(f'concat(axis={axis})', ref.shape, t.shape)
    sizes = [t.shape[ax] for t in tensors]
    bounds = np.cumsum(sizes)[:-1]

    def _backward(g):
        return tuple(np.split(g, bounds, axis=ax))

    out = np.concatenate([t.data for t in tensors], axis=ax)
    return make_result(out, tuple(tensors), _backward, 'concat')


def concat_cols(a: ArrayLike, b: ArrayLike) -> Variable:
    return concat([a, b], axis=-1)


def concat_axis0(a: ArrayLike, b: ArrayLike) -> Variable:
    return concat([a, b], axis=0)


_DENSE_OPS = dict(
    matmul=matmul,
    add=add,
    hadamard=mul,
    concat_cols=concat_cols,
    concat_axis0=concat_axis0)


def dense_op(a: ArrayLike, b: ArrayLike, kind: str) -> Variable:
    """Dispatch a binary dense op by name."""
    if kind not in _DENSE_OPS:
        raise ValueError(f'unknown dense op {kind!r}, '
                         f'expected one of {sorted(_DENSE_OPS)}')
    return _DENSE_OPS[kind](a, b)


def scale(x: ArrayLike, c: float) -> Variable:
    x = as_variable(x)
    c = float(c)
    return make_result(x.data * c, (x, ), lambda g: (g * c, ), 'scale')


def transpose(x: ArrayLike, axes: Optional[Sequence[int]] = None) -> Variable:
    x = as_variable(x)
    axes = tuple(range(x.ndim))[::-1] if axes is None else tuple(axes)
    inverse = tuple(np.argsort(axes))
    return make_result(
        np.transpose(x.data, axes), (x, ),
        lambda g: (np.transpose(g, inverse), ), 'transpose')


def reshape(x: ArrayLike, shape: Sequence[int]) -> Variable:
    x = as_variable(x)
    try:
        out = x.data.reshape(shape)
    except ValueError:
        raise ShapeError('reshape', x.shape, tuple(shape)) from None
    return make_result(out, (x, ), lambda g: (g.reshape(x.shape), ),
                       'reshape')


def take(x: ArrayLike, indices, axis: int = 0) -> Variable:
    """Gather slices along ``axis``; repeated indices accumulate gradient."""
    x = as_variable(x)
    idx = np.asarray(indices, dtype=np.int64)
    ax = axis % x.ndim
    if idx.size and (idx.min() < 0 or idx.max() >= x.shape[ax]):
        raise IndexError(f'take: index out of range for axis {axis} '
                         f'of shape {x.shape}')

    def _backward(g):
        moved = np.zeros(
            (x.shape[ax], ) + tuple(np.delete(x.shape, ax)), dtype=g.dtype)
        np.add.at(moved, idx, np.moveaxis(g, ax, 0))
        return (np.moveaxis(moved, 0, ax), )

    return make_result(np.take(x.data, idx, axis=ax), (x, ), _backward, 'take')


def sum(x: ArrayLike, axis=None, keepdims: bool = False) -> Variable:  # noqa
    x = as_variable(x)

    def _backward(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(), )

    return make_result(
        np.sum(x.data, axis=axis, keepdims=keepdims), (x, ), _backward, 'sum')


def mean(x: ArrayLike, axis=None, keepdims: bool = False) -> Variable:
    x = as_variable(x)
    count = x.data.size if axis is None else np.prod(
        np.take(x.shape, np.atleast_1d(axis)))
    return scale(sum(x, axis=axis, keepdims=keepdims), 1.0 / count)


def relu(x: ArrayLike) -> Variable:
    x = as_variable(x)
    pos = x.data > 0
    return make_result(
        np.where(pos, x.data, 0.0), (x, ), lambda g: (g * pos, ), 'relu')


def elu(x: ArrayLike, alpha: float = 1.0) -> Variable:
    x = as_variable(x)
    pos = x.data > 0
    neg_part = alpha * np.expm1(np.minimum(x.data, 0.0))
    out = np.where(pos, x.data, neg_part)

    def _backward(g):
        return (g * np.where(pos, 1.0, neg_part + alpha), )

    return make_result(out, (x, ), _backward, 'elu')


def prelu(x: ArrayLike, slope: Variable) -> Variable:
    """Leaky rectifier with a learnable slope (broadcast over ``x``)."""
    x = as_variable(x)
    slope = as_variable(slope)
    pos = x.data > 0

    def _backward(g):
        gx = g * np.where(pos, 1.0, slope.data)
        gs = _unbroadcast(g * np.where(pos, 0.0, x.data), slope.shape)
        return gx, gs

    out = np.where(pos, x.data, slope.data * x.data)
    return make_result(out, (x, slope), _backward, 'prelu')


def sigmoid(x: ArrayLike) -> Variable:
    x = as_variable(x)
    out = 0.5 * (1.0 + np.tanh(0.5 * x.data))
    return make_result(out, (x, ), lambda g: (g * out * (1.0 - out), ),
                       'sigmoid')


def dropout(x: ArrayLike,
            p: float,
            seed: Optional[int] = None,
            rng: Optional[np.random.Generator] = None,
            training: bool = True) -> Variable:
    """Inverted dropout with an explicit random source.

    Exactly one of ``seed`` or ``rng`` drives the mask when ``training``;
    evaluation mode and ``p=0`` return ``x`` unchanged.
    """
    if not 0.0 <= p < 1.0:
        raise ValueError(f'dropout probability must be in [0, 1), got {p}')
    x = as_variable(x)
    if not training or p == 0.0:
        return x
    if rng is None:
        rng = np.random.default_rng(seed)
    keep = (rng.random(x.shape) >= p) / (1.0 - p)
    return make_result(x.data * keep, (x, ), lambda g: (g * keep, ),
                       'dropout')


def elementwise(x: ArrayLike, kind: str, **kwargs) -> Variable:
    """Dispatch a unary op by name (``relu``, ``elu``, ``dropout``,
    ``scale``)."""
    if kind == 'relu':
        return relu(x)
    if kind == 'elu':
        return elu(x, **kwargs)
    if kind == 'dropout':
        return dropout(x, **kwargs)
    if kind == 'scale':
        return scale(x, **kwargs)
    raise ValueError(f'unknown elementwise op {kind!r}')


def l2_normalize_rows(array: np.ndarray) -> np.ndarray:
    """Non-differentiable row normalization; zero rows stay zero."""
    norms = np.linalg.norm(array, axis=-1, keepdims=True)
    return np.divide(array, norms, out=np.zeros_like(array), where=norms > 0)


def row_l2_normalize(x: ArrayLike) -> Variable:
    """Divide each row (last axis) by its Euclidean norm.

    Zero rows pass through unchanged, and so does their gradient.
    """
    x = as_variable(x)
    norms = np.linalg.norm(x.data, axis=-1, keepdims=True)
    nonzero = norms > 0
    safe = np.where(nonzero, norms, 1.0)
    out = np.where(nonzero, x.data / safe, x.data)

    def _backward(g):
        dot = np.sum(g * out, axis=-1, keepdims=True)
        return (np.where(nonzero, (g - out * dot) / safe, g), )

    return make_result(out, (x, ), _backward, 'row_l2_normalize')


def softmax(x: ArrayLike, axis: int = -1) -> Variable:
    x = as_variable(x)
    shifted = x.data - np.max(x.data, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    out = exp / np.sum(exp, axis=axis, keepdims=True)

    def _backward(g):
        return (out * (g - np.sum(g * out, axis=axis, keepdims=True)), )

    return make_result(out, (x, ), _backward, 'softmax')


def masked_softmax_cross_entropy(logits: ArrayLike, labels,
                                 mask) -> Variable:
    """Mean negative log-likelihood over the rows selected by ``mask``."""
    logits = as_variable(logits)
    labels = np.asarray(labels, dtype=np.int64)
    mask = np.asarray(mask, dtype=bool)
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        raise ValueError('cross entropy over an empty mask')
    if rows.max() >= logits.shape[0]:
        raise ShapeError('masked_softmax_cross_entropy', logits.shape,
                         mask.shape)
    num_classes = logits.shape[1]
    target = labels[rows]
    if target.min() < 0 or target.max() >= num_classes:
        raise ValueError('labels of masked rows must lie in '
                         f'[0, {num_classes})')
    z = logits.data[rows]
    z = z - np.max(z, axis=1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(z), axis=1, keepdims=True))
    log_prob = z - log_norm
    loss = -np.mean(log_prob[np.arange(rows.size), target])

    def _backward(g):
        grad = np.zeros_like(logits.data)
        probs = np.exp(log_prob)
        probs[np.arange(rows.size), target] -= 1.0
        grad[rows] = probs * (g / rows.size)
        return (grad, )

    return make_result(np.asarray(loss), (logits, ), _backward,
                       'masked_softmax_cross_entropy')


def mse_loss(pred: ArrayLike, target: np.ndarray,
             mask: Optional[np.ndarray] = None) -> Variable:
    """Mean squared error, optionally restricted to entries in ``mask``."""
    pred = as_variable(pred)
    target = np.asarray(target, dtype=np.float64)
    if target.shape != pred.shape:
        raise ShapeError('mse_loss', pred.shape, target.shape)
    weight = (np.ones(pred.shape) if mask is None else np.asarray(
        mask, dtype=np.float64))
    count = max(weight.sum(), 1.0)
    diff = (pred.data - target) * weight
    loss = np.sum(diff**2) / count
    return make_result(
        np.asarray(loss), (pred, ), lambda g: (g * 2.0 * diff / count, ),
        'mse_loss')


def spmm(s: sp.spmatrix, x: ArrayLike) -> Variable:
    """Sparse (constant) times dense product ``s @ x``."""
    x = as_variable(x)
    if x.ndim != 2 or s.shape[1] != x.shape[0]:
        raise ShapeError('spmm', s.shape, x.shape)
    s = sp.csr_matrix(s)
    if not np.all(np.isfinite(s.data)):
        raise NonFiniteError('spmm received a non-finite sparse operand')
    out = np.asarray(s @ x.data)
    return make_result(out, (x, ), lambda g: (np.asarray(s.T @ g), ), 'spmm')
