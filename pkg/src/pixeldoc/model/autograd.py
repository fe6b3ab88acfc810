"""Reverse-mode automatic differentiation on numpy arrays.

A Tensor wraps an ndarray plus the closure that routes its output gradient
to its parents. Calling ``backward()`` on a scalar loss walks the recorded
graph once in reverse topological order. Float32 is the training default;
float64 inputs/params flow through unchanged, which is what the
finite-difference checks rely on.
"""

from __future__ import annotations

import numpy as np

Array = np.ndarray


def _unbroadcast(grad: Array, shape: tuple[int, ...]) -> Array:
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


class Tensor:
    __slots__ = ("data", "grad", "parents", "backward_fn", "name")

    def __init__(self, data, parents=(), backward_fn=None, name: str | None = None):
        if isinstance(data, (np.ndarray, np.generic)):
            arr = np.asarray(data)
            self.data = arr if arr.dtype.kind == "f" else arr.astype(np.float32)
        else:
            self.data = np.asarray(data, dtype=np.float32)
        self.grad: Array | None = None
        self.parents: tuple[Tensor, ...] = parents
        self.backward_fn = backward_fn
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<Tensor{tag} {self.data.shape} {self.data.dtype}>"

    # -- graph walk ---------------------------------------------------------

    def backward(self) -> None:
        if self.data.size != 1:
            raise ValueError("backward() starts from a scalar loss")
        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node.parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            if node.backward_fn is None or node.grad is None:
                continue
            for parent, pgrad in zip(node.parents, node.backward_fn(node.grad)):
                if pgrad is None:
                    continue
                if parent.grad is None:
                    parent.grad = pgrad
                else:
                    parent.grad = parent.grad + pgrad

    # -- operator sugar ------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def reshape(self, *shape):
        return reshape(self, shape if len(shape) > 1 else shape[0])

    def transpose(self, axes):
        return transpose(self, axes)

    def sum(self, axis=None, keepdims=False):
        return tsum(self, axis, keepdims)

    def mean(self, axis=None, keepdims=False):
        return tmean(self, axis, keepdims)


def as_tensor(x, like: Tensor | None = None) -> Tensor:
    if isinstance(x, Tensor):
        return x
    dtype = like.data.dtype if like is not None else np.float32
    return Tensor(np.asarray(x, dtype=dtype))


# -- primitives ---------------------------------------------------------------


def add(a: Tensor, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b, like=a)

    def bw(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return Tensor(a.data + b.data, (a, b), bw)


def sub(a: Tensor, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b, like=a)

    def bw(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return Tensor(a.data - b.data, (a, b), bw)


def mul(a: Tensor, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b, like=a)

    def bw(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return Tensor(a.data * b.data, (a, b), bw)


def div(a: Tensor, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b, like=a)

    def bw(g):
        return (
            _unbroadcast(g / b.data, a.shape),
            _unbroadcast(-g * a.data / (b.data * b.data), b.shape),
        )

    return Tensor(a.data / b.data, (a, b), bw)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    def bw(g):
        ga = g @ np.swapaxes(b.data, -1, -2)
        gb = np.swapaxes(a.data, -1, -2) @ g
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return Tensor(a.data @ b.data, (a, b), bw)


def square(a: Tensor) -> Tensor:
    def bw(g):
        return (g * 2.0 * a.data,)

    return Tensor(a.data * a.data, (a,), bw)


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.data)

    def bw(g):
        return (g * out,)

    return Tensor(out, (a,), bw)


def log(a: Tensor) -> Tensor:
    def bw(g):
        return (g / a.data,)

    return Tensor(np.log(a.data), (a,), bw)


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)

    def bw(g):
        return (g * (1.0 - out * out),)

    return Tensor(out, (a,), bw)


def sigmoid(a: Tensor) -> Tensor:
    out = 1.0 / (1.0 + np.exp(-np.clip(a.data, -60, 60)))

    def bw(g):
        return (g * out * (1.0 - out),)

    return Tensor(out, (a,), bw)


_GELU_C = 0.7978845608028654  # sqrt(2/pi)
_GELU_A = 0.044715


def gelu(a: Tensor) -> Tensor:
    x = a.data
    inner = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(inner)
    out = 0.5 * x * (1.0 + t)

    def bw(g):
        d_inner = _GELU_C * (1.0 + 3.0 * _GELU_A * x * x)
        return (g * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner),)

    return Tensor(out, (a,), bw)


def reshape(a: Tensor, shape) -> Tensor:
    def bw(g):
        return (g.reshape(a.shape),)

    return Tensor(a.data.reshape(shape), (a,), bw)


def transpose(a: Tensor, axes) -> Tensor:
    inverse = np.argsort(axes)

    def bw(g):
        return (g.transpose(inverse),)

    return Tensor(a.data.transpose(axes), (a,), bw)


def broadcast_to(a: Tensor, shape) -> Tensor:
    def bw(g):
        return (_unbroadcast(g, a.shape),)

    return Tensor(np.broadcast_to(a.data, shape).copy(), (a,), bw)


def tsum(a: Tensor, axis=None, keepdims=False) -> Tensor:
    def bw(g):
        if axis is None:
            return (np.broadcast_to(g, a.shape).copy(),)
        g2 = g if keepdims else np.expand_dims(g, axis)
        return (np.broadcast_to(g2, a.shape).copy(),)

    return Tensor(a.data.sum(axis=axis, keepdims=keepdims), (a,), bw)


def tmean(a: Tensor, axis=None, keepdims=False) -> Tensor:
    if axis is None:
        n = a.data.size
    else:
        axes = axis if isinstance(axis, tuple) else (axis,)
        n = int(np.prod([a.shape[ax] for ax in axes]))

    def bw(g):
        if axis is None:
            return (np.broadcast_to(g / n, a.shape).copy(),)
        g2 = g if keepdims else np.expand_dims(g, axis)
        return (np.broadcast_to(g2 / n, a.shape).copy(),)

    return Tensor(a.data.mean(axis=axis, keepdims=keepdims), (a,), bw)


def softmax(a: Tensor, axis: int = -1) -> Tensor:
    shifted = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)

    def bw(g):
        gy = g * out
        return (gy - out * gy.sum(axis=axis, keepdims=True),)

    return Tensor(out, (a,), bw)


def layer_norm_core(a: Tensor, eps: float = 1e-6) -> Tensor:
    """Normalize the last axis to zero mean and unit variance."""
    mu = a.data.mean(axis=-1, keepdims=True)
    xc = a.data - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    out = xc * inv
    n = a.shape[-1]

    def bw(g):
        gx = inv * (g - g.mean(axis=-1, keepdims=True) - out * (g * out).mean(axis=-1, keepdims=True))
        return (gx.astype(a.data.dtype, copy=False),)

    return Tensor(out, (a,), bw)


def gather_rows(a: Tensor, idx: Array) -> Tensor:
    """Select rows along the token axis (-2). ``idx`` has a.shape[:-2] + (K,)."""
    expanded = np.broadcast_to(idx[..., None], idx.shape + (a.shape[-1],))

    def bw(g):
        out = np.zeros_like(a.data)
        np.add.at(out, _index_grid(a.shape, idx), g)
        return (out,)

    return Tensor(np.take_along_axis(a.data, expanded, axis=-2), (a,), bw)


def _index_grid(shape: tuple[int, ...], idx: Array):
    """Fancy-index tuple selecting idx rows of the -2 axis for every batch."""
    if idx.ndim == 1:
        return (idx,)
    batch = np.arange(shape[0])[:, None]
    return (batch, idx)


def scatter_rows(base: Tensor, idx: Array, rows: Tensor) -> Tensor:
    """Copy ``base`` and overwrite rows of the -2 axis at ``idx`` with ``rows``."""
    out = base.data.copy()
    out[_index_grid(base.shape, idx)] = rows.data

    def bw(g):
        g_rows = g[_index_grid(base.shape, idx)]
        g_base = g.copy()
        g_base[_index_grid(base.shape, idx)] = 0.0
        return g_base, g_rows

    return Tensor(out, (base, rows), bw)


def bce_with_logits(logits: Tensor, targets: Array) -> Tensor:
    """Elementwise binary cross-entropy, numerically stable in both tails."""
    z = logits.data
    out = np.maximum(z, 0.0) - z * targets + np.log1p(np.exp(-np.abs(z)))

    def bw(g):
        p = 1.0 / (1.0 + np.exp(-np.clip(z, -60, 60)))
        return (g * (p - targets),)

    return Tensor(out, (logits,), bw)


def cross_entropy(logits: Tensor, labels: Array) -> Tensor:
    """Mean softmax cross-entropy for integer labels over the last axis."""
    z = logits.data
    shifted = z - z.max(axis=-1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=-1, keepdims=True)) + z.max(axis=-1, keepdims=True)
    picked = np.take_along_axis(z, labels[..., None], axis=-1)[..., 0]
    losses = lse[..., 0] - picked
    n = losses.size

    def bw(g):
        p = np.exp(z - lse)
        onehot = np.zeros_like(z)
        np.put_along_axis(onehot, labels[..., None], 1.0, axis=-1)
        return (g * (p - onehot) / n,)

    return Tensor(losses.mean(), (logits,), bw)
