"""Transformer building blocks on the autograd tape (pre-norm ViT style)."""

from __future__ import annotations

import numpy as np

from . import autograd as ag
from .autograd import Tensor


def sincos_position_table(rows: int, cols: int, dim: int) -> np.ndarray:
    """Fixed 2D sinusoidal embeddings, row-major patch order, shape (rows*cols, dim).

    Half the channels encode the row coordinate, half the column, each as
    interleaved sin/cos banks. Requires dim divisible by 4.
    """
    if dim % 4:
        raise ValueError(f"positional dim must be divisible by 4, got {dim}")
    half = dim // 2

    def bank(positions: np.ndarray) -> np.ndarray:
        k = np.arange(half // 2, dtype=np.float64)
        omega = 1.0 / 10000.0 ** (k / (half // 2))
        angles = positions[:, None] * omega[None, :]
        return np.concatenate([np.sin(angles), np.cos(angles)], axis=1)

    rr, cc = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    emb_r = bank(rr.reshape(-1).astype(np.float64))
    emb_c = bank(cc.reshape(-1).astype(np.float64))
    return np.concatenate([emb_r, emb_c], axis=1)


def init_linear(rng: np.random.Generator, d_in: int, d_out: int, dtype) -> tuple[np.ndarray, np.ndarray]:
    w = rng.normal(0.0, 0.02, size=(d_in, d_out)).astype(dtype)
    b = np.zeros(d_out, dtype=dtype)
    return w, b


def block_param_shapes(width: int, mlp_ratio: float) -> dict[str, tuple[int, ...]]:
    hidden = int(width * mlp_ratio)
    return {
        "ln1.g": (width,),
        "ln1.b": (width,),
        "attn.q.w": (width, width),
        "attn.q.b": (width,),
        "attn.k.w": (width, width),
        "attn.k.b": (width,),
        "attn.v.w": (width, width),
        "attn.v.b": (width,),
        "attn.o.w": (width, width),
        "attn.o.b": (width,),
        "ln2.g": (width,),
        "ln2.b": (width,),
        "mlp.fc.w": (width, hidden),
        "mlp.fc.b": (hidden,),
        "mlp.out.w": (hidden, width),
        "mlp.out.b": (width,),
    }


def linear(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    return x @ w + b


def layer_norm(x: Tensor, gamma: Tensor, beta: Tensor) -> Tensor:
    return ag.layer_norm_core(x) * gamma + beta


def _dropout(x: Tensor, p: float, rng: np.random.Generator | None) -> Tensor:
    if p <= 0.0 or rng is None:
        return x
    keep = (rng.random(x.shape) >= p).astype(x.data.dtype) / (1.0 - p)
    return x * Tensor(keep)


def attention(x: Tensor, p: dict[str, Tensor], prefix: str, n_heads: int) -> Tensor:
    b, tokens, width = x.shape
    dh = width // n_heads

    def project(name: str) -> Tensor:
        h = linear(x, p[f"{prefix}.attn.{name}.w"], p[f"{prefix}.attn.{name}.b"])
        return h.reshape((b, tokens, n_heads, dh)).transpose((0, 2, 1, 3))

    q, k, v = project("q"), project("k"), project("v")
    scores = (q @ k.transpose((0, 1, 3, 2))) * (1.0 / np.sqrt(dh))
    weights = ag.softmax(scores, axis=-1)
    mixed = (weights @ v).transpose((0, 2, 1, 3)).reshape((b, tokens, width))
    return linear(mixed, p[f"{prefix}.attn.o.w"], p[f"{prefix}.attn.o.b"])


def transformer_block(
    x: Tensor,
    p: dict[str, Tensor],
    prefix: str,
    n_heads: int,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> Tensor:
    h = layer_norm(x, p[f"{prefix}.ln1.g"], p[f"{prefix}.ln1.b"])
    x = x + _dropout(attention(h, p, prefix, n_heads), dropout, rng)
    h = layer_norm(x, p[f"{prefix}.ln2.g"], p[f"{prefix}.ln2.b"])
    h = linear(h, p[f"{prefix}.mlp.fc.w"], p[f"{prefix}.mlp.fc.b"])
    h = ag.gelu(h)
    h = linear(h, p[f"{prefix}.mlp.out.w"], p[f"{prefix}.mlp.out.b"])
    return x + _dropout(h, dropout, rng)
