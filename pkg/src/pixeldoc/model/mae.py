"""Masked-autoencoder transformer with replaceable task heads.

The encoder sees only unmasked patch tokens (plus fixed 2D sinusoidal
positions); the decoder re-inserts a learned mask token at masked positions
and predicts pixels for every patch. The reconstruction loss is mean squared
error over masked patches only, against per-patch normalized targets when
``norm_pix`` is on. Task heads mean-pool the final encoder layer (no CLS
token anywhere).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import AllMasked, HeadMissing, ShapeMismatch
from ..masking import PatchGrid, PatchMask
from . import autograd as ag
from .autograd import Tensor
from .layers import block_param_shapes, init_linear, layer_norm, sincos_position_table, transformer_block

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelConfig:
    patch_size: int = 16
    image_hw: int = 64
    channels: int = 1
    enc_layers: int = 2
    dec_layers: int = 1
    width: int = 64
    heads: int = 4
    mlp_ratio: float = 4.0
    norm_pix: bool = True
    dropout: float = 0.0

    def __post_init__(self):
        if self.width % self.heads:
            raise ValueError(f"width {self.width} not divisible by heads {self.heads}")
        if self.image_hw % self.patch_size:
            raise ValueError(f"image size {self.image_hw} not divisible by patch {self.patch_size}")

    @property
    def grid(self) -> PatchGrid:
        side = self.image_hw // self.patch_size
        return PatchGrid(side, side, self.patch_size)

    @property
    def n_patches(self) -> int:
        return self.grid.n_patches

    @property
    def patch_dim(self) -> int:
        return self.patch_size * self.patch_size * self.channels

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)


@dataclass
class ModelParams:
    config: ModelConfig
    tensors: dict[str, Tensor]
    pos_table: np.ndarray  # (P, width), fixed, not learned

    @property
    def dtype(self):
        return self.tensors["patch_embed.w"].dtype

    def named(self) -> list[tuple[str, Tensor]]:
        return sorted(self.tensors.items())

    def has_head(self, kind: str) -> bool:
        return f"head.{kind}.w" in self.tensors

    def astype(self, dtype) -> "ModelParams":
        tensors = {k: Tensor(v.data.astype(dtype), name=k) for k, v in self.tensors.items()}
        return ModelParams(self.config, tensors, self.pos_table.astype(dtype))


def init_params(cfg: ModelConfig, rng: np.random.Generator, dtype=np.float32) -> ModelParams:
    tensors: dict[str, Tensor] = {}

    def put(name: str, value: np.ndarray) -> None:
        tensors[name] = Tensor(value.astype(dtype), name=name)

    w, b = init_linear(rng, cfg.patch_dim, cfg.width, dtype)
    put("patch_embed.w", w)
    put("patch_embed.b", b)
    put("mask_token", rng.normal(0.0, 0.02, size=(1, 1, cfg.width)))

    hidden_shapes = block_param_shapes(cfg.width, cfg.mlp_ratio)
    for stack, layers in (("enc", cfg.enc_layers), ("dec", cfg.dec_layers)):
        for i in range(layers):
            for suffix, shape in hidden_shapes.items():
                name = f"{stack}.{i}.{suffix}"
                if suffix.endswith(".g"):
                    put(name, np.ones(shape))
                elif suffix.endswith((".b",)) and "ln" in suffix:
                    put(name, np.zeros(shape))
                elif suffix.endswith(".w"):
                    put(name, rng.normal(0.0, 0.02, size=shape))
                else:
                    put(name, np.zeros(shape))
        put(f"{stack}.ln.g", np.ones(cfg.width))
        put(f"{stack}.ln.b", np.zeros(cfg.width))

    w, b = init_linear(rng, cfg.width, cfg.patch_dim, dtype)
    put("dec.pred.w", w)
    put("dec.pred.b", b)

    pos = sincos_position_table(cfg.grid.rows, cfg.grid.cols, cfg.width).astype(dtype)
    return ModelParams(cfg, tensors, pos)


def add_sequence_head(params: ModelParams, classes: int, rng: np.random.Generator) -> None:
    """Attach a K-way classification (K>=2) or regression (K=1) head."""
    dtype = params.dtype
    w, b = init_linear(rng, params.config.width, classes, dtype)
    params.tensors["head.seq.w"] = Tensor(w, name="head.seq.w")
    params.tensors["head.seq.b"] = Tensor(b, name="head.seq.b")


def add_patch_head(params: ModelParams, rng: np.random.Generator) -> None:
    """Attach a per-patch binary classification head."""
    dtype = params.dtype
    w, b = init_linear(rng, params.config.width, 1, dtype)
    params.tensors["head.patch.w"] = Tensor(w, name="head.patch.w")
    params.tensors["head.patch.b"] = Tensor(b, name="head.patch.b")


def parameter_count(cfg: ModelConfig, seq_classes: int | None = None, patch_head: bool = False) -> int:
    """Closed-form learned-parameter count for a config."""
    w, d, r = cfg.width, cfg.patch_dim, cfg.mlp_ratio
    hidden = int(w * r)
    block = 2 * w + 4 * (w * w + w) + 2 * w + (w * hidden + hidden) + (hidden * w + w)
    total = (d * w + w) + w  # patch embed + mask token
    total += (cfg.enc_layers + cfg.dec_layers) * block
    total += 2 * 2 * w  # enc.ln + dec.ln
    total += w * d + d  # decoder prediction
    if seq_classes:
        total += w * seq_classes + seq_classes
    if patch_head:
        total += w + 1
    return total


# -- pixel/patch reshaping -----------------------------------------------------


def patchify(pixels: np.ndarray, grid: PatchGrid) -> np.ndarray:
    """(B,)H,W,C -> (B,)P,patch_dim in row-major patch order."""
    single = pixels.ndim == 3
    arr = pixels[None] if single else pixels
    b, h, w, c = arr.shape
    if h != grid.image_height or w != grid.image_width:
        raise ShapeMismatch(f"image {h}x{w} does not match grid {grid}")
    p = grid.patch_size
    arr = arr.reshape(b, grid.rows, p, grid.cols, p, c)
    arr = arr.transpose(0, 1, 3, 2, 4, 5).reshape(b, grid.n_patches, p * p * c)
    return arr[0] if single else arr


def unpatchify(patches: np.ndarray, grid: PatchGrid, channels: int = 1) -> np.ndarray:
    """(B,)P,patch_dim -> (B,)H,W,C inverse of patchify."""
    single = patches.ndim == 2
    arr = patches[None] if single else patches
    b = arr.shape[0]
    p = grid.patch_size
    arr = arr.reshape(b, grid.rows, grid.cols, p, p, channels)
    arr = arr.transpose(0, 1, 3, 2, 4, 5).reshape(b, grid.image_height, grid.image_width, channels)
    return arr[0] if single else arr


def _as_batch(pixels: np.ndarray, cfg: ModelConfig, dtype) -> np.ndarray:
    arr = pixels[None] if pixels.ndim == 3 else pixels
    if arr.shape[1:] != (cfg.image_hw, cfg.image_hw, cfg.channels):
        raise ShapeMismatch(
            f"scan batch {arr.shape} does not match config image {cfg.image_hw}, C={cfg.channels}"
        )
    return arr.astype(dtype, copy=False)


def _encode_tokens(
    params: ModelParams,
    tokens: Tensor,
    stack: str,
    layers: int,
    rng: np.random.Generator | None,
) -> Tensor:
    cfg = params.config
    x = tokens
    for i in range(layers):
        x = transformer_block(x, params.tensors, f"{stack}.{i}", cfg.heads, cfg.dropout, rng)
    return layer_norm(x, params.tensors[f"{stack}.ln.g"], params.tensors[f"{stack}.ln.b"])


def _embed_patches(params: ModelParams, patches: np.ndarray) -> Tensor:
    tokens = Tensor(patches) @ params.tensors["patch_embed.w"] + params.tensors["patch_embed.b"]
    return tokens + Tensor(params.pos_table[None])


def encode(
    params: ModelParams, pixels: np.ndarray, rng: np.random.Generator | None = None
) -> Tensor:
    """Final-layer embeddings for every patch, no masking: (B, P, width)."""
    cfg = params.config
    batch = _as_batch(pixels, cfg, params.dtype)
    patches = patchify(batch, cfg.grid)
    tokens = _embed_patches(params, patches)
    return _encode_tokens(params, tokens, "enc", cfg.enc_layers, rng)


def normalize_targets(patches: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    mu = patches.mean(axis=-1, keepdims=True)
    var = patches.var(axis=-1, keepdims=True)
    return (patches - mu) / np.sqrt(var + eps)


def forward_mae(
    params: ModelParams,
    pixels: np.ndarray,
    masks: np.ndarray,
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, Tensor]:
    """Masked reconstruction pass.

    ``masks`` is (B, rows, cols) or (rows, cols) boolean, True = occluded.
    Returns (scalar loss, per-patch predictions (B, P, patch_dim)). Batched
    calls need the same visible count per sample (exact-count trimmed masks
    satisfy this).
    """
    cfg = params.config
    batch = _as_batch(pixels, cfg, params.dtype)
    mask_bits = masks[None] if masks.ndim == 2 else masks
    b = batch.shape[0]
    if mask_bits.shape != (b, cfg.grid.rows, cfg.grid.cols):
        raise ShapeMismatch(f"mask batch {mask_bits.shape} does not match grid {cfg.grid}")
    flat_mask = mask_bits.reshape(b, -1).astype(bool)

    n_vis = cfg.n_patches - flat_mask.sum(axis=1)
    if (n_vis == 0).any():
        raise AllMasked("every patch is masked; the encoder has no input")
    if len(set(n_vis.tolist())) != 1:
        raise ShapeMismatch("batched masks must share one visible count (use trimmed masks)")

    patches = patchify(batch, cfg.grid)
    tokens = _embed_patches(params, patches)

    vis_idx = np.stack([np.flatnonzero(~m) for m in flat_mask])
    visible = ag.gather_rows(tokens, vis_idx)
    enc_out = _encode_tokens(params, visible, "enc", cfg.enc_layers, rng)

    mask_tile = ag.broadcast_to(params.tensors["mask_token"], (b, cfg.n_patches, cfg.width))
    full = ag.scatter_rows(mask_tile, vis_idx, enc_out)
    full = full + Tensor(params.pos_table[None])
    dec_out = _encode_tokens(params, full, "dec", cfg.dec_layers, rng)
    pred = dec_out @ params.tensors["dec.pred.w"] + params.tensors["dec.pred.b"]

    n_masked = int(flat_mask.sum())
    if n_masked == 0:
        warnings.warn("mask is empty; reconstruction loss defined as 0")
        return Tensor(np.zeros((), dtype=params.dtype)), pred

    targets = normalize_targets(patches) if cfg.norm_pix else patches
    masked_idx = np.stack([np.flatnonzero(m) for m in flat_mask]) if b > 1 else \
        np.flatnonzero(flat_mask[0])[None]
    pred_masked = ag.gather_rows(pred, masked_idx)
    target_masked = np.take_along_axis(
        targets, masked_idx[..., None].repeat(targets.shape[-1], axis=-1), axis=-2
    )
    diff = pred_masked - Tensor(target_masked.astype(params.dtype))
    loss = ag.square(diff).mean()
    return loss, pred


def reconstruct_pixels(
    params: ModelParams, pixels: np.ndarray, mask: PatchMask
) -> np.ndarray:
    """Decoder output as an image; masked patches come from the prediction,
    visible ones from the input. Normalized predictions are un-normalized
    with the true patch statistics (visualization aid only)."""
    cfg = params.config
    _, pred = forward_mae(params, pixels, mask.bits)
    pred_np = pred.data[0]
    patches = patchify(_as_batch(pixels, cfg, params.dtype), cfg.grid)[0]
    if cfg.norm_pix:
        mu = patches.mean(axis=-1, keepdims=True)
        sd = np.sqrt(patches.var(axis=-1, keepdims=True) + 1e-6)
        pred_np = pred_np * sd + mu
    out = patches.copy()
    flat = mask.bits.reshape(-1)
    out[flat] = pred_np[flat]
    img = unpatchify(out, cfg.grid, cfg.channels)
    return np.clip(img, 0.0, 1.0)


def _pooled(params: ModelParams, pixels: np.ndarray, rng=None) -> Tensor:
    return encode(params, pixels, rng).mean(axis=-2)


def head_sequence(
    params: ModelParams, pixels: np.ndarray, rng: np.random.Generator | None = None
) -> Tensor:
    """Mean-pooled final-layer embeddings -> K logits (or 1 regression value)."""
    if not params.has_head("seq"):
        raise HeadMissing("sequence head not attached")
    pooled = _pooled(params, pixels, rng)
    return pooled @ params.tensors["head.seq.w"] + params.tensors["head.seq.b"]


def patch_logits(
    params: ModelParams, pixels: np.ndarray, rng: np.random.Generator | None = None
) -> Tensor:
    if not params.has_head("patch"):
        raise HeadMissing("patch head not attached")
    enc_out = encode(params, pixels, rng)
    logits = enc_out @ params.tensors["head.patch.w"] + params.tensors["head.patch.b"]
    return logits.reshape((enc_out.shape[0], params.config.n_patches))


def head_patch(
    params: ModelParams, pixels: np.ndarray, rng: np.random.Generator | None = None
) -> Tensor:
    """Per-patch answer probabilities, shape (B, P)."""
    return ag.sigmoid(patch_logits(params, pixels, rng))


def loss_sequence(params: ModelParams, pixels: np.ndarray, labels: np.ndarray, rng=None) -> Tensor:
    logits = head_sequence(params, pixels, rng)
    if logits.shape[-1] == 1:
        return ag.square(logits.reshape((-1,)) - Tensor(labels.astype(params.dtype))).mean()
    return ag.cross_entropy(logits, labels.astype(np.int64))


def loss_patch(params: ModelParams, pixels: np.ndarray, target_masks: np.ndarray, rng=None) -> Tensor:
    """Mean binary cross-entropy over all patches of the batch."""
    logits = patch_logits(params, pixels, rng)
    targets = target_masks.reshape(logits.shape[0], -1).astype(params.dtype)
    return ag.bce_with_logits(logits, targets).mean()
