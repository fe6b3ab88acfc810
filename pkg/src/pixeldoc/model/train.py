"""Training loops: masked-autoencoder pretraining and head finetuning.

Loops are single-threaded and fully deterministic: batches, masks, and
dropout all come from generators derived from one root seed. Metrics stream
to JSONL as {step, lr, loss} lines.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import NonFiniteLoss, UsageError
from ..masking import sample_span_mask
from ..rng import derive_rng
from .autograd import Tensor
from .mae import ModelParams, forward_mae, loss_patch, loss_sequence
from .optim import OptimState, adamw_update

log = logging.getLogger(__name__)

OBJECTIVES = ("mae", "seq_head", "patch_head")


@dataclass
class Batch:
    pixels: np.ndarray  # (B, H, W, C)
    masks: np.ndarray | None = None  # (B, rows, cols) occlusion (mae)
    labels: np.ndarray | None = None  # (B,) int labels (seq_head)
    targets: np.ndarray | None = None  # (B, rows, cols) label masks (patch_head)
    batch_id: str = ""


def collect_grads(loss: Tensor, params: ModelParams) -> dict[str, np.ndarray]:
    """Run the tape backward and gather per-parameter gradients."""
    for _, tensor in params.named():
        tensor.grad = None
    loss.backward()
    return {name: tensor.grad for name, tensor in params.named() if tensor.grad is not None}


def train_step(
    params: ModelParams,
    optim: OptimState,
    batch: Batch,
    objective: str,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """One forward/backward/update. Returns (loss, lr used).

    A non-finite loss aborts before any parameter is touched.
    """
    if objective == "mae":
        loss, _ = forward_mae(params, batch.pixels, batch.masks, rng)
    elif objective == "seq_head":
        loss = loss_sequence(params, batch.pixels, batch.labels, rng)
    elif objective == "patch_head":
        loss = loss_patch(params, batch.pixels, batch.targets, rng)
    else:
        raise UsageError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    value = float(loss.data)
    if not np.isfinite(value):
        raise NonFiniteLoss(f"non-finite loss at batch {batch.batch_id!r}: {value}")
    grads = collect_grads(loss, params)
    lr = adamw_update(params, grads, optim)
    return value, lr


class MetricsWriter:
    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._fh = open(self.path, "w", encoding="utf-8") if self.path else None

    def write(self, step: int, lr: float, loss: float) -> None:
        if self._fh:
            self._fh.write(json.dumps({"step": step, "lr": lr, "loss": loss}) + "\n")

    def close(self) -> None:
        if self._fh:
            self._fh.close()


def _batch_indices(rng: np.random.Generator, n: int, batch_size: int) -> np.ndarray:
    return rng.integers(0, n, size=min(batch_size, n))


def run_pretrain(
    params: ModelParams,
    scans: np.ndarray,
    steps: int,
    batch_size: int,
    optim: OptimState,
    seed: int,
    mask_ratio: float = 0.28,
    w_range: tuple[int, int] = (2, 6),
    h_range: tuple[int, int] = (2, 4),
    metrics_path: str | Path | None = None,
    log_every: int = 100,
) -> list[float]:
    """MAE pretraining over a fixed scan array (N, H, W, C)."""
    grid = params.config.grid
    batch_rng = derive_rng(seed, "pretrain", "batch")
    mask_rng = derive_rng(seed, "pretrain", "mask")
    drop_rng = derive_rng(seed, "pretrain", "dropout") if params.config.dropout > 0 else None
    writer = MetricsWriter(metrics_path)
    losses: list[float] = []
    try:
        for step in range(steps):
            idx = _batch_indices(batch_rng, len(scans), batch_size)
            masks = np.stack(
                [
                    sample_span_mask(grid, mask_ratio, mask_rng, w_range, h_range, trim=True).bits
                    for _ in idx
                ]
            )
            batch = Batch(pixels=scans[idx], masks=masks, batch_id=f"pretrain/{step}")
            loss, lr = train_step(params, optim, batch, "mae", drop_rng)
            losses.append(loss)
            writer.write(step, lr, loss)
            if log_every and step % log_every == 0:
                log.info("pretrain step %d lr %.3g loss %.5f", step, lr, loss)
    finally:
        writer.close()
    return losses


def run_finetune(
    params: ModelParams,
    pixels: np.ndarray,
    objective: str,
    labels: np.ndarray,
    steps: int,
    batch_size: int,
    optim: OptimState,
    seed: int,
    metrics_path: str | Path | None = None,
    log_every: int = 100,
) -> list[float]:
    """Head finetuning; ``labels`` is (N,) ints for seq_head or (N, rows,
    cols) masks for patch_head."""
    if objective not in ("seq_head", "patch_head"):
        raise UsageError(f"finetune objective must be seq_head or patch_head, got {objective!r}")
    batch_rng = derive_rng(seed, "finetune", objective, "batch")
    drop_rng = derive_rng(seed, "finetune", objective, "dropout") if params.config.dropout > 0 else None
    writer = MetricsWriter(metrics_path)
    losses: list[float] = []
    try:
        for step in range(steps):
            idx = _batch_indices(batch_rng, len(pixels), batch_size)
            batch = Batch(
                pixels=pixels[idx],
                labels=labels[idx] if objective == "seq_head" else None,
                targets=labels[idx] if objective == "patch_head" else None,
                batch_id=f"{objective}/{step}",
            )
            loss, lr = train_step(params, optim, batch, objective, drop_rng)
            losses.append(loss)
            writer.write(step, lr, loss)
            if log_every and step % log_every == 0:
                log.info("%s step %d lr %.3g loss %.5f", objective, step, lr, loss)
    finally:
        writer.close()
    return losses


def predict_in_batches(fn, pixels: np.ndarray, batch_size: int = 64) -> np.ndarray:
    """Apply a model function over (N, ...) pixels in chunks, concatenating
    the numpy outputs."""
    outs = [fn(pixels[i : i + batch_size]).data for i in range(0, len(pixels), batch_size)]
    return np.concatenate(outs, axis=0)
