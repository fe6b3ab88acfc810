"""Tiny masked-autoencoder vision transformer with explicit forward/backward
passes, AdamW training, and replaceable task heads."""

from .autograd import Tensor
from .checkpoint import checkpoint_fingerprint, load_checkpoint, save_checkpoint
from .mae import (
    ModelConfig,
    ModelParams,
    add_patch_head,
    add_sequence_head,
    encode,
    forward_mae,
    head_patch,
    head_sequence,
    init_params,
    parameter_count,
    patchify,
    reconstruct_pixels,
    unpatchify,
)
from .optim import LrSchedule, OptimState, adamw_update
from .train import Batch, collect_grads, predict_in_batches, run_finetune, run_pretrain, train_step

__all__ = [
    "Tensor",
    "ModelConfig",
    "ModelParams",
    "LrSchedule",
    "OptimState",
    "Batch",
    "init_params",
    "add_sequence_head",
    "add_patch_head",
    "parameter_count",
    "patchify",
    "unpatchify",
    "forward_mae",
    "head_sequence",
    "head_patch",
    "encode",
    "reconstruct_pixels",
    "train_step",
    "collect_grads",
    "run_pretrain",
    "run_finetune",
    "predict_in_batches",
    "adamw_update",
    "save_checkpoint",
    "load_checkpoint",
    "checkpoint_fingerprint",
]
