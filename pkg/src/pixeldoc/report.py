"""Figure rendering for the CLI report paths.

All figures go straight to files through the Agg backend: mask previews,
original/masked/reconstruction triptychs, per-patch probability heatmaps,
and training loss curves read from metrics JSONL.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .masking import PatchMask

_SAVE_KW = {"dpi": 120, "bbox_inches": "tight", "metadata": {"Software": None}}


def _gray(pixels: np.ndarray) -> np.ndarray:
    arr = np.asarray(pixels)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    return arr


def masked_pixels(pixels: np.ndarray, mask: PatchMask, fill: float = 0.35) -> np.ndarray:
    """Input with occluded patches flattened to a gray fill."""
    out = _gray(pixels).copy()
    p = mask.grid.patch_size
    for r, c in zip(*np.nonzero(mask.bits)):
        out[r * p : (r + 1) * p, c * p : (c + 1) * p] = fill
    return out


def _show(ax, img: np.ndarray, title: str) -> None:
    ax.imshow(_gray(img), cmap="gray", vmin=0.0, vmax=1.0, interpolation="nearest")
    ax.set_title(title, fontsize=9)
    ax.set_xticks([])
    ax.set_yticks([])


def save_mask_preview(pixels: np.ndarray, mask: PatchMask, path: str | Path) -> None:
    """Scan with the sampled occlusion mask overlaid in red plus grid lines."""
    img = _gray(pixels)
    h, w = img.shape
    p = mask.grid.patch_size
    fig, ax = plt.subplots(figsize=(4, 4))
    _show(ax, img, f"occlusion {mask.count()}/{mask.grid.n_patches} patches")
    overlay = np.zeros((h, w, 4))
    for r, c in zip(*np.nonzero(mask.bits)):
        overlay[r * p : (r + 1) * p, c * p : (c + 1) * p] = (0.85, 0.1, 0.1, 0.45)
    ax.imshow(overlay, interpolation="nearest")
    for k in range(0, w + 1, p):
        ax.axvline(k - 0.5, color="0.6", lw=0.3)
    for k in range(0, h + 1, p):
        ax.axhline(k - 0.5, color="0.6", lw=0.3)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_recon_triptych(
    original: np.ndarray, mask: PatchMask, reconstruction: np.ndarray, path: str | Path
) -> None:
    """Original, masked input, and model reconstruction side by side."""
    fig, axes = plt.subplots(1, 3, figsize=(9, 3.2))
    _show(axes[0], original, "input")
    _show(axes[1], masked_pixels(original, mask), "masked")
    _show(axes[2], reconstruction, "reconstruction")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_patch_heatmap(pixels: np.ndarray, probs: np.ndarray, path: str | Path) -> None:
    """Per-patch probabilities rendered over the scan (saliency-style)."""
    img = _gray(pixels)
    rows, cols = probs.shape
    fig, axes = plt.subplots(1, 2, figsize=(7, 3.4))
    _show(axes[0], img, "scan")
    axes[1].imshow(img, cmap="gray", vmin=0, vmax=1, interpolation="nearest")
    up = np.kron(probs, np.ones((img.shape[0] // rows, img.shape[1] // cols)))
    hm = axes[1].imshow(up, cmap="inferno", alpha=0.55, vmin=0.0, vmax=1.0, interpolation="nearest")
    axes[1].set_title("patch probabilities", fontsize=9)
    axes[1].set_xticks([])
    axes[1].set_yticks([])
    fig.colorbar(hm, ax=axes[1], fraction=0.046)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_loss_curve(metrics_path: str | Path, path: str | Path) -> None:
    """Loss and learning-rate curves from a {step, lr, loss} JSONL stream."""
    steps, losses, lrs = [], [], []
    with open(metrics_path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                d = json.loads(line)
                steps.append(d["step"])
                losses.append(d["loss"])
                lrs.append(d["lr"])
    fig, ax = plt.subplots(figsize=(6, 3.2))
    if steps:
        ax.plot(steps, losses, lw=0.8, color="tab:blue", label="loss")
        ax.set_yscale("log")
        twin = ax.twinx()
        twin.plot(steps, lrs, lw=0.8, color="tab:orange", label="lr")
        twin.set_ylabel("lr", fontsize=8)
    ax.set_xlabel("step", fontsize=8)
    ax.set_ylabel("loss", fontsize=8)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
