"""PNG reading/writing for scans (8-bit, deterministic bytes)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DataError


def save_png(pixels: np.ndarray, path: str | Path) -> None:
    """Write an HxW[xC] float array in [0,1] as an 8-bit PNG."""
    arr = np.asarray(pixels)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    data = np.clip(np.round(arr * 255.0), 0, 255).astype(np.uint8)
    mode = "L" if data.ndim == 2 else "RGB"
    Image.fromarray(data, mode=mode).save(path, format="PNG")


def load_png(path: str | Path) -> np.ndarray:
    """Read a PNG as HxWxC float32 in [0,1] (grayscale stays single-channel)."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"image not found: {p}")
    img = Image.open(p)
    if img.mode not in ("L", "RGB"):
        img = img.convert("RGB" if img.mode in ("RGBA", "P", "CMYK") else "L")
    arr = np.asarray(img, dtype=np.float32) / 255.0
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr
