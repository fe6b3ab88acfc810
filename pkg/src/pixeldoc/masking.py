"""Patch lattice, 2D rectangular span masks, and pixel-to-patch quantization.

Masks are sampled by unioning random rectangles of 2-6 x 2-4 patches until a
target fraction of the grid is covered, then optionally trimmed to the exact
rounded patch count so loss denominators are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PATCH_SIZE = 16

Box = tuple[float, float, float, float]  # x0, y0, x1, y1 in pixels


@dataclass(frozen=True)
class PatchGrid:
    rows: int
    cols: int
    patch_size: int = PATCH_SIZE

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0 or self.patch_size <= 0:
            raise ValueError(f"bad grid: {self}")

    @classmethod
    def for_image(cls, height: int, width: int, patch_size: int = PATCH_SIZE) -> "PatchGrid":
        if height % patch_size or width % patch_size:
            raise ValueError(f"image {height}x{width} not a multiple of patch size {patch_size}")
        return cls(height // patch_size, width // patch_size, patch_size)

    @property
    def n_patches(self) -> int:
        return self.rows * self.cols

    @property
    def image_height(self) -> int:
        return self.rows * self.patch_size

    @property
    def image_width(self) -> int:
        return self.cols * self.patch_size


@dataclass
class PatchMask:
    grid: PatchGrid
    bits: np.ndarray = field(default=None)  # bool, rows x cols

    def __post_init__(self):
        if self.bits is None:
            self.bits = np.zeros((self.grid.rows, self.grid.cols), dtype=bool)
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.grid.rows, self.grid.cols):
            raise ValueError(f"bits shape {self.bits.shape} != grid {self.grid.rows}x{self.grid.cols}")

    def count(self) -> int:
        return int(self.bits.sum())

    def copy(self) -> "PatchMask":
        return PatchMask(self.grid, self.bits.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PatchMask)
            and self.grid == other.grid
            and bool(np.array_equal(self.bits, other.bits))
        )


def sample_span_mask(
    grid: PatchGrid,
    ratio: float,
    rng: np.random.Generator,
    w_range: tuple[int, int] = (2, 6),
    h_range: tuple[int, int] = (2, 4),
    trim: bool = True,
) -> PatchMask:
    """Union random rectangles until coverage reaches ``ratio`` of the grid.

    Rectangle widths/heights are sampled uniformly from the inclusive ranges
    (clamped to the grid) and placed at uniform in-bounds positions.
    ``trim=True`` then unmasks randomly chosen patches so the final count is
    exactly ``round(ratio * n_patches)``.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0,1), got {ratio}")
    w_lo, w_hi = max(1, w_range[0]), min(grid.cols, w_range[1])
    h_lo, h_hi = max(1, h_range[0]), min(grid.rows, h_range[1])
    if w_lo > w_hi or h_lo > h_hi:
        raise ValueError(f"mask rectangle ranges {w_range}x{h_range} exceed grid {grid}")

    target = ratio * grid.n_patches
    bits = np.zeros((grid.rows, grid.cols), dtype=bool)
    covered = 0
    while covered < target:
        w = int(rng.integers(w_lo, w_hi + 1))
        h = int(rng.integers(h_lo, h_hi + 1))
        r0 = int(rng.integers(0, grid.rows - h + 1))
        c0 = int(rng.integers(0, grid.cols - w + 1))
        bits[r0 : r0 + h, c0 : c0 + w] = True
        covered = int(bits.sum())

    if trim:
        exact = round(target)
        excess = covered - exact
        if excess > 0:
            on = np.flatnonzero(bits.ravel())
            drop = rng.choice(on, size=excess, replace=False)
            flat = bits.ravel()
            flat[drop] = False
            bits = flat.reshape(grid.rows, grid.cols)
    return PatchMask(grid, bits)


def boxes_to_mask(boxes: list[Box], grid: PatchGrid) -> PatchMask:
    """Set patch (r, c) iff its pixel area intersects any positive-area box."""
    bits = np.zeros((grid.rows, grid.cols), dtype=bool)
    p = grid.patch_size
    for x0, y0, x1, y1 in boxes:
        if x1 <= x0 or y1 <= y0:
            continue
        c0 = max(0, int(np.floor(x0 / p)))
        r0 = max(0, int(np.floor(y0 / p)))
        # boxes are half-open: a box ending exactly on a patch boundary
        # does not touch the next patch
        c1 = min(grid.cols, int(np.ceil(x1 / p)))
        r1 = min(grid.rows, int(np.ceil(y1 / p)))
        if c1 > c0 and r1 > r0:
            bits[r0:r1, c0:c1] = True
    return PatchMask(grid, bits)


def mask_to_rle(mask: PatchMask) -> str:
    """Run-length encode row-major bits as 'zeros,ones,zeros,...' counts."""
    flat = mask.bits.ravel()
    runs: list[int] = []
    current, length = False, 0
    for bit in flat:
        if bit == current:
            length += 1
        else:
            runs.append(length)
            current, length = bit, 1
    runs.append(length)
    return ",".join(str(r) for r in runs)


def rle_to_mask(rle: str, grid: PatchGrid) -> PatchMask:
    runs = [int(r) for r in rle.split(",")] if rle else []
    flat = np.zeros(grid.n_patches, dtype=bool)
    pos, value = 0, False
    for run in runs:
        flat[pos : pos + run] = value
        pos += run
        value = not value
    if pos != grid.n_patches:
        raise ValueError(f"RLE covers {pos} patches, grid has {grid.n_patches}")
    return PatchMask(grid, flat.reshape(grid.rows, grid.cols))
