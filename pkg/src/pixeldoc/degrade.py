"""Historical-degradation pipeline with geometry-aware mask transport.

Every effect draws its parameters from the supplied rng and records them in
an AppliedTransform; applying a recorded transform to the original scan
reproduces the degraded scan exactly (salt-and-pepper keeps a child seed for
its pixel positions). Rotation is the only effect that moves geometry, so it
is the only one mask transport has to undo onto the patch lattice.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

import cv2
import numpy as np

from .errors import MissingTruth
from .masking import Box, PatchMask, boxes_to_mask
from .render import RenderPlan, Scan, ScanMeta


@dataclass
class DegradationConfig:
    """Per-effect enable flags and sampling ranges (inclusive lo/hi)."""

    enable_bleed: bool = True
    bleed_alpha: tuple[float, float] = (0.1, 0.3)
    enable_bg_jitter: bool = True
    bg_jitter: tuple[float, float] = (235 / 255, 1.0)
    enable_lines: bool = True
    line_count: tuple[int, int] = (0, 3)
    enable_stains: bool = True
    stain_count: tuple[int, int] = (0, 2)
    enable_holes: bool = True
    hole_count: tuple[int, int] = (0, 2)
    enable_salt_pepper: bool = True
    sp_density: tuple[float, float] = (0.0, 0.05)
    enable_blur: bool = True
    blur_sigma: tuple[float, float] = (0.2, 1.5)
    enable_rotation: bool = True
    rotation_deg: tuple[float, float] = (-3.0, 3.0)

    def __post_init__(self):
        for f in fields(self):
            if isinstance(getattr(self, f.name), list):
                setattr(self, f.name, tuple(getattr(self, f.name)))
            value = getattr(self, f.name)
            if isinstance(value, tuple) and value[0] > value[1]:
                raise ValueError(f"{f.name}: range must be ordered low <= high, got {value}")

    @classmethod
    def disabled(cls) -> "DegradationConfig":
        off = {f.name: False for f in fields(cls) if f.name.startswith("enable_")}
        return cls(**off)

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> "DegradationConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown degradation config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class AppliedTransform:
    """Drawn parameters of one degradation pass, sufficient for replay."""

    rotation_deg: float = 0.0
    bleed_alpha: float | None = None
    bg_level: float | None = None
    lines: list[tuple[str, int, int, float]] | None = None  # orient, pos, thickness, intensity
    stains: list[tuple[float, float, float, float]] | None = None  # cx, cy, radius, strength
    holes: list[tuple[float, float, float, float]] | None = None  # cx, cy, rx, ry
    sp_density: float | None = None
    sp_seed: int | None = None
    blur_sigma: float | None = None

    def is_empty(self) -> bool:
        return self.rotation_deg == 0.0 and all(
            getattr(self, f.name) is None for f in fields(self) if f.name != "rotation_deg"
        )

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None or (f.name == "rotation_deg" and v == 0.0):
                continue
            out[f.name] = [list(e) for e in v] if isinstance(v, list) else v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "AppliedTransform":
        kwargs = dict(d)
        for key in ("lines", "stains", "holes"):
            if kwargs.get(key) is not None:
                kwargs[key] = [tuple(e) for e in kwargs[key]]
        return cls(**kwargs)


def _uniform(rng: np.random.Generator, rang: tuple[float, float]) -> float:
    return float(rng.uniform(rang[0], rang[1]))


def _count(rng: np.random.Generator, rang: tuple[int, int]) -> int:
    return int(rng.integers(rang[0], rang[1] + 1))


def sample_transform(
    shape: tuple[int, int], cfg: DegradationConfig, rng: np.random.Generator
) -> AppliedTransform:
    """Draw one set of degradation parameters for an HxW scan."""
    h, w = shape
    t = AppliedTransform()
    if cfg.enable_bleed:
        t.bleed_alpha = _uniform(rng, cfg.bleed_alpha)
    if cfg.enable_bg_jitter:
        t.bg_level = _uniform(rng, cfg.bg_jitter)
    if cfg.enable_lines:
        t.lines = []
        for _ in range(_count(rng, cfg.line_count)):
            orient = "h" if rng.random() < 0.5 else "v"
            extent = h if orient == "h" else w
            pos = int(rng.integers(0, extent))
            thickness = int(rng.integers(1, 3))
            intensity = float(rng.uniform(0.0, 0.35))
            t.lines.append((orient, pos, thickness, intensity))
    if cfg.enable_stains:
        t.stains = []
        for _ in range(_count(rng, cfg.stain_count)):
            cx = float(rng.uniform(0, w))
            cy = float(rng.uniform(0, h))
            radius = float(rng.uniform(0.10, 0.30) * min(h, w))
            strength = float(rng.uniform(0.10, 0.40))
            t.stains.append((cx, cy, radius, strength))
    if cfg.enable_holes:
        t.holes = []
        for _ in range(_count(rng, cfg.hole_count)):
            cx = float(rng.uniform(0, w))
            cy = float(rng.uniform(0, h))
            rx = float(rng.uniform(0.03, 0.12) * w)
            ry = float(rng.uniform(0.03, 0.12) * h)
            t.holes.append((cx, cy, rx, ry))
    if cfg.enable_salt_pepper:
        t.sp_density = _uniform(rng, cfg.sp_density)
        t.sp_seed = int(rng.integers(0, 2**31 - 1))
    if cfg.enable_blur:
        t.blur_sigma = _uniform(rng, cfg.blur_sigma)
    if cfg.enable_rotation:
        t.rotation_deg = _uniform(rng, cfg.rotation_deg)
    return t


def rotation_matrix(angle_deg: float, shape: tuple[int, int]) -> np.ndarray:
    """The 2x3 affine (about the image centre) used for both pixels and boxes."""
    h, w = shape
    return cv2.getRotationMatrix2D(((w - 1) / 2.0, (h - 1) / 2.0), angle_deg, 1.0)


def apply_transform(scan: Scan, t: AppliedTransform) -> Scan:
    """Replay a recorded transform on a scan; the input is left untouched."""
    img = scan.pixels[:, :, 0].copy() if scan.pixels.shape[2] == 1 else scan.pixels.copy()
    h, w = img.shape[:2]
    bg = t.bg_level if t.bg_level is not None else 1.0

    if t.bleed_alpha is not None:
        mirrored = img[:, ::-1].copy()
        img = np.clip((1.0 - t.bleed_alpha) * img + t.bleed_alpha * mirrored, 0.0, 1.0)
    if t.bg_level is not None:
        img = img * t.bg_level
    if t.lines:
        for orient, pos, thickness, intensity in t.lines:
            if orient == "h":
                img[pos : pos + thickness, :] = np.minimum(img[pos : pos + thickness, :], intensity)
            else:
                img[:, pos : pos + thickness] = np.minimum(img[:, pos : pos + thickness], intensity)
    if t.stains:
        ys, xs = np.mgrid[0:h, 0:w].astype(np.float32)
        for cx, cy, radius, strength in t.stains:
            d2 = ((xs - cx) ** 2 + (ys - cy) ** 2) / (radius * radius)
            falloff = np.maximum(0.0, 1.0 - d2)
            factor = 1.0 - strength * falloff
            img = img * factor if img.ndim == 2 else img * factor[:, :, None]
    if t.holes:
        ys, xs = np.mgrid[0:h, 0:w].astype(np.float32)
        for cx, cy, rx, ry in t.holes:
            inside = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2 <= 1.0
            img[inside] = bg
    if t.sp_density is not None and t.sp_density > 0:
        sp_rng = np.random.default_rng(t.sp_seed)
        flip = sp_rng.random((h, w)) < t.sp_density
        values = (sp_rng.random((h, w)) < 0.5).astype(np.float32)
        if img.ndim == 2:
            img = np.where(flip, values, img)
        else:
            img = np.where(flip[:, :, None], values[:, :, None], img)
    if t.blur_sigma is not None and t.blur_sigma > 1e-6:
        img = cv2.GaussianBlur(img, (0, 0), t.blur_sigma)
    if t.rotation_deg != 0.0:
        m = rotation_matrix(t.rotation_deg, (h, w))
        img = cv2.warpAffine(
            img,
            m,
            (w, h),
            flags=cv2.INTER_LINEAR,
            borderMode=cv2.BORDER_CONSTANT,
            borderValue=float(bg),
        )

    img = np.clip(img, 0.0, 1.0).astype(np.float32)
    meta = ScanMeta(**vars(scan.meta))
    return Scan(img if img.ndim == 3 else img[:, :, None], meta=meta, truth=scan.truth)


def degrade(
    scan: Scan, cfg: DegradationConfig, rng: np.random.Generator
) -> tuple[Scan, AppliedTransform]:
    """Sample degradation parameters and apply them to a scan."""
    t = sample_transform(scan.pixels.shape[:2], cfg, rng)
    if t.is_empty():
        return Scan(scan.pixels.copy(), meta=ScanMeta(**vars(scan.meta)), truth=scan.truth), t
    return apply_transform(scan, t), t


def _box_patches(box: Box, mask: PatchMask) -> np.ndarray:
    return boxes_to_mask([box], mask.grid).bits


def transport_mask(mask: PatchMask, t: AppliedTransform, truth: RenderPlan | None) -> PatchMask:
    """Re-quantize a label mask after the geometric part of a transform.

    Photometric effects leave the patch lattice alone, so the mask passes
    through unchanged. Rotation recovers the truth word boxes underlying the
    mask (those whose patch footprint intersects it), rotates their corners
    with the same affine the pixels saw, and re-quantizes the axis-aligned
    hulls back to patches.
    """
    if t.rotation_deg == 0.0:
        return mask.copy()
    if truth is None:
        raise MissingTruth("rotation applied but the scan carries no render plan")
    grid = mask.grid
    h, w = grid.image_height, grid.image_width
    m = rotation_matrix(t.rotation_deg, (h, w))
    rotated: list[Box] = []
    for wb in truth.word_boxes:
        if not (_box_patches(wb.box, mask) & mask.bits).any():
            continue
        x0, y0, x1, y1 = wb.box
        corners = np.array([[x0, y0], [x1, y0], [x0, y1], [x1, y1]], dtype=np.float64)
        moved = corners @ m[:, :2].T + m[:, 2]
        rotated.append(
            (
                float(np.clip(moved[:, 0].min(), 0, w)),
                float(np.clip(moved[:, 1].min(), 0, h)),
                float(np.clip(moved[:, 0].max(), 0, w)),
                float(np.clip(moved[:, 1].max(), 0, h)),
            )
        )
    return boxes_to_mask(rotated, grid)
