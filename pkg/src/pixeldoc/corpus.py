"""Page ingestion: column detection, linearization, sliding-window crops,
and leak-free train/validation splits.

Pages are linearized into a single fixed-width strip (each region cropped,
aspect-preserving resized, stacked in reading order), then cut into square
crops with a fixed stride. Split assignment happens at page level so no two
crops of one page land in different splits.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .errors import DegenerateRegion, NoInk, UsageError
from .imgio import load_png, save_png
from .manifest import ManifestEntry, write_manifest
from .render import Scan, ScanMeta

log = logging.getLogger(__name__)

INK_LEVEL = 0.5  # intensities below this count as ink
MIN_GUTTER_PX = 8


@dataclass
class PageRegions:
    """Ordered pixel rectangles covering the text regions of one page."""

    regions: list[tuple[int, int, int, int]]  # x0, y0, x1, y1
    order: list[int] = field(default_factory=list)  # reading-order permutation
    page_id: str = ""

    def __post_init__(self):
        if not self.order:
            self.order = list(range(len(self.regions)))
        if sorted(self.order) != list(range(len(self.regions))):
            raise ValueError("reading order must be a permutation of region indices")

    def in_reading_order(self) -> list[tuple[int, int, int, int]]:
        ranked = sorted(range(len(self.regions)), key=lambda i: self.order[i])
        return [self.regions[i] for i in ranked]


def detect_columns(page: np.ndarray, min_gutter: int = MIN_GUTTER_PX) -> PageRegions:
    """Split a page into columns at ink-free vertical gutters.

    The column projection profile (ink pixels per x) is scanned for interior
    runs of zero-ink columns at least ``min_gutter`` wide; each segment
    between them becomes one region, left to right.
    """
    gray = page[:, :, 0] if page.ndim == 3 else page
    ink = gray < INK_LEVEL
    profile = ink.sum(axis=0)
    if profile.sum() == 0:
        raise NoInk("page contains no ink")

    inked = np.flatnonzero(profile > 0)
    x_lo, x_hi = int(inked[0]), int(inked[-1]) + 1
    h = gray.shape[0]

    regions: list[tuple[int, int, int, int]] = []
    start = x_lo
    x = x_lo
    while x < x_hi:
        if profile[x] == 0:
            gap_start = x
            while x < x_hi and profile[x] == 0:
                x += 1
            if x - gap_start >= min_gutter:
                regions.append((start, 0, gap_start, h))
                start = x
        else:
            x += 1
    regions.append((start, 0, x_hi, h))
    return PageRegions(regions)


def linearize(
    page: np.ndarray, regions: PageRegions, target_width: int
) -> tuple[np.ndarray, int]:
    """Crop regions, resize each to ``target_width`` keeping aspect, stack
    vertically in reading order. Returns (strip, skipped_region_count)."""
    if not regions.regions:
        raise DegenerateRegion("no regions to linearize")
    gray = page[:, :, 0] if page.ndim == 3 else page
    bands: list[np.ndarray] = []
    skipped = 0
    for x0, y0, x1, y1 in regions.in_reading_order():
        if x1 <= x0 or y1 <= y0:
            skipped += 1
            log.warning("skipping zero-area region (%s,%s,%s,%s)", x0, y0, x1, y1)
            continue
        crop = gray[y0:y1, x0:x1]
        if crop.shape[1] == target_width:
            bands.append(crop.astype(np.float32))
            continue
        scale = target_width / crop.shape[1]
        new_h = max(1, int(round(crop.shape[0] * scale)))
        interp = cv2.INTER_AREA if scale < 1.0 else cv2.INTER_LINEAR
        bands.append(
            cv2.resize(crop.astype(np.float32), (target_width, new_h), interpolation=interp)
        )
    if not bands:
        raise DegenerateRegion("all regions were zero-area")
    return np.concatenate(bands, axis=0), skipped


def crop_offsets(strip_height: int, window: int, stride: int) -> list[int]:
    """Window start offsets; the tail shorter than a stride is covered by a
    final window anchored to the strip bottom."""
    if strip_height <= window:
        return [0]
    count = (strip_height - window) // stride + 1
    offsets = [k * stride for k in range(count)]
    if offsets[-1] + window < strip_height:
        offsets[-1] = strip_height - window
    return offsets


def sliding_crops(
    strip: np.ndarray,
    window: int,
    stride: int,
    source_id: str = "",
    split: str = "train",
) -> list[Scan]:
    """Cut a width-``window`` strip into ``window``-square scans."""
    gray = strip[:, :, 0] if strip.ndim == 3 else strip
    if gray.shape[1] != window:
        raise UsageError(f"strip width {gray.shape[1]} must equal window {window}")
    h = gray.shape[0]
    if h < window:
        padded = np.ones((window, window), dtype=np.float32)
        padded[:h] = gray
        gray, h = padded, window
    scans = []
    for offset in crop_offsets(h, window, stride):
        crop = gray[offset : offset + window].astype(np.float32)
        meta = ScanMeta(seed=offset, source_id=source_id, split_tag=split)
        scans.append(Scan(crop[:, :, None], meta=meta))
    return scans


def split_pages(
    page_ids: list[str], fraction: float, rng: np.random.Generator
) -> dict[str, str]:
    """Assign whole pages to train/val; crops inherit their page's split."""
    if not 0.0 < fraction < 1.0:
        raise UsageError(f"validation fraction must be in (0,1), got {fraction}")
    ids = sorted(set(page_ids))
    n_val = int(round(len(ids) * fraction))
    if n_val == 0:
        warnings.warn(f"{len(ids)} page(s) at fraction {fraction}: validation split is empty")
    order = list(rng.permutation(len(ids)))
    val = {ids[i] for i in order[:n_val]}
    return {pid: ("val" if pid in val else "train") for pid in ids}


def split_manifest(
    entries: list[ManifestEntry], fraction: float, rng: np.random.Generator
) -> list[ManifestEntry]:
    """Rewrite entry splits with a page-level assignment."""
    pages = [e.source_id or e.path for e in entries]
    assignment = split_pages(pages, fraction, rng)
    out = []
    for entry, page in zip(entries, pages):
        entry.split = assignment[page]
        out.append(entry)
    return out


def ingest_pages(
    page_paths: list[str | Path],
    out_dir: str | Path,
    window: int = 368,
    stride: int = 128,
    val_fraction: float = 0.05,
    rng: np.random.Generator | None = None,
) -> list[ManifestEntry]:
    """Full ingestion: detect columns, linearize, crop, split, write PNGs
    and the JSONL manifest. Returns the manifest entries."""
    rng = rng if rng is not None else np.random.default_rng(0)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "crops").mkdir(exist_ok=True)

    entries: list[ManifestEntry] = []
    for path in sorted(str(p) for p in page_paths):
        page_id = Path(path).stem
        page = load_png(path)
        try:
            regions = detect_columns(page)
        except NoInk:
            log.warning("skipping blank page %s", path)
            continue
        strip, _ = linearize(page, regions, window)
        for i, scan in enumerate(sliding_crops(strip, window, stride, source_id=page_id)):
            rel = f"crops/{page_id}_{i:04d}.png"
            save_png(scan.pixels, out / rel)
            entries.append(
                ManifestEntry(
                    path=rel,
                    source_id=page_id,
                    crop_offset=int(scan.meta.seed),
                )
            )
    entries = split_manifest(entries, val_fraction, rng)
    write_manifest(entries, out / "manifest.jsonl")
    return entries
