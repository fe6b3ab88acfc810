"""Font registry and glyph rasterization backends.

The built-in families are deterministic bitmap fonts derived from one
embedded glyph table (regular, bold, wide, slant variants), so rendering
never depends on system fonts. User-supplied outline fonts can be
registered from a TTF/OTF path and flow through the same interface.

A family owns the glyph *metrics*; a backend only decides how pixels are
painted. Rasterizing one layout with two backends therefore yields
identical word boxes and different ink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._glyphdata import CELL_HEIGHT, GLYPHS
from .errors import FontResolution

BACKEND_BITMAP = "bitmap"
BACKEND_SMOOTH = "smooth"
BACKENDS = (BACKEND_BITMAP, BACKEND_SMOOTH)


def _decode_glyph(ch: str) -> np.ndarray:
    width, rows = GLYPHS[ch]
    out = np.zeros((CELL_HEIGHT, width), dtype=bool)
    for y, bits in enumerate(rows):
        for x in range(width):
            if bits >> (width - 1 - x) & 1:
                out[y, x] = True
    return out


def _fallback_glyph() -> np.ndarray:
    # hollow box, the classic missing-glyph marker
    g = np.zeros((CELL_HEIGHT, 8), dtype=bool)
    g[2:13, 1:7] = True
    g[4:11, 3:5] = False
    return g


def _embolden(g: np.ndarray) -> np.ndarray:
    out = np.zeros((g.shape[0], g.shape[1] + 1), dtype=bool)
    out[:, :-1] |= g
    out[:, 1:] |= g
    return out


def _widen(g: np.ndarray, factor: float) -> np.ndarray:
    w = max(1, int(round(g.shape[1] * factor)))
    cols = np.minimum((np.arange(w) / factor).astype(int), g.shape[1] - 1)
    return g[:, cols]


def _slant(g: np.ndarray) -> np.ndarray:
    h, w = g.shape
    shift = np.round((h - 1 - np.arange(h)) / 5.0).astype(int)
    out = np.zeros((h, w + int(shift.max())), dtype=bool)
    for y in range(h):
        out[y, shift[y] : shift[y] + w] = g[y]
    return out


class BitmapFamily:
    """Fixed-cell bitmap font; arbitrary sizes via nearest-neighbour scaling."""

    def __init__(self, name: str, glyphs: dict[str, np.ndarray]):
        self.name = name
        self._glyphs = glyphs
        self._fallback = _fallback_glyph()
        self._cache: dict[tuple[str, int, str], np.ndarray] = {}

    def has_glyph(self, ch: str) -> bool:
        return ch in self._glyphs

    def _base(self, ch: str) -> np.ndarray:
        return self._glyphs.get(ch, self._fallback)

    def advance(self, ch: str, size_px: int) -> int:
        base = self._base(ch)
        return max(1, int(round(base.shape[1] * size_px / CELL_HEIGHT)))

    def glyph(self, ch: str, size_px: int, backend: str = BACKEND_BITMAP) -> np.ndarray:
        """Ink intensity of one glyph cell, shape (size_px, advance); 1 = full ink."""
        key = (ch, size_px, backend)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        base = self._base(ch).astype(np.float32)
        w = self.advance(ch, size_px)
        if backend == BACKEND_BITMAP:
            ys = np.minimum((np.arange(size_px) * CELL_HEIGHT) // size_px, CELL_HEIGHT - 1)
            xs = np.minimum((np.arange(w) * base.shape[1]) // w, base.shape[1] - 1)
            out = base[np.ix_(ys, xs)]
        elif backend == BACKEND_SMOOTH:
            import cv2

            out = cv2.resize(base, (w, size_px), interpolation=cv2.INTER_AREA)
            out = np.clip(out, 0.0, 1.0)
        else:
            raise ValueError(f"unknown glyph backend: {backend!r}")
        out = out.astype(np.float32)
        self._cache[key] = out
        return out


class TrueTypeFamily:
    """Outline font rasterized through Pillow; metrics come from the face."""

    def __init__(self, name: str, path: str):
        from PIL import ImageFont

        self.name = name
        self._path = path
        self._faces: dict[int, object] = {}
        self._cache: dict[tuple[str, int, str], np.ndarray] = {}
        ImageFont.truetype(path, 16)  # fail early on a bad path

    def _face(self, size_px: int):
        from PIL import ImageFont

        if size_px not in self._faces:
            self._faces[size_px] = ImageFont.truetype(self._path, size_px)
        return self._faces[size_px]

    def has_glyph(self, ch: str) -> bool:
        return True

    def advance(self, ch: str, size_px: int) -> int:
        from PIL import Image, ImageDraw

        probe = ImageDraw.Draw(Image.new("L", (4, 4)))
        return max(1, int(round(probe.textlength(ch, font=self._face(size_px)))))

    def glyph(self, ch: str, size_px: int, backend: str = BACKEND_SMOOTH) -> np.ndarray:
        from PIL import Image, ImageDraw

        key = (ch, size_px, backend)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        w = self.advance(ch, size_px)
        img = Image.new("L", (w + size_px, size_px * 2), 255)
        ImageDraw.Draw(img).text((0, 0), ch, font=self._face(size_px), fill=0)
        ink = 1.0 - np.asarray(img, dtype=np.float32)[:size_px, :w] / 255.0
        if backend == BACKEND_BITMAP:
            ink = (ink > 0.5).astype(np.float32)
        self._cache[key] = ink
        return ink


FontFamily = BitmapFamily | TrueTypeFamily


@dataclass
class FontRegistry:
    """Immutable-after-construction mapping of family id to font family."""

    families: dict[str, FontFamily] = field(default_factory=dict)

    @classmethod
    def builtin(cls) -> "FontRegistry":
        base = {chr(c): _decode_glyph(chr(c)) for c in range(32, 127)}
        bold = {ch: _embolden(g) for ch, g in base.items()}
        wide = {ch: _widen(g, 1.4) for ch, g in base.items()}
        slant = {ch: _slant(g) for ch, g in base.items()}
        reg = cls()
        reg.families["builtin"] = BitmapFamily("builtin", base)
        reg.families["builtin-bold"] = BitmapFamily("builtin-bold", bold)
        reg.families["builtin-wide"] = BitmapFamily("builtin-wide", wide)
        reg.families["builtin-slant"] = BitmapFamily("builtin-slant", slant)
        return reg

    def register_truetype(self, family_id: str, path: str) -> None:
        self.families[family_id] = TrueTypeFamily(family_id, path)

    def get(self, family_id: str) -> FontFamily:
        try:
            return self.families[family_id]
        except KeyError:
            raise FontResolution(f"font family not registered: {family_id!r}") from None

    def ids(self) -> list[str]:
        return sorted(self.families)
