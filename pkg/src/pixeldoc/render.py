"""Synthetic text-scan generation.

Lays paragraphs onto a fixed-size canvas top to bottom. The first span
starts at a random in-paragraph word offset; whenever the uncovered part of
the canvas still exceeds the empty-space threshold another span is appended,
keeping the previous font and taking the next paragraph 80% of the time and
sampling a fresh paragraph and font otherwise. Ground-truth word boxes are
emitted alongside the pixels.

"Empty space" is the fraction of canvas rows not covered by any laid-out
line extent. Measuring literal ink-free rows would count the leading between
lines, which no amount of filling can remove, so the extent-based measure is
what both the fill loop and the tests use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyCorpus, UsageError
from .fonts import BACKEND_BITMAP, FontRegistry
from .masking import Box

DEFAULT_CANVAS = (368, 368)
DEFAULT_FONT_SIZE_RANGE = (12, 32)
MIN_FONT_SIZE = 8
EMPTY_SPACE_THRESHOLD = 0.10
CONTINUE_SAME_FONT_PROB = 0.80
LINE_HEIGHT_FACTOR = 1.2
INK_THRESHOLD = 0.5


@dataclass(frozen=True)
class FontSpec:
    family_id: str
    size_px: int


@dataclass(frozen=True)
class TextSpan:
    text: str
    font: FontSpec
    origin_y: int
    height: int = 0  # vertical extent actually covered by this span's lines


@dataclass(frozen=True)
class WordBox:
    word: str
    box: Box
    font: FontSpec


@dataclass
class RenderPlan:
    spans: list[TextSpan]
    word_boxes: list[WordBox]
    canvas: tuple[int, int]  # (width, height) in pixels

    def covered_height(self) -> int:
        return sum(s.height for s in self.spans)

    def empty_fraction(self) -> float:
        return 1.0 - self.covered_height() / self.canvas[1]


@dataclass
class ScanMeta:
    seed: int = 0
    source_id: str = ""
    split_tag: str = "train"
    fallback_glyphs: int = 0
    truncated: bool = False


@dataclass
class Scan:
    pixels: np.ndarray  # H x W x C, float32 in [0, 1]
    meta: ScanMeta = field(default_factory=ScanMeta)
    truth: RenderPlan | None = None

    def __post_init__(self):
        if self.pixels.ndim == 2:
            self.pixels = self.pixels[:, :, None]
        if self.pixels.ndim != 3 or self.pixels.shape[2] not in (1, 3):
            raise ValueError(f"scan pixels must be HxWxC with C in {{1,3}}, got {self.pixels.shape}")
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.float32)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


class ParagraphSource:
    """Ordered paragraph list with sequential-next and random access."""

    def __init__(self, paragraphs: list[str], cycle: bool = False):
        self.paragraphs = list(paragraphs)
        self.cycle = cycle

    @classmethod
    def from_text(cls, text: str, cycle: bool = False) -> "ParagraphSource":
        paras = [p for p in text.split("\n") if p.strip()]
        return cls(paras, cycle=cycle)

    def __len__(self) -> int:
        return len(self.paragraphs)

    def random_index(self, rng: np.random.Generator) -> int:
        if not self.paragraphs:
            raise EmptyCorpus("paragraph source is empty")
        return int(rng.integers(0, len(self.paragraphs)))

    def next_index(self, index: int) -> int | None:
        """The paragraph after ``index``, or None when exhausted (non-cyclic)."""
        nxt = index + 1
        if nxt >= len(self.paragraphs):
            return 0 if self.cycle else None
        return nxt


def line_height(font: FontSpec) -> int:
    return int(round(LINE_HEIGHT_FACTOR * font.size_px))


def _word_width(word: str, font: FontSpec, registry: FontRegistry) -> int:
    fam = registry.get(font.family_id)
    return sum(fam.advance(ch, font.size_px) for ch in word)


def _space_width(font: FontSpec, registry: FontRegistry) -> int:
    return registry.get(font.family_id).advance(" ", font.size_px)


def _layout_words(
    words: list[str],
    font: FontSpec,
    registry: FontRegistry,
    canvas: tuple[int, int],
    start_y: int,
) -> tuple[list[WordBox], int, int]:
    """Greedy word wrap from ``start_y``.

    Returns (word boxes, consumed word count, used height). Stops when the
    next line would cross the canvas bottom. A word wider than the canvas is
    placed alone on its line with its box clipped.
    """
    width, height = canvas
    lh = line_height(font)
    space = _space_width(font, registry)
    boxes: list[WordBox] = []
    consumed = 0
    y = start_y
    i = 0
    while i < len(words) and y + lh <= height:
        x = 0
        while i < len(words):
            w = _word_width(words[i], font, registry)
            if x > 0 and x + space + w > width:
                break
            if x > 0:
                x += space
            x0 = x
            x = min(x0 + w, width)
            boxes.append(WordBox(words[i], (x0, y, x, min(y + font.size_px, height)), font))
            i += 1
            consumed += 1
            if x >= width:
                break
        y += lh
    return boxes, consumed, y - start_y


def sample_font(
    rng: np.random.Generator,
    registry: FontRegistry,
    size_range: tuple[int, int] = DEFAULT_FONT_SIZE_RANGE,
) -> FontSpec:
    family = registry.ids()[int(rng.integers(0, len(registry.ids())))]
    size = int(rng.integers(size_range[0], size_range[1] + 1))
    return FontSpec(family, size)


def layout_paragraphs(
    corpus: ParagraphSource,
    rng: np.random.Generator,
    canvas: tuple[int, int] = DEFAULT_CANVAS,
    fonts: FontRegistry | None = None,
    size_range: tuple[int, int] = DEFAULT_FONT_SIZE_RANGE,
    empty_threshold: float = EMPTY_SPACE_THRESHOLD,
    word_aligned_offset: bool = True,
) -> RenderPlan:
    """Fill a canvas with paragraph spans per the continuation rule.

    The in-paragraph start offset is word-aligned by default
    (``word_aligned_offset=False`` switches to character-aligned).
    """
    registry = fonts or FontRegistry.builtin()
    width, height = canvas
    if len(corpus) == 0:
        raise EmptyCorpus("paragraph source is empty")

    def words_from(index: int, offset_rng: np.random.Generator | None) -> list[str]:
        text = corpus.paragraphs[index]
        if offset_rng is None:
            return text.split()
        if word_aligned_offset:
            words = text.split()
            if not words:
                return []
            start = int(offset_rng.integers(0, len(words)))
            return words[start:]
        if not text.strip():
            return []
        start = int(offset_rng.integers(0, len(text)))
        return text[start:].split()

    # first span: random paragraph, random in-paragraph offset, random font
    index = corpus.random_index(rng)
    words = words_from(index, rng)
    attempts = 0
    while not words:
        nxt = corpus.next_index(index)
        attempts += 1
        if nxt is None or attempts > len(corpus):
            raise EmptyCorpus("no nonempty paragraph available")
        index = nxt
        words = words_from(index, None)
    font = sample_font(rng, registry, size_range)

    spans: list[TextSpan] = []
    boxes: list[WordBox] = []
    y = 0
    while True:
        gap = height - y
        if line_height(font) > gap:
            # shrink so at least one line fits; below the legibility floor
            # the remaining gap is already small and filling stops
            fitted = int(gap / LINE_HEIGHT_FACTOR)
            if fitted < MIN_FONT_SIZE:
                break
            font = replace(font, size_px=fitted)
        span_boxes, consumed, used = _layout_words(words, font, registry, canvas, y)
        if consumed > 0:
            spans.append(TextSpan(" ".join(words[:consumed]), font, y, used))
            boxes.extend(span_boxes)
            y += used
        if (height - y) / height <= empty_threshold:
            break
        # continuation: same font + next paragraph (p=0.8), else fresh draw
        if rng.random() < CONTINUE_SAME_FONT_PROB:
            nxt = corpus.next_index(index)
            while nxt is not None and not corpus.paragraphs[nxt].split():
                nxt = corpus.next_index(nxt)
            if nxt is None:
                break
            index = nxt
            words = words_from(index, None)
        else:
            index = corpus.random_index(rng)
            words = words_from(index, None)
            attempts = 0
            exhausted = False
            while not words:
                nxt = corpus.next_index(index)
                attempts += 1
                if nxt is None or attempts > len(corpus):
                    exhausted = True
                    break
                index = nxt
                words = words_from(index, None)
            if exhausted:
                break
            font = sample_font(rng, registry, size_range)

    return RenderPlan(spans, boxes, canvas)


def rasterize(
    plan: RenderPlan,
    registry: FontRegistry | None = None,
    backend: str = BACKEND_BITMAP,
    meta: ScanMeta | None = None,
) -> Scan:
    """Paint a plan's word boxes onto a white canvas; darkest ink wins."""
    registry = registry or FontRegistry.builtin()
    width, height = plan.canvas
    pixels = np.ones((height, width), dtype=np.float32)
    fallbacks = 0
    for wb in plan.word_boxes:
        fam = registry.get(wb.font.family_id)
        size = wb.font.size_px
        x = int(wb.box[0])
        y = int(wb.box[1])
        for ch in wb.word:
            if not fam.has_glyph(ch):
                fallbacks += 1
            glyph = fam.glyph(ch, size, backend)
            gh, gw = glyph.shape
            x1 = min(x + gw, width)
            y1 = min(y + gh, height)
            if x1 > x and y1 > y:
                region = pixels[y:y1, x:x1]
                np.minimum(region, 1.0 - glyph[: y1 - y, : x1 - x], out=region)
            x += fam.advance(ch, size)
            if x >= width:
                break
    out_meta = meta or ScanMeta()
    out_meta.fallback_glyphs = fallbacks
    return Scan(pixels[:, :, None], meta=out_meta, truth=plan)


DEFAULT_PAIR_FONT = FontSpec("builtin", 12)


def render_pair(
    s1: str,
    s2: str | None,
    noisy: bool,
    rng: np.random.Generator,
    canvas: tuple[int, int] = DEFAULT_CANVAS,
    registry: FontRegistry | None = None,
    clean_font: FontSpec = DEFAULT_PAIR_FONT,
    size_range: tuple[int, int] = DEFAULT_FONT_SIZE_RANGE,
    degrade_config=None,
) -> Scan:
    """Render a sentence pair with a line break between the sentences.

    Clean mode uses one fixed font and no degradations. Noisy mode samples a
    font (shrinking down to the minimum size if the pair overflows) and runs
    the degradation pipeline.
    """
    if not s1:
        raise UsageError("render_pair requires a nonempty first sentence")
    registry = registry or FontRegistry.builtin()
    width, height = canvas

    def try_layout(font: FontSpec):
        spans: list[TextSpan] = []
        boxes: list[WordBox] = []
        y = 0
        consumed_all = True
        for sentence in [s1] + ([s2] if s2 else []):
            words = sentence.split()
            sb, consumed, used = _layout_words(words, font, registry, canvas, y)
            spans.append(TextSpan(" ".join(words[:consumed]), font, y, used))
            boxes.extend(sb)
            y += used if used else line_height(font)
            if consumed < len(words):
                consumed_all = False
        return RenderPlan(spans, boxes, canvas), consumed_all

    if noisy:
        font = sample_font(rng, registry, size_range)
        plan, fits = try_layout(font)
        size = font.size_px
        while not fits and size > MIN_FONT_SIZE:
            size = max(MIN_FONT_SIZE, size - 2)
            plan, fits = try_layout(replace(font, size_px=size))
    else:
        plan, fits = try_layout(clean_font)

    scan = rasterize(plan, registry, meta=ScanMeta(seed=0, source_id="pair"))
    scan.meta.truncated = not fits
    if noisy and degrade_config is not None:
        from .degrade import degrade

        scan, _ = degrade(scan, degrade_config, rng)
    return scan


def ink_mass(pixels: np.ndarray) -> float:
    """Total ink (1 - intensity) summed over all pixels and channels."""
    return float(np.sum(1.0 - pixels))
