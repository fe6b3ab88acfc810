"""Downstream task construction and metrics.

QA instances are built the way the paper's pipeline does it: render the
context, OCR it, fuzzy-locate the answer string in the OCR output, quantize
the matched word boxes to a patch label mask, degrade with the mask
transported, then prepend a rendered question band and crop to the model
input size. Sentence-pair tasks reuse the pair renderer with a synthetic
marker-word labelling rule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .degrade import DegradationConfig, degrade, transport_mask
from .errors import LengthMismatch, NoTruth, OneClassOnly, UsageError
from .fonts import FontRegistry
from .imgio import load_png, save_png
from .masking import PatchGrid, PatchMask, boxes_to_mask, mask_to_rle, rle_to_mask
from .render import (
    FontSpec,
    RenderPlan,
    Scan,
    ScanMeta,
    TextSpan,
    WordBox,
    _layout_words,
    line_height,
    rasterize,
    render_pair,
    sample_font,
)
from .rng import derive_rng

# -- OCR ------------------------------------------------------------------


@dataclass
class OcrResult:
    words: list[str]
    boxes: list[tuple[float, float, float, float]]

    @property
    def text(self) -> str:
        return " ".join(self.words)


class GroundTruthOcr:
    """Reads the rendered truth directly; the zero-noise reference engine."""

    def read(self, scan: Scan) -> OcrResult:
        if scan.truth is None:
            raise NoTruth("scan has no truth metadata; ground-truth OCR unavailable")
        words = [wb.word for wb in scan.truth.word_boxes]
        boxes = [wb.box for wb in scan.truth.word_boxes]
        return OcrResult(words, boxes)


_OCR_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789"


class NoisyOcr:
    """Ground truth corrupted with per-character substitutions (probability
    ``p``) and whole-word drops (probability ``p/2``)."""

    def __init__(self, p: float, seed: int = 0):
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"noise probability must be in [0,1], got {p}")
        self.p = p
        self.seed = seed

    def read(self, scan: Scan) -> OcrResult:
        base = GroundTruthOcr().read(scan)
        rng = derive_rng(self.seed, "ocr", scan.meta.seed, scan.meta.source_id)
        words: list[str] = []
        boxes: list[tuple[float, float, float, float]] = []
        for word, box in zip(base.words, base.boxes):
            if rng.random() < self.p / 2.0:
                continue
            chars = []
            for ch in word:
                if rng.random() < self.p:
                    repl = ch
                    while repl == ch:
                        repl = _OCR_ALPHABET[int(rng.integers(0, len(_OCR_ALPHABET)))]
                    chars.append(repl)
                else:
                    chars.append(ch)
            words.append("".join(chars))
            boxes.append(box)
        return OcrResult(words, boxes)


def ocr(scan: Scan, engine) -> OcrResult:
    return engine.read(scan)


# -- fuzzy alignment --------------------------------------------------------


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (unit costs), row-vectorized."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    bb = np.frombuffer(b.encode("utf-32-le"), dtype=np.uint32)
    m = len(bb)
    steps = np.arange(m + 1)
    prev = steps.copy()
    for ch in a:
        code = ord(ch)
        cur_tail = np.minimum(prev[:-1] + (bb != code), prev[1:] + 1)
        cur = np.concatenate(([prev[0] + 1], cur_tail))
        cur = np.minimum.accumulate(cur - steps) + steps
        prev = cur
    return int(prev[-1])


def fuzzy_locate(
    answer: str, result: OcrResult, max_norm_dist: float = 0.3
) -> tuple[int, int] | None:
    """Word-index span [i, j] of the OCR text closest to ``answer`` in edit
    distance, leftmost-then-shortest on ties; None when the normalized
    distance exceeds ``max_norm_dist``."""
    if not answer:
        raise UsageError("fuzzy_locate needs a nonempty answer string")
    words = result.words
    if not words:
        return None
    best: tuple[int, int, int] | None = None  # distance, i, j
    best_len = 0
    for i in range(len(words)):
        span = ""
        for j in range(i, len(words)):
            span = words[j] if j == i else f"{span} {words[j]}"
            # d >= len(span) - len(answer); once the span is this much too
            # long no extension can beat the current best
            if best is not None and len(span) - len(answer) > best[0]:
                break
            d = levenshtein(answer, span)
            if best is None or d < best[0]:
                best = (d, i, j)
                best_len = len(span)
    assert best is not None
    d, i, j = best
    if d / max(len(answer), best_len) > max_norm_dist:
        return None
    return i, j


# -- QA instances -----------------------------------------------------------


@dataclass
class QAInstance:
    question: str
    scan: Scan
    mask: PatchMask
    has_answer: bool
    answer: str

    def __post_init__(self):
        if self.has_answer != (self.mask.count() > 0):
            raise ValueError("has_answer flag must match mask emptiness")


@dataclass
class QATaskConfig:
    """Rendering/degradation settings for QA instance construction."""

    image_hw: int = 64
    patch_size: int = 16
    noisy: bool = False
    clean_font: FontSpec = FontSpec("builtin", 11)
    question_font: FontSpec = FontSpec("builtin", 11)
    size_range: tuple[int, int] = (10, 13)
    degrade_cfg: DegradationConfig = field(default_factory=DegradationConfig)
    max_norm_dist: float = 0.3

    @property
    def grid(self) -> PatchGrid:
        side = self.image_hw // self.patch_size
        return PatchGrid(side, side, self.patch_size)


def _render_context(
    c: str, cfg: QATaskConfig, rng: np.random.Generator, registry: FontRegistry, seed: int
) -> Scan:
    font = sample_font(rng, registry, cfg.size_range) if cfg.noisy else cfg.clean_font
    words = c.split()
    canvas = (cfg.image_hw, cfg.image_hw)
    boxes, consumed, used = _layout_words(words, font, registry, canvas, 0)
    span = TextSpan(" ".join(words[:consumed]), font, 0, used)
    plan = RenderPlan([span], boxes, canvas)
    scan = rasterize(plan, registry, meta=ScanMeta(seed=seed, source_id="qa-context"))
    scan.meta.truncated = consumed < len(words)
    return scan


def _question_band(
    q: str, cfg: QATaskConfig, registry: FontRegistry
) -> tuple[np.ndarray, list[WordBox], int]:
    """Render the question in the fixed question font; band height is the
    line extent rounded up to whole patch rows."""
    canvas_w = cfg.image_hw
    tall = (canvas_w, cfg.image_hw)
    boxes, consumed, used = _layout_words(q.split(), cfg.question_font, registry, tall, 0)
    used = max(used, line_height(cfg.question_font))
    band_h = int(math.ceil(used / cfg.patch_size)) * cfg.patch_size
    plan = RenderPlan([TextSpan(q, cfg.question_font, 0, used)], boxes, (canvas_w, band_h))
    band = rasterize(plan, registry)
    return band.pixels, boxes, band_h


def build_qa_instance(
    q: str,
    c: str,
    a: str,
    cfg: QATaskConfig,
    rng: np.random.Generator,
    engine=None,
    registry: FontRegistry | None = None,
    seed: int = 0,
) -> QAInstance:
    """Construct one patch-classification QA instance.

    ``a`` may legitimately be absent from ``c`` (or lost to OCR noise); the
    instance then carries an empty mask and has_answer=False.
    """
    if not c:
        raise UsageError("context must be nonempty")
    if not a:
        raise UsageError("answer string must be nonempty (use an absent answer instead)")
    engine = engine or GroundTruthOcr()
    registry = registry or FontRegistry.builtin()
    grid = cfg.grid

    context = _render_context(c, cfg, rng, registry, seed)
    read = ocr(context, engine)
    span = fuzzy_locate(a, read, cfg.max_norm_dist)
    if span is not None:
        mask = boxes_to_mask([read.boxes[k] for k in range(span[0], span[1] + 1)], grid)
    else:
        mask = PatchMask(grid)

    if cfg.noisy:
        context, transform = degrade(context, cfg.degrade_cfg, rng)
        mask = transport_mask(mask, transform, context.truth)

    band_pixels, band_boxes, band_h = _question_band(q, cfg, registry)
    band_rows = band_h // cfg.patch_size
    combined = np.concatenate([band_pixels, context.pixels], axis=0)[: cfg.image_hw]

    shifted = PatchMask(grid)
    rows, cols = np.nonzero(mask.bits)
    keep = rows + band_rows < grid.rows
    shifted.bits[rows[keep] + band_rows, cols[keep]] = True

    truth_boxes = list(band_boxes)
    for wb in context.truth.word_boxes:
        x0, y0, x1, y1 = wb.box
        if y0 + band_h < cfg.image_hw:
            truth_boxes.append(
                WordBox(wb.word, (x0, y0 + band_h, x1, min(y1 + band_h, cfg.image_hw)), wb.font)
            )
    truth = RenderPlan(
        [TextSpan(q, cfg.question_font, 0, band_h)]
        + [TextSpan(s.text, s.font, s.origin_y + band_h, s.height) for s in context.truth.spans],
        truth_boxes,
        (cfg.image_hw, cfg.image_hw),
    )
    scan = Scan(
        combined,
        meta=ScanMeta(seed=seed, source_id="qa", truncated=context.meta.truncated),
        truth=truth,
    )
    has_answer = shifted.count() > 0
    return QAInstance(q, scan, shifted, has_answer, a if has_answer else "")


# -- metrics ----------------------------------------------------------------


@dataclass
class QAMetrics:
    binary_acc: float
    patch_acc: float
    one_overlap: float
    n_with_answer: int
    n_without: int

    def to_dict(self) -> dict:
        return {
            "binary_acc": self.binary_acc,
            "patch_acc": self.patch_acc,
            "one_overlap": self.one_overlap,
            "n_with_answer": self.n_with_answer,
            "n_without": self.n_without,
        }


def qa_metrics(
    predictions: list[np.ndarray], truths: list[QAInstance], threshold: float = 0.5
) -> QAMetrics:
    """Binary accuracy, IoU patch accuracy, and at-least-one-overlap.

    ``predictions`` holds per-patch probabilities shaped like each
    instance's mask grid (or flat); patch accuracy and overlap average over
    answerable instances only.
    """
    if len(predictions) != len(truths):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(truths)} instances")
    agree = 0
    ious: list[float] = []
    overlaps: list[float] = []
    n_with = 0
    for probs, inst in zip(predictions, truths):
        grid = inst.mask.grid
        pred_bits = np.asarray(probs).reshape(grid.rows, grid.cols) > threshold
        pred_has = bool(pred_bits.any())
        agree += int(pred_has == inst.has_answer)
        if inst.has_answer:
            n_with += 1
            inter = int((pred_bits & inst.mask.bits).sum())
            union = int((pred_bits | inst.mask.bits).sum())
            ious.append(inter / union if union else 0.0)
            overlaps.append(1.0 if inter >= 1 else 0.0)
    return QAMetrics(
        binary_acc=agree / len(truths) if truths else 0.0,
        patch_acc=float(np.mean(ious)) if ious else 0.0,
        one_overlap=float(np.mean(overlaps)) if overlaps else 0.0,
        n_with_answer=n_with,
        n_without=len(truths) - n_with,
    )


def balance_test_set(instances: list[QAInstance], rng: np.random.Generator) -> list[QAInstance]:
    """Downsample the majority class uniformly to the minority count."""
    with_a = [i for i in instances if i.has_answer]
    without = [i for i in instances if not i.has_answer]
    if not with_a or not without:
        raise OneClassOnly("balancing needs both answerable and unanswerable instances")
    n = min(len(with_a), len(without))

    def pick(group: list[QAInstance]) -> list[QAInstance]:
        if len(group) == n:
            return group
        chosen = rng.choice(len(group), size=n, replace=False)
        keep = set(int(k) for k in chosen)
        return [inst for k, inst in enumerate(group) if k in keep]

    return pick(with_a) + pick(without)


# -- synthetic task generators ------------------------------------------------

FILLER_VOCAB = (
    "the", "ship", "port", "wind", "sail", "cargo", "trade", "coast",
    "tide", "storm", "crew", "dock", "goods", "market", "street", "house",
)
ANSWER_VOCAB = ("zebra", "quartz", "fjord", "sphinx", "waltz", "nymph")


@dataclass
class QAGenConfig:
    task: QATaskConfig = field(default_factory=QATaskConfig)
    context_words: tuple[int, int] = (7, 11)
    answer_word_count: int = 1
    fillers: tuple[str, ...] = FILLER_VOCAB
    answers: tuple[str, ...] = ANSWER_VOCAB
    has_answer_prob: float = 0.5


def synth_qa_dataset(
    n: int, rng: np.random.Generator, cfg: QAGenConfig | None = None, engine=None
) -> list[QAInstance]:
    """Generate QA instances: fillers for context, with the answer span
    (drawn from the answer vocabulary) inserted for half the instances and
    asked-but-absent for the rest."""
    cfg = cfg or QAGenConfig()
    out: list[QAInstance] = []
    for k in range(n):
        n_ctx = int(rng.integers(cfg.context_words[0], cfg.context_words[1] + 1))
        words = [cfg.fillers[int(rng.integers(0, len(cfg.fillers)))] for _ in range(n_ctx)]
        answer_words = [
            cfg.answers[int(rng.integers(0, len(cfg.answers)))]
            for _ in range(cfg.answer_word_count)
        ]
        answer = " ".join(answer_words)
        if rng.random() < cfg.has_answer_prob:
            pos = int(rng.integers(0, len(words) + 1))
            words = words[:pos] + answer_words + words[pos:]
        question = f"where is {answer}"
        context = " ".join(words)
        out.append(
            build_qa_instance(question, context, answer, cfg.task, rng, engine=engine, seed=k)
        )
    return out


def synth_span_qa_dataset(
    n: int,
    rng: np.random.Generator,
    cfg: QAGenConfig,
    engine=None,
) -> list[tuple[str, str, str, bool]]:
    """(question, context, answer, answer_in_context) tuples where the answer
    is a contiguous span of the context itself; used for alignment-recovery
    checks at arbitrary context sizes without building scans."""
    out = []
    for _ in range(n):
        n_ctx = int(rng.integers(cfg.context_words[0], cfg.context_words[1] + 1))
        words = [cfg.fillers[int(rng.integers(0, len(cfg.fillers)))] for _ in range(n_ctx)]
        k = cfg.answer_word_count
        start = int(rng.integers(0, max(1, len(words) - k)))
        answer = " ".join(words[start : start + k])
        out.append((f"where is {answer}", " ".join(words), answer, True))
    return out


def synth_seq_task(
    vocab: list[str],
    n: int,
    noisy: bool,
    rng: np.random.Generator,
    canvas: tuple[int, int] = (64, 64),
    marker: str | None = None,
    words_per_sentence: tuple[int, int] = (3, 6),
    registry: FontRegistry | None = None,
    clean_font: FontSpec = FontSpec("builtin", 11),
    size_range: tuple[int, int] = (10, 13),
    degrade_cfg: DegradationConfig | None = None,
) -> list[tuple[Scan, int]]:
    """Rendered sentence pairs; label 1 iff the marker word occurs in s2."""
    if len(vocab) < 2:
        raise UsageError("need at least two vocabulary words")
    marker = marker or vocab[0]
    rest = [w for w in vocab if w != marker] or [marker + "x"]
    out: list[tuple[Scan, int]] = []
    for k in range(n):
        def sentence() -> list[str]:
            count = int(rng.integers(words_per_sentence[0], words_per_sentence[1] + 1))
            return [rest[int(rng.integers(0, len(rest)))] for _ in range(count)]

        s1 = sentence()
        s2 = sentence()
        label = int(rng.random() < 0.5)
        if label:
            s2[int(rng.integers(0, len(s2)))] = marker
        scan = render_pair(
            " ".join(s1),
            " ".join(s2),
            noisy,
            rng,
            canvas=canvas,
            registry=registry,
            clean_font=clean_font,
            size_range=size_range,
            degrade_config=degrade_cfg if noisy else None,
        )
        scan.meta.seed = k
        out.append((scan, label))
    return out


# -- dataset persistence ---------------------------------------------------


def save_qa_dataset(instances: list[QAInstance], out_dir: str | Path) -> None:
    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    with open(out / "qa.jsonl", "w", encoding="utf-8") as fh:
        for k, inst in enumerate(instances):
            rel = f"images/{k:05d}.png"
            save_png(inst.scan.pixels, out / rel)
            fh.write(
                json.dumps(
                    {
                        "question": inst.question,
                        "answer": inst.answer,
                        "has_answer": inst.has_answer,
                        "image": rel,
                        "mask_rle": mask_to_rle(inst.mask),
                        "grid": [inst.mask.grid.rows, inst.mask.grid.cols, inst.mask.grid.patch_size],
                        "seed": inst.scan.meta.seed,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_qa_dataset(out_dir: str | Path) -> list[QAInstance]:
    out = Path(out_dir)
    instances: list[QAInstance] = []
    with open(out / "qa.jsonl", "r", encoding="utf-8") as fh:
        for line in fh:
            d = json.loads(line)
            grid = PatchGrid(*d["grid"])
            pixels = load_png(out / d["image"])
            scan = Scan(pixels, meta=ScanMeta(seed=d.get("seed", 0), source_id="qa"))
            instances.append(
                QAInstance(
                    d["question"],
                    scan,
                    rle_to_mask(d["mask_rle"], grid),
                    d["has_answer"],
                    d["answer"],
                )
            )
    return instances
