"""JSONL dataset manifests shared by the synthetic and page-crop pipelines.

One line per scan. Keys present only when meaningful for the entry:
{path, seed, split, source_id, crop_offset, word_boxes, spans, transform,
mask_rle, grid}. Lines are written with sorted keys so reruns are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .degrade import AppliedTransform
from .render import FontSpec, RenderPlan, TextSpan, WordBox


@dataclass
class ManifestEntry:
    path: str
    split: str = "train"
    seed: int | None = None
    source_id: str | None = None
    crop_offset: int | None = None
    word_boxes: list[dict] | None = None
    spans: list[dict] | None = None
    transform: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = {"path": self.path, "split": self.split}
        for key in ("seed", "source_id", "crop_offset", "word_boxes", "spans", "transform"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        d.update(self.extra)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ManifestEntry":
        d = json.loads(line)
        known = {"path", "split", "seed", "source_id", "crop_offset", "word_boxes", "spans", "transform"}
        kwargs = {k: d[k] for k in known if k in d}
        extra = {k: v for k, v in d.items() if k not in known}
        return cls(**kwargs, extra=extra)


def plan_to_manifest_fields(plan: RenderPlan) -> tuple[list[dict], list[dict]]:
    """(word_boxes, spans) JSON blocks for a render plan."""
    boxes = [
        {"text": wb.word, "x0": wb.box[0], "y0": wb.box[1], "x1": wb.box[2], "y1": wb.box[3]}
        for wb in plan.word_boxes
    ]
    spans = [
        {"font": s.font.family_id, "size": s.font.size_px, "offset": s.origin_y, "height": s.height}
        for s in plan.spans
    ]
    return boxes, spans


def plan_from_manifest_fields(
    word_boxes: list[dict], spans: list[dict], canvas: tuple[int, int]
) -> RenderPlan:
    """Rebuild a plan (word geometry and spans) from manifest JSON blocks."""
    span_objs = [
        TextSpan("", FontSpec(s["font"], s["size"]), s["offset"], s.get("height", 0)) for s in spans
    ]
    default_font = span_objs[0].font if span_objs else FontSpec("builtin", 12)
    box_objs = [
        WordBox(b["text"], (b["x0"], b["y0"], b["x1"], b["y1"]), default_font) for b in word_boxes
    ]
    return RenderPlan(span_objs, box_objs, canvas)


def transform_to_manifest_field(t: AppliedTransform) -> dict | None:
    d = t.to_dict()
    return d or None


def write_manifest(entries: list[ManifestEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(entry.to_json() + "\n")


def append_manifest(entry: ManifestEntry, fh) -> None:
    fh.write(entry.to_json() + "\n")


def read_manifest(path: str | Path) -> Iterator[ManifestEntry]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield ManifestEntry.from_json(line)
