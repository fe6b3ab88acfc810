"""Embedding-based retrieval: mean-pooled encoder embeddings, exact cosine
top-k, and a versioned binary index file (magic ``PXIX``)."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, EmptyIndex, ShapeMismatch, UsageError
from .model.mae import ModelParams, encode
from .model.train import predict_in_batches

MAGIC = b"PXIX"
VERSION = 1


def embed(params: ModelParams, pixels: np.ndarray) -> np.ndarray:
    """Mean of final-layer patch embeddings, L2-normalized. No masking."""
    pooled = encode(params, pixels).mean(axis=-2).data
    norms = np.linalg.norm(pooled, axis=-1, keepdims=True)
    if (norms == 0).any():
        raise ShapeMismatch("zero-norm embedding; encoder output collapsed")
    out = (pooled / norms).astype(np.float32)
    return out[0] if pixels.ndim == 3 else out


def embed_batch(params: ModelParams, pixels: np.ndarray, batch_size: int = 64) -> np.ndarray:
    pooled = predict_in_batches(lambda x: encode(params, x).mean(axis=-2), pixels, batch_size)
    norms = np.linalg.norm(pooled, axis=-1, keepdims=True)
    return (pooled / norms).astype(np.float32)


@dataclass
class EmbeddingIndex:
    vectors: np.ndarray  # (N, width), unit norm
    ids: list[str]
    fingerprint: str = ""

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float32)
        if self.vectors.ndim != 2 or len(self.ids) != self.vectors.shape[0]:
            raise ShapeMismatch(
                f"{len(self.ids)} ids vs vector block {self.vectors.shape}"
            )
        if len(set(self.ids)) != len(self.ids):
            raise UsageError("index ids must be unique")
        norms = np.linalg.norm(self.vectors, axis=1)
        if len(norms) and not np.allclose(norms, 1.0, atol=1e-5):
            raise UsageError("index vectors must be unit-normalized")

    def __len__(self) -> int:
        return len(self.ids)


def query(index: EmbeddingIndex, probe: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Exact top-k by descending cosine; ties broken by id order."""
    if len(index) == 0:
        raise EmptyIndex("cannot query an empty index")
    if k > len(index):
        raise UsageError(f"k={k} exceeds index size {len(index)}")
    probe = np.asarray(probe, dtype=np.float32).reshape(-1)
    if probe.shape[0] != index.vectors.shape[1]:
        raise ShapeMismatch(f"probe dim {probe.shape[0]} != index width {index.vectors.shape[1]}")
    norm = float(np.linalg.norm(probe))
    if norm == 0:
        raise UsageError("probe vector has zero norm")
    cosines = index.vectors @ (probe / norm)
    ranked = sorted(zip(index.ids, cosines.tolist()), key=lambda t: (-t[1], t[0]))
    return [(i, float(c)) for i, c in ranked[:k]]


def save_index(index: EmbeddingIndex, path: str | Path) -> None:
    n, width = index.vectors.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, n, width))
        fp = index.fingerprint.encode("utf-8")
        fh.write(struct.pack("<I", len(fp)))
        fh.write(fp)
        for scan_id in index.ids:
            raw = scan_id.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(np.ascontiguousarray(index.vectors, dtype="<f4").tobytes())


def load_index(path: str | Path) -> EmbeddingIndex:
    p = Path(path)
    if not p.exists():
        raise DataError(f"index not found: {p}")
    raw = p.read_bytes()
    if raw[:4] != MAGIC:
        raise DataError(f"{p}: not a PXIX index")
    version, n, width = struct.unpack_from("<III", raw, 4)
    if version != VERSION:
        raise DataError(f"{p}: unsupported index version {version}")
    offset = 16
    (fp_len,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    fingerprint = raw[offset : offset + fp_len].decode("utf-8")
    offset += fp_len
    ids = []
    for _ in range(n):
        (id_len,) = struct.unpack_from("<I", raw, offset)
        offset += 4
        ids.append(raw[offset : offset + id_len].decode("utf-8"))
        offset += id_len
    vectors = np.frombuffer(raw, dtype="<f4", count=n * width, offset=offset).reshape(n, width)
    return EmbeddingIndex(vectors.copy(), ids, fingerprint)
