"""Single-file binary checkpoints.

Layout: magic ``PXDC``, version u32, config-JSON blob (u32 length + UTF-8),
tensor count u32, then per tensor sorted by name: name (u32 + UTF-8), ndim
u32, dims u32 each, raw little-endian float32 data. Everything little-endian.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from .autograd import Tensor
from .layers import sincos_position_table
from .mae import ModelConfig, ModelParams

MAGIC = b"PXDC"
VERSION = 1


def save_checkpoint(params: ModelParams, path: str | Path) -> None:
    blob = json.dumps(params.config.to_dict(), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        named = params.named()
        fh.write(struct.pack("<I", len(named)))
        for name, tensor in named:
            encoded = name.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            data = np.ascontiguousarray(tensor.data, dtype="<f4")
            fh.write(struct.pack("<I", data.ndim))
            fh.write(struct.pack(f"<{data.ndim}I", *data.shape))
            fh.write(data.tobytes())


def load_checkpoint(path: str | Path, dtype=np.float32) -> ModelParams:
    p = Path(path)
    if not p.exists():
        raise DataError(f"checkpoint not found: {p}")
    raw = p.read_bytes()
    if raw[:4] != MAGIC:
        raise DataError(f"{p}: not a PXDC checkpoint")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != VERSION:
        raise DataError(f"{p}: unsupported checkpoint version {version}")
    (blob_len,) = struct.unpack_from("<I", raw, 8)
    offset = 12
    cfg = ModelConfig.from_dict(json.loads(raw[offset : offset + blob_len].decode("utf-8")))
    offset += blob_len
    (count,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    tensors: dict[str, Tensor] = {}
    for _ in range(count):
        (name_len,) = struct.unpack_from("<I", raw, offset)
        offset += 4
        name = raw[offset : offset + name_len].decode("utf-8")
        offset += name_len
        (ndim,) = struct.unpack_from("<I", raw, offset)
        offset += 4
        shape = struct.unpack_from(f"<{ndim}I", raw, offset)
        offset += 4 * ndim
        size = int(np.prod(shape)) if ndim else 1
        data = np.frombuffer(raw, dtype="<f4", count=size, offset=offset).reshape(shape)
        offset += 4 * size
        tensors[name] = Tensor(data.astype(dtype), name=name)
    pos = sincos_position_table(cfg.grid.rows, cfg.grid.cols, cfg.width).astype(dtype)
    return ModelParams(cfg, tensors, pos)


def checkpoint_fingerprint(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
