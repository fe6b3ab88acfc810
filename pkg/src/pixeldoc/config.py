"""Run configuration: one JSON block shared by every CLI subcommand.

Flags mirror config keys; precedence is defaults < config file < explicit
flags. Validation reports the dotted path of the offending key.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .degrade import DegradationConfig
from .errors import ConfigInvalid
from .model.mae import ModelConfig


@dataclass
class MaskSpec:
    ratio: float = 0.28
    w_range: tuple[int, int] = (2, 6)
    h_range: tuple[int, int] = (2, 4)
    trim: bool = True


@dataclass
class OptimSpec:
    peak_lr: float = 1.5e-4
    min_lr: float = 1e-5
    warmup_steps: int = 50
    steps: int = 1000
    batch_size: int = 16
    weight_decay: float = 1e-5


@dataclass
class RenderSpec:
    canvas: int = 368
    size_range: tuple[int, int] = (12, 32)
    backend: str = "bitmap"


@dataclass
class RunConfig:
    seed: int = 0
    model: ModelConfig = field(default_factory=ModelConfig)
    degrade: DegradationConfig = field(default_factory=DegradationConfig)
    mask: MaskSpec = field(default_factory=MaskSpec)
    optim: OptimSpec = field(default_factory=OptimSpec)
    render: RenderSpec = field(default_factory=RenderSpec)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "model": self.model.to_dict(),
            "degrade": self.degrade.to_dict(),
            "mask": asdict(self.mask),
            "optim": asdict(self.optim),
            "render": asdict(self.render),
        }


def _expect(d: dict, path: str) -> None:
    if not isinstance(d, dict):
        raise ConfigInvalid(f"{path}: expected an object, got {type(d).__name__}")


def _check_number(value, path: str, lo=None, hi=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigInvalid(f"{path}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigInvalid(f"{path}: expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigInvalid(f"{path}: must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigInvalid(f"{path}: must be <= {hi}, got {value}")
    return int(value) if integer else float(value)


def _check_pair(value, path: str, integer=False):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigInvalid(f"{path}: expected [low, high]")
    lo = _check_number(value[0], f"{path}[0]", integer=integer)
    hi = _check_number(value[1], f"{path}[1]", integer=integer)
    if lo > hi:
        raise ConfigInvalid(f"{path}: low {lo} exceeds high {hi}")
    return (lo, hi)


def _build(cls, d: dict, path: str, spec: dict):
    _expect(d, path)
    unknown = set(d) - set(spec)
    if unknown:
        raise ConfigInvalid(f"{path}.{sorted(unknown)[0]}: unknown key")
    kwargs = {}
    for key, check in spec.items():
        if key in d:
            kwargs[key] = check(d[key], f"{path}.{key}")
    return cls(**kwargs)


def config_from_dict(d: dict) -> RunConfig:
    _expect(d, "config")
    known = {"seed", "model", "degrade", "mask", "optim", "render"}
    unknown = set(d) - known
    if unknown:
        raise ConfigInvalid(f"config.{sorted(unknown)[0]}: unknown key")

    cfg = RunConfig()
    if "seed" in d:
        cfg.seed = _check_number(d["seed"], "seed", lo=0, integer=True)
    if "model" in d:
        _expect(d["model"], "model")
        try:
            cfg.model = ModelConfig.from_dict({**ModelConfig().to_dict(), **d["model"]})
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"model: {exc}") from None
    if "degrade" in d:
        _expect(d["degrade"], "degrade")
        try:
            cfg.degrade = DegradationConfig.from_dict(d["degrade"])
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"degrade: {exc}") from None
    if "mask" in d:
        cfg.mask = _build(
            MaskSpec,
            d["mask"],
            "mask",
            {
                "ratio": lambda v, p: _check_number(v, p, lo=1e-9, hi=1 - 1e-9),
                "w_range": lambda v, p: _check_pair(v, p, integer=True),
                "h_range": lambda v, p: _check_pair(v, p, integer=True),
                "trim": lambda v, p: v if isinstance(v, bool) else _bad_bool(p, v),
            },
        )
    if "optim" in d:
        cfg.optim = _build(
            OptimSpec,
            d["optim"],
            "optim",
            {
                "peak_lr": lambda v, p: _check_number(v, p, lo=0),
                "min_lr": lambda v, p: _check_number(v, p, lo=0),
                "warmup_steps": lambda v, p: _check_number(v, p, lo=0, integer=True),
                "steps": lambda v, p: _check_number(v, p, lo=0, integer=True),
                "batch_size": lambda v, p: _check_number(v, p, lo=1, integer=True),
                "weight_decay": lambda v, p: _check_number(v, p, lo=0),
            },
        )
    if "render" in d:
        cfg.render = _build(
            RenderSpec,
            d["render"],
            "render",
            {
                "canvas": lambda v, p: _check_number(v, p, lo=16, integer=True),
                "size_range": lambda v, p: _check_pair(v, p, integer=True),
                "backend": lambda v, p: _check_backend(v, p),
            },
        )
    return cfg


def _bad_bool(path: str, value):
    raise ConfigInvalid(f"{path}: expected true/false, got {value!r}")


def _check_backend(value, path: str) -> str:
    if value not in ("bitmap", "smooth"):
        raise ConfigInvalid(f"{path}: expected 'bitmap' or 'smooth', got {value!r}")
    return value


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    """Read and validate a config file, then apply dotted-key overrides."""
    data: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigInvalid(f"config file not found: {p}")
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config file {p}: {exc}") from None
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return config_from_dict(data)


def write_run_record(out_dir: str | Path, subcommand: str, cfg: RunConfig, extra: dict) -> None:
    """Persist the resolved config + arguments needed to replay a run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    record = {"subcommand": subcommand, "config": cfg.to_dict(), **extra}
    (out / "run.json").write_text(json.dumps(record, sort_keys=True, indent=2) + "\n", "utf-8")
