"""AdamW with linear warmup and cosine decay to a minimum learning rate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mae import ModelParams


@dataclass(frozen=True)
class LrSchedule:
    peak_lr: float = 1.5e-4
    min_lr: float = 1e-5
    warmup_steps: int = 50
    total_steps: int = 1000

    def lr_at(self, step: int) -> float:
        if self.warmup_steps > 0 and step < self.warmup_steps:
            return self.peak_lr * (step + 1) / self.warmup_steps
        span = self.total_steps - self.warmup_steps
        if span <= 0 or step >= self.total_steps:
            return self.min_lr
        phase = (step - self.warmup_steps) / span
        return self.min_lr + 0.5 * (self.peak_lr - self.min_lr) * (1.0 + math.cos(math.pi * phase))


@dataclass
class OptimState:
    schedule: LrSchedule
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 1e-5
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: ModelParams, schedule: LrSchedule, **kwargs) -> "OptimState":
        state = cls(schedule=schedule, **kwargs)
        for name, tensor in params.named():
            state.m[name] = np.zeros_like(tensor.data)
            state.v[name] = np.zeros_like(tensor.data)
        return state


def adamw_update(params: ModelParams, grads: dict[str, np.ndarray], state: OptimState) -> float:
    """One decoupled-weight-decay Adam step; returns the learning rate used."""
    lr = state.schedule.lr_at(state.step)
    b1, b2 = state.betas
    t = state.step + 1
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    for name, tensor in params.named():
        g = grads.get(name)
        if g is None:
            continue
        if name not in state.m:  # heads attached after optimizer creation
            state.m[name] = np.zeros_like(tensor.data)
            state.v[name] = np.zeros_like(tensor.data)
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        update = (m / c1) / (np.sqrt(v / c2) + state.eps)
        if state.weight_decay:
            update = update + state.weight_decay * tensor.data
        tensor.data = tensor.data - lr * update
    state.step = t
    return lr
