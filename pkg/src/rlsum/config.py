"""Run configuration: one flat, fully defaulted document shared by the CLI and checkpoints."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .optim import OptimConfig
from .trainer import TrainConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    steps: int = 50_000
    seed: int = 0
    hidden: int = 200
    optimizer: str = "adam"
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_terms: int = 1000
    max_sentences: int = 30
    test_fraction: float = 0.2
    beta: float = 1.0
    aggregate: str = "max"
    sampling_mode: str = "consistent"
    eval_interval: int = 5000
    window: int = 1000
    p0: float = 0.2
    p_scale: int = 3000

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must lie in (0, 1)")
        if not 1 <= self.max_terms <= 10000:
            raise ConfigError("max_terms must lie in [1, 10000]")
        if self.max_sentences < 1:
            raise ConfigError("max_sentences must be >= 1")
        if self.beta <= 0:
            raise ConfigError("beta must be positive")
        if self.aggregate not in ("max", "mean"):
            raise ConfigError("aggregate must be 'max' or 'mean'")
        try:
            self.train_config()
        except ValueError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: malformed JSON at char {e.pos}: {e.msg}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def override(self, **values) -> "RunConfig":
        return replace(self, **{k: v for k, v in values.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)

    def optim_config(self) -> OptimConfig:
        return OptimConfig(self.optimizer, self.alpha, self.beta1, self.beta2, self.epsilon)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            steps_budget=self.steps,
            hidden=self.hidden,
            p0=self.p0,
            p_scale=self.p_scale,
            max_sentences=self.max_sentences,
            seed=self.seed,
            eval_interval=self.eval_interval,
            window=self.window,
            optimizer=self.optim_config(),
            sampling_mode=self.sampling_mode,
            beta=self.beta,
            aggregate=self.aggregate,
        )
