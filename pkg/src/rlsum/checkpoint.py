"""Self-contained JSON checkpoints: policy, vocabulary, config echo and resumable loop state."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .features import Vocabulary
from .optim import AdamState, adam_state_from_json, adam_state_to_json
from .policy import PolicyParams, params_from_json, params_to_json

CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass
class Checkpoint:
    params: PolicyParams
    vocab: Vocabulary
    config: dict
    adam: AdamState | None = None
    training: dict | None = None


def to_json(ckpt: Checkpoint) -> str:
    obj = {"version": CHECKPOINT_VERSION, **params_to_json(ckpt.params)}
    obj["vocabulary"] = ckpt.vocab.to_json()
    obj["config"] = ckpt.config
    obj["optimizer"] = None if ckpt.adam is None else adam_state_to_json(ckpt.adam)
    obj["training"] = ckpt.training
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def from_json(text: str) -> Checkpoint:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CheckpointError(f"malformed checkpoint JSON at char {e.pos}: {e.msg}") from e
    if obj.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {obj.get('version')!r}")
    params = params_from_json(obj)
    vocab = Vocabulary.from_json(obj["vocabulary"])
    if params.state_dim != 5 * vocab.dimension:
        raise CheckpointError(
            f"policy state_dim {params.state_dim} does not match 5 x vocabulary size {vocab.dimension}"
        )
    adam = None
    if obj.get("optimizer") is not None:
        adam = adam_state_from_json(obj["optimizer"], params)
    return Checkpoint(params, vocab, obj.get("config") or {}, adam, obj.get("training"))


def save(ckpt: Checkpoint, path: str | Path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(to_json(ckpt), encoding="utf-8")
    tmp.replace(path)


def load(path: str | Path) -> Checkpoint:
    return from_json(Path(path).read_text(encoding="utf-8"))
