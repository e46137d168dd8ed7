"""Gradient accumulation, plain gradient descent and Adam."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .policy import Gradient, PolicyParams


class OptimError(ValueError):
    pass


@dataclass(frozen=True)
class OptimConfig:
    kind: str = "adam"
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise OptimError(f"optimizer must be 'sgd' or 'adam', got {self.kind!r}")
        if not self.alpha > 0:
            raise OptimError("alpha must be positive")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise OptimError("beta1 and beta2 must lie in [0, 1)")
        if not self.epsilon > 0:
            raise OptimError("epsilon must be positive")


class GradientAccumulator:
    """Running sum of per-step gradients; ``mean()`` is sum / count."""

    def __init__(self, like: PolicyParams | Gradient):
        self._shapes = like.shapes()
        self._sum = Gradient.from_arrays([np.zeros(s) for s in self._shapes])
        self.count = 0

    def _check(self, g: Gradient, W_s_ok: bool = True):
        shapes = g.shapes()
        if shapes[1:] != self._shapes[1:] or (W_s_ok and shapes[0] != self._shapes[0]):
            raise OptimError(f"gradient shapes {shapes} do not match {self._shapes}")

    def add(self, g: Gradient) -> "GradientAccumulator":
        self._check(g)
        self._sum.W_s += g.W_s
        self._add_small(g)
        return self

    def add_rows(self, rows: np.ndarray, block: np.ndarray, g: Gradient) -> "GradientAccumulator":
        """Add a gradient whose W_s is nonzero only on ``rows`` (given as ``block``)."""
        self._check(g, W_s_ok=False)
        self._sum.W_s[rows] += block
        self._add_small(g)
        return self

    def _add_small(self, g: Gradient):
        self._sum.b_s += g.b_s
        self._sum.W_h += g.W_h
        self._sum.b_h += g.b_h
        self.count += 1

    def mean(self) -> Gradient:
        if self.count == 0:
            raise OptimError("no gradients accumulated")
        return Gradient.from_arrays([a / self.count for a in self._sum.arrays()])

    def clear(self) -> None:
        for a in self._sum.arrays()[:3]:
            a.fill(0.0)
        self._sum.b_h = 0.0
        self.count = 0


def accumulate(acc: GradientAccumulator, g: Gradient) -> GradientAccumulator:
    return acc.add(g)


def scale(g: Gradient, r: float) -> Gradient:
    return Gradient.from_arrays([r * a for a in g.arrays()])


def _require_finite(*tensor_sets):
    for t in tensor_sets:
        if not t.is_finite():
            raise OptimError(f"non-finite values in {type(t).__name__}")


def sgd_update(params: PolicyParams, mean_grad: Gradient, r: float, alpha: float) -> PolicyParams:
    """theta - alpha * r * mean_grad."""
    if not (np.isfinite(r) and np.isfinite(alpha)):
        raise OptimError("reward and alpha must be finite")
    _require_finite(params, mean_grad)
    step = alpha * r
    return PolicyParams.from_arrays(
        [p - step * g for p, g in zip(params.arrays(), mean_grad.arrays())]
    )


@dataclass
class AdamState:
    m: Gradient
    v: Gradient
    t: int = 0

    @classmethod
    def zeros(cls, params: PolicyParams) -> "AdamState":
        return cls(Gradient.from_arrays([np.zeros_like(a) for a in params.arrays()]),
                   Gradient.from_arrays([np.zeros_like(a) for a in params.arrays()]), 0)


def adam_update(
    state: AdamState, params: PolicyParams, scaled_grad: Gradient, cfg: OptimConfig
) -> tuple[AdamState, PolicyParams]:
    """One bias-corrected Adam step on ``scaled_grad`` (already multiplied by the reward)."""
    _require_finite(params, scaled_grad)
    t = state.t + 1
    b1, b2 = cfg.beta1, cfg.beta2
    bc1 = 1.0 - b1**t
    bc2 = 1.0 - b2**t
    new_m, new_v, new_p = [], [], []
    for p, g, m, v in zip(params.arrays(), scaled_grad.arrays(), state.m.arrays(), state.v.arrays()):
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        new_p.append(p - cfg.alpha * m_hat / (np.sqrt(v_hat) + cfg.epsilon))
        new_m.append(m)
        new_v.append(v)
    return (
        AdamState(Gradient.from_arrays(new_m), Gradient.from_arrays(new_v), t),
        PolicyParams.from_arrays(new_p),
    )


def adam_state_to_json(state: AdamState) -> dict:
    def flat(g):
        return [a.ravel().tolist() if a.ndim else float(a) for a in g.arrays()]

    return {"t": state.t, "m": flat(state.m), "v": flat(state.v)}


def adam_state_from_json(obj: dict, params: PolicyParams) -> AdamState:
    def unflat(values):
        arrs = [np.asarray(x, dtype=np.float64).reshape(np.shape(p)) for x, p in zip(values, params.arrays())]
        return Gradient.from_arrays(arrs)

    return AdamState(unflat(obj["m"]), unflat(obj["v"]), int(obj["t"]))
