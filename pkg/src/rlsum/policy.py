"""One-hidden-layer relu network with a logistic output for Pr(skip).

    h      = max(0, s @ W_s + b_s)
    Pr(a=0) = sigmoid(h @ W_h + b_h)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_HIDDEN = 200

# Keeps pr_a0 strictly inside (0, 1) once the logistic saturates in float64.
_PR_EPS = 2.0**-53


class PolicyError(ValueError):
    pass


@dataclass
class _Tensors:
    W_s: np.ndarray
    b_s: np.ndarray
    W_h: np.ndarray
    b_h: float

    def arrays(self) -> tuple[np.ndarray, ...]:
        return self.W_s, self.b_s, self.W_h, np.asarray(self.b_h, dtype=np.float64)

    @classmethod
    def from_arrays(cls, arrays):
        W_s, b_s, W_h, b_h = arrays
        return cls(W_s, b_s, W_h, float(b_h))

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())

    def copy(self):
        return type(self).from_arrays([np.array(a, copy=True) for a in self.arrays()])

    def zeros_like(self):
        return type(self).from_arrays([np.zeros_like(a) for a in self.arrays()])

    def shapes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(np.shape(a) for a in self.arrays())

    def equal(self, other) -> bool:
        """Bitwise equality of every tensor."""
        return all(
            np.array_equal(a, b) for a, b in zip(self.arrays(), other.arrays())
        )


@dataclass
class PolicyParams(_Tensors):
    @property
    def state_dim(self) -> int:
        return self.W_s.shape[0]

    @property
    def hidden(self) -> int:
        return self.W_s.shape[1]

    def __post_init__(self):
        D, H = np.shape(self.W_s)
        if np.shape(self.b_s) != (H,) or np.shape(self.W_h) != (H,):
            raise PolicyError(
                f"inconsistent shapes W_s={np.shape(self.W_s)} b_s={np.shape(self.b_s)} "
                f"W_h={np.shape(self.W_h)}"
            )


@dataclass
class Gradient(_Tensors):
    pass


@dataclass(frozen=True)
class ForwardCache:
    pre_activation: np.ndarray
    hidden: np.ndarray
    logit: float
    pr_a0: float


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


def softplus(z: float) -> float:
    return max(z, 0.0) + np.log1p(np.exp(-abs(z)))


def init_params(state_dim: int, hidden: int = DEFAULT_HIDDEN, seed: int = 0) -> PolicyParams:
    """Glorot-uniform weights and zero biases."""
    if state_dim < 1 or hidden < 1:
        raise PolicyError("state_dim and hidden must be >= 1")
    rng = np.random.default_rng(seed)
    lim_s = np.sqrt(6.0 / (state_dim + hidden))
    lim_h = np.sqrt(6.0 / (hidden + 1))
    W_s = rng.uniform(-lim_s, lim_s, size=(state_dim, hidden))
    W_h = rng.uniform(-lim_h, lim_h, size=hidden)
    return PolicyParams(W_s, np.zeros(hidden), W_h, 0.0)


def forward(params: PolicyParams, s: np.ndarray) -> ForwardCache:
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (params.state_dim,):
        raise PolicyError(f"state has shape {s.shape}, policy expects ({params.state_dim},)")
    pre = s @ params.W_s + params.b_s
    h = np.maximum(pre, 0.0)
    logit = float(h @ params.W_h + params.b_h)
    pr = min(max(float(sigmoid(logit)), _PR_EPS), 1.0 - _PR_EPS)
    return ForwardCache(pre, h, logit, pr)


def cross_entropy(logit: float, y: int) -> float:
    """-[y ln p + (1-y) ln(1-p)] with p = sigmoid(logit), evaluated stably."""
    return float(softplus(logit) - y * logit)


def cross_entropy_grad(
    params: PolicyParams, s: np.ndarray, y: int, cache: ForwardCache | None = None
) -> Gradient:
    """Gradient of ``cross_entropy(logit, y)`` with respect to every parameter."""
    if cache is None:
        cache = forward(params, s)
    delta = float(sigmoid(cache.logit)) - y
    d_pre = delta * params.W_h * (cache.pre_activation > 0.0)
    return Gradient(np.outer(s, d_pre), d_pre, delta * cache.hidden, delta)


def sparse_grad_rows(
    params: PolicyParams, s: np.ndarray, y: int, cache: ForwardCache
) -> tuple[np.ndarray, np.ndarray, Gradient]:
    """Same gradient as :func:`cross_entropy_grad`, with W_s restricted to rows where s != 0.

    Returns ``(rows, W_s_rows, grad)`` where ``grad.W_s`` is left empty.
    """
    delta = float(sigmoid(cache.logit)) - y
    d_pre = delta * params.W_h * (cache.pre_activation > 0.0)
    rows = np.flatnonzero(s)
    block = np.outer(s[rows], d_pre)
    return rows, block, Gradient(np.empty((0, params.hidden)), d_pre, delta * cache.hidden, delta)


def act_greedy(params: PolicyParams, s: np.ndarray) -> int:
    """Select (1) iff Pr(a=0) < 0.5; a tie skips."""
    return 1 if forward(params, s).pr_a0 < 0.5 else 0


def params_to_json(params: PolicyParams) -> dict:
    return {
        "state_dim": params.state_dim,
        "hidden": params.hidden,
        "W_s": params.W_s.ravel().tolist(),
        "b_s": params.b_s.tolist(),
        "W_h": params.W_h.tolist(),
        "b_h": float(params.b_h),
    }


def params_from_json(obj: dict) -> PolicyParams:
    D, H = int(obj["state_dim"]), int(obj["hidden"])
    W_s = np.asarray(obj["W_s"], dtype=np.float64)
    if W_s.size != D * H:
        raise PolicyError(f"W_s holds {W_s.size} values, expected {D}x{H}")
    return PolicyParams(
        W_s.reshape(D, H),
        np.asarray(obj["b_s"], dtype=np.float64),
        np.asarray(obj["W_h"], dtype=np.float64),
        float(obj["b_h"]),
    )

