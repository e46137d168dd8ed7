"""ROUGE-L over whole token sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f_measure: float


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Longest common subsequence length, O(|a||b|) time, O(min(|a|,|b|)) memory."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        left = 0
        for j, y in enumerate(b):
            if x == y:
                left = prev[j] + 1
            elif prev[j + 1] > left:
                left = prev[j + 1]
            cur.append(left)
        prev = cur
    return prev[-1]


def f_from_pr(precision: float, recall: float, beta: float = 1.0) -> float:
    if precision == recall:
        return precision
    b2 = beta * beta
    denom = recall + b2 * precision
    if denom == 0.0:
        return 0.0
    return (1.0 + b2) * recall * precision / denom


def rouge_l(candidate: Sequence[str], reference: Sequence[str], beta: float = 1.0) -> RougeScore:
    if beta <= 0:
        raise ValueError("beta must be positive")
    lcs = lcs_length(candidate, reference)
    recall = lcs / len(reference) if reference else 0.0
    precision = lcs / len(candidate) if candidate else 0.0
    return RougeScore(precision, recall, f_from_pr(precision, recall, beta))


def best_reference(
    candidate: Sequence[str], references: Sequence[Sequence[str]], beta: float = 1.0
) -> RougeScore:
    """Per-reference score with the highest F-measure (first one on ties)."""
    if not references:
        raise ValueError("at least one reference is required")
    return max((rouge_l(candidate, r, beta) for r in references), key=lambda s: s.f_measure)


def rouge_l_multi(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    beta: float = 1.0,
    aggregate: str = "max",
) -> float:
    if not references:
        raise ValueError("at least one reference is required")
    scores = [rouge_l(candidate, r, beta).f_measure for r in references]
    if aggregate == "max":
        return max(scores)
    if aggregate == "mean":
        return sum(scores) / len(scores)
    raise ValueError(f"unknown aggregate {aggregate!r}")
