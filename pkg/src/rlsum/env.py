"""Episodic sentence-selection environment with a terminal ROUGE-L reward."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Sample
from .features import (
    TfidfVector,
    Vocabulary,
    assemble_state,
    term_counts,
    tfidf_from_counts,
    tokenize,
)
from .rouge import rouge_l_multi

SKIP = 0
SELECT = 1


class EnvError(ValueError):
    pass


class EpisodeDone(RuntimeError):
    """Raised by :meth:`SummaryEnv.step` once every sentence has been decided."""


@dataclass(frozen=True)
class StepResult:
    state: np.ndarray
    reward: float
    done: bool


def build_summary(decisions: Sequence[int], sample: Sample) -> str:
    if len(decisions) != len(sample.sentences):
        raise EnvError(
            f"got {len(decisions)} decisions for {len(sample.sentences)} sentences"
        )
    return " ".join(s for d, s in zip(decisions, sample.sentences) if d == SELECT)


class SummaryEnv:
    """Decides sentences 0..n-1 of a sample one at a time.

    Every step returns reward 0 except the last, which returns the ROUGE-L
    F-measure of the selected sentences against the sample's ideal summaries.
    """

    def __init__(self, vocab: Vocabulary, beta: float = 1.0, aggregate: str = "max"):
        self.vocab = vocab
        self.beta = beta
        self.aggregate = aggregate
        self.sample: Sample | None = None
        self.decisions: list[int] = []
        self.done = True

    @property
    def n(self) -> int:
        return len(self.sample.sentences) if self.sample is not None else 0

    @property
    def cursor(self) -> int:
        return len(self.decisions)

    def reset(self, sample: Sample) -> np.ndarray:
        if not sample.sentences:
            raise EnvError(f"sample {sample.id!r} has no sentences")
        self.sample = sample
        self.decisions = []
        self.done = False
        vocab = self.vocab
        self._counts = np.stack([term_counts(tokenize(s), vocab) for s in sample.sentences])
        self._whole = tfidf_from_counts(self._counts.sum(axis=0), vocab)
        self._question = tfidf_from_counts(term_counts(tokenize(sample.question), vocab), vocab)
        self._references = [tokenize(r) for r in sample.ideal_summaries]
        self._zero = TfidfVector.zeros(vocab.dimension)
        return self._state()

    def _summary_vector(self) -> TfidfVector:
        chosen = [i for i, d in enumerate(self.decisions) if d == SELECT]
        if not chosen:
            return self._zero
        return tfidf_from_counts(self._counts[chosen].sum(axis=0), self.vocab)

    def _state(self) -> np.ndarray:
        i = self.cursor
        if self.done:
            candidate = remaining = self._zero
        else:
            candidate = tfidf_from_counts(self._counts[i], self.vocab)
            if i + 1 < self.n:
                remaining = tfidf_from_counts(self._counts[i + 1 :].sum(axis=0), self.vocab)
            else:
                remaining = self._zero
        return assemble_state(candidate, self._whole, self._summary_vector(), remaining, self._question)

    def step(self, action: int) -> StepResult:
        if self.done:
            raise EpisodeDone("step() called on a finished episode; call reset() first")
        if action not in (SKIP, SELECT):
            raise EnvError(f"action must be 0 or 1, got {action!r}")
        self.decisions.append(int(action))
        reward = 0.0
        if self.cursor == self.n:
            self.done = True
            reward = self.score(self.decisions)
        return StepResult(self._state(), reward, self.done)

    def score(self, decisions: Sequence[int]) -> float:
        summary = tokenize(build_summary(decisions, self.sample))
        return rouge_l_multi(summary, self._references, self.beta, self.aggregate)

    def summary(self) -> str:
        return build_summary(self.decisions, self.sample)
