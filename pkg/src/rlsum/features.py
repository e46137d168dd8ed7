"""Tokenisation, tf.idf vocabulary fitting and the five-slot policy state."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus

VOCAB_VERSION = 1
DEFAULT_MAX_TERMS = 1000
MAX_TERMS_LIMIT = 10000

# Slot order inside the state vector.
SLOTS = ("candidate", "whole_input", "summary_so_far", "remaining", "question")

_NON_ALNUM = re.compile(r"[^0-9a-z]+")


class FeatureError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    return [t for t in _NON_ALNUM.split(text.lower()) if t]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    document_frequency: tuple[int, ...]
    num_documents: int
    max_terms: int

    def __post_init__(self):
        if self.num_documents < 1:
            raise FeatureError("num_documents must be >= 1")
        if len(self.terms) != len(self.document_frequency):
            raise FeatureError("terms and document_frequency differ in length")
        object.__setattr__(self, "term_to_index", {t: i for i, t in enumerate(self.terms)})
        df = np.asarray(self.document_frequency, dtype=np.float64)
        object.__setattr__(self, "idf", np.log((1.0 + self.num_documents) / (1.0 + df)) + 1.0)

    @property
    def dimension(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {
            "version": VOCAB_VERSION,
            "max_terms": self.max_terms,
            "num_documents": self.num_documents,
            "terms": [
                {"term": t, "index": i, "df": df}
                for i, (t, df) in enumerate(zip(self.terms, self.document_frequency))
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Vocabulary":
        if obj.get("version") != VOCAB_VERSION:
            raise FeatureError(f"unsupported vocabulary version {obj.get('version')!r}")
        entries = sorted(obj["terms"], key=lambda e: e["index"])
        if [e["index"] for e in entries] != list(range(len(entries))):
            raise FeatureError("vocabulary indices must be contiguous from 0")
        return cls(
            tuple(e["term"] for e in entries),
            tuple(int(e["df"]) for e in entries),
            int(obj["num_documents"]),
            int(obj["max_terms"]),
        )


def sample_document(sample) -> list[str]:
    text = " ".join([sample.question, *sample.sentences, *sample.ideal_summaries])
    return tokenize(text)


def fit_vocabulary(train: Corpus, max_terms: int = DEFAULT_MAX_TERMS) -> Vocabulary:
    """Keep the ``max_terms`` terms with the highest document frequency.

    Each sample contributes one document (question, sentences and ideal
    summaries). Ties are broken lexicographically.
    """
    if len(train) == 0:
        raise FeatureError("cannot fit a vocabulary on an empty corpus")
    if not 1 <= max_terms <= MAX_TERMS_LIMIT:
        raise FeatureError(f"max_terms must lie in [1, {MAX_TERMS_LIMIT}]")
    df: Counter[str] = Counter()
    for sample in train:
        df.update(set(sample_document(sample)))
    ranked = sorted(df.items(), key=lambda kv: (-kv[1], kv[0]))[:max_terms]
    return Vocabulary(
        tuple(t for t, _ in ranked),
        tuple(c for _, c in ranked),
        len(train),
        max_terms,
    )


@dataclass(frozen=True)
class TfidfVector:
    """Sparse nonnegative vector; ``indices`` strictly increasing."""

    indices: np.ndarray
    values: np.ndarray
    dimension: int

    @classmethod
    def zeros(cls, dimension: int) -> "TfidfVector":
        return cls(np.empty(0, dtype=np.int64), np.empty(0), dimension)

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "TfidfVector":
        idx = np.flatnonzero(dense)
        return cls(idx, dense[idx].copy(), dense.shape[0])

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dimension)
        out[self.indices] = self.values
        return out

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def __len__(self) -> int:
        return len(self.indices)


def term_counts(tokens: Iterable[str], vocab: Vocabulary) -> np.ndarray:
    counts = np.zeros(vocab.dimension)
    index = vocab.term_to_index
    for tok in tokens:
        i = index.get(tok)
        if i is not None:
            counts[i] += 1.0
    return counts


def tfidf_from_counts(counts: np.ndarray, vocab: Vocabulary) -> TfidfVector:
    """tf.idf of a raw count vector, L2-normalised when nonzero."""
    weights = counts * vocab.idf
    norm = math.sqrt(float(np.dot(weights, weights)))
    if norm > 0.0:
        weights = weights / norm
    return TfidfVector.from_dense(weights)


def vectorize(tokens: Sequence[str], vocab: Vocabulary) -> TfidfVector:
    return tfidf_from_counts(term_counts(tokens, vocab), vocab)


def assemble_state(
    candidate: TfidfVector,
    whole_input: TfidfVector,
    summary_so_far: TfidfVector,
    remaining: TfidfVector,
    question: TfidfVector,
) -> np.ndarray:
    """Dense state of length ``5 * V`` with slots in the order of ``SLOTS``."""
    parts = (candidate, whole_input, summary_so_far, remaining, question)
    dim = candidate.dimension
    for name, vec in zip(SLOTS, parts):
        if vec.dimension != dim:
            raise FeatureError(f"slot {name!r} has dimension {vec.dimension}, expected {dim}")
    state = np.zeros(len(SLOTS) * dim)
    for k, vec in enumerate(parts):
        state[k * dim + vec.indices] = vec.values
    return state
