"""BioASQ ingestion, the normalised corpus format, and train/test splitting."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

DEFAULT_MAX_SENTENCES = 30

# Version of the segmentation rules below; bump when the abbreviation list changes.
SPLITTER_VERSION = 1

ABBREVIATIONS = (
    "e.g.",
    "i.e.",
    "et al.",
    "fig.",
    "figs.",
    "eq.",
    "ref.",
    "refs.",
    "vs.",
    "cf.",
    "approx.",
    "no.",
    "dr.",
    "mr.",
    "mrs.",
    "ms.",
    "prof.",
    "st.",
    "jr.",
    "sr.",
)

_BOUNDARY = re.compile(r"[.!?]+(?=\s+[A-Z0-9])")


class CorpusError(ValueError):
    pass


class CorpusParseError(CorpusError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class CorpusSchemaError(CorpusError):
    def __init__(self, field_name: str, index: int | None, detail: str = "missing"):
        where = "corpus" if index is None else f"question {index}"
        super().__init__(f"{where}: field {field_name!r} {detail}")
        self.field = field_name
        self.index = index


@dataclass(frozen=True)
class Sample:
    id: str
    question: str
    sentences: tuple[str, ...]
    ideal_summaries: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "question": self.question,
            "sentences": list(self.sentences),
            "ideal_summaries": list(self.ideal_summaries),
        }


@dataclass(frozen=True)
class Corpus:
    samples: tuple[Sample, ...]
    provenance: str = ""
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        ids = [s.id for s in self.samples]
        if len(set(ids)) != len(ids):
            raise CorpusError("sample ids must be unique within a corpus")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i: int) -> Sample:
        return self.samples[i]


def _is_abbreviation(prefix: str) -> bool:
    low = prefix.lower()
    for abbr in ABBREVIATIONS:
        if low.endswith(abbr):
            start = len(low) - len(abbr)
            if start == 0 or not low[start - 1].isalnum():
                return True
    return False


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation followed by whitespace and an uppercase letter or digit.

    Splits directly after a word from ``ABBREVIATIONS`` are suppressed.
    """
    pieces = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        end = m.end()
        if _is_abbreviation(text[start:end]):
            continue
        pieces.append(text[start:end])
        start = end
    pieces.append(text[start:])
    return [p.strip() for p in pieces if p.strip()]


def clean_sentences(sentences: Sequence[str], max_sentences: int) -> tuple[str, ...]:
    seen = set()
    kept = []
    for s in sentences:
        s = s.strip()
        if not s or s in seen:
            continue
        seen.add(s)
        kept.append(s)
        if len(kept) == max_sentences:
            break
    return tuple(kept)


def _ideal_answers(value, index: int) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CorpusSchemaError("ideal_answer", index, "must be a string or an array of strings")
    return tuple(v.strip() for v in value if v.strip())


def _decode_json(raw: bytes):
    try:
        text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
    except UnicodeDecodeError as e:
        raise CorpusParseError(f"invalid UTF-8: {e.reason}", e.start) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf-8"))
        if isinstance(raw, bytes) and raw.startswith(b"\xef\xbb\xbf"):
            offset += 3
        raise CorpusParseError(f"malformed JSON: {e.msg}", offset) from e


def ingest_bioasq(
    raw_json_bytes: bytes,
    max_sentences: int = DEFAULT_MAX_SENTENCES,
    provenance: str = "",
) -> Corpus:
    """Normalise a BioASQ Phase B file into a :class:`Corpus`.

    Candidate sentences are the sentence-split snippet texts in document order,
    de-duplicated and truncated to ``max_sentences``. Questions without snippet
    text or without a nonempty ideal answer are dropped and counted in
    ``Corpus.dropped``.
    """
    if max_sentences < 1:
        raise CorpusError("max_sentences must be positive")
    data = _decode_json(raw_json_bytes)
    if not isinstance(data, dict) or "questions" not in data:
        raise CorpusSchemaError("questions", None)
    questions = data["questions"]
    if not isinstance(questions, list):
        raise CorpusSchemaError("questions", None, "must be an array")

    samples = []
    dropped = 0
    for index, q in enumerate(questions):
        if not isinstance(q, dict):
            raise CorpusSchemaError("question", index, "must be an object")
        if "body" not in q:
            raise CorpusSchemaError("body", index)
        if "snippets" not in q:
            raise CorpusSchemaError("snippets", index)
        snippets = q["snippets"]
        if not isinstance(snippets, list):
            raise CorpusSchemaError("snippets", index, "must be an array")
        raw_sentences = []
        for snip in snippets:
            if not isinstance(snip, dict) or "text" not in snip:
                raise CorpusSchemaError("snippets.text", index)
            raw_sentences.extend(split_sentences(snip["text"]))
        ideals = _ideal_answers(q.get("ideal_answer"), index)
        sentences = clean_sentences(raw_sentences, max_sentences)
        if not sentences or not ideals:
            dropped += 1
            continue
        qid = str(q.get("id", f"q{index}"))
        samples.append(Sample(qid, q["body"].strip(), sentences, ideals))
    return Corpus(tuple(samples), provenance, dropped)


def split(corpus: Corpus, test_fraction: float = 0.2, seed: int = 0) -> tuple[Corpus, Corpus]:
    if not 0.0 < test_fraction < 1.0:
        raise CorpusError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if len(corpus) < 2:
        raise CorpusError("splitting needs at least 2 samples")
    order = np.random.default_rng(seed).permutation(len(corpus))
    n_test = int(round(test_fraction * len(corpus)))
    n_test = min(max(n_test, 1), len(corpus) - 1)
    n_train = len(corpus) - n_test
    train = tuple(corpus.samples[i] for i in order[:n_train])
    test = tuple(corpus.samples[i] for i in order[n_train:])
    return (
        Corpus(train, f"{corpus.provenance}#train", 0),
        Corpus(test, f"{corpus.provenance}#test", 0),
    )


def corpus_to_json(corpus: Corpus) -> str:
    return json.dumps([s.to_json() for s in corpus.samples], indent=1, ensure_ascii=False)


def corpus_from_json(text: str | bytes, provenance: str = "") -> Corpus:
    data = _decode_json(text if isinstance(text, bytes) else text.encode("utf-8"))
    if not isinstance(data, list):
        raise CorpusSchemaError("samples", None, "corpus file must be a JSON array")
    samples = []
    for index, obj in enumerate(data):
        for key in ("id", "question", "sentences", "ideal_summaries"):
            if not isinstance(obj, dict) or key not in obj:
                raise CorpusSchemaError(key, index)
        sentences = tuple(obj["sentences"])
        ideals = tuple(obj["ideal_summaries"])
        if not sentences:
            raise CorpusSchemaError("sentences", index, "is empty")
        if not ideals or not all(s.strip() for s in ideals):
            raise CorpusSchemaError("ideal_summaries", index, "must hold nonempty strings")
        samples.append(Sample(str(obj["id"]), obj["question"], sentences, ideals))
    return Corpus(tuple(samples), provenance)


def load_corpus(path: str | Path) -> Corpus:
    path = Path(path)
    return corpus_from_json(path.read_bytes(), provenance=str(path))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(corpus_to_json(corpus) + "\n", encoding="utf-8")


def cap_sentences(corpus: Corpus, max_sentences: int) -> Corpus:
    """Keep only the first ``max_sentences`` sentences of every sample."""
    if max_sentences < 1:
        raise CorpusError("max_sentences must be positive")
    samples = tuple(
        s if len(s.sentences) <= max_sentences
        else Sample(s.id, s.question, s.sentences[:max_sentences], s.ideal_summaries)
        for s in corpus.samples
    )
    return Corpus(samples, corpus.provenance, corpus.dropped)
