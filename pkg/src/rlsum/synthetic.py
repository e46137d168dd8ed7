"""Generated question/answer corpora with a single matching sentence per sample.

Each sample has ``n_sentences`` candidates. Exactly one (the answer) shares
``overlap`` content words with the question; every other sentence shares none.
The answer sentence is also the only reference summary, so the best summary
scores ROUGE-L 1.0.

Content words come from a topic lexicon (questions, answers) and, when
``filler_size > 0``, a background lexicon that fills the distractor sentences
apart from ``distractor_topic_words`` topic words each. With
``filler_size=0`` distractors use topic words only and the matching sentence
is identifiable solely through its overlap with the question.
"""

from __future__ import annotations

import itertools

import numpy as np

from .corpus import Corpus, Sample

FUNCTION_WORDS = ("the", "of", "and", "in", "is", "a", "to", "with", "by", "for")
QUESTION_TEMPLATES = (
    "What is the role of {} {} {} in {}?",
    "How does {} affect {} and {} with {}?",
    "Which link between {} {} {} and {} is known?",
)
_ONSETS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


def lexicon(size: int, seed: int = 0) -> list[str]:
    """``size`` distinct pronounceable three-syllable words."""
    syllables = [c + v for c, v in itertools.product(_ONSETS, _VOWELS)]
    rng = np.random.default_rng(seed)
    words: set[str] = set()
    out = []
    while len(out) < size:
        w = "".join(rng.choice(syllables, 3))
        if w not in words:
            words.add(w)
            out.append(w)
    return out


def _sentence(rng: np.random.Generator, content: list[str]) -> str:
    tokens = list(content)
    for _ in range(max(2, len(content) // 2)):
        tokens.insert(int(rng.integers(len(tokens) + 1)), str(rng.choice(FUNCTION_WORDS)))
    text = " ".join(tokens)
    return text[0].upper() + text[1:] + "."


def make_corpus(
    n_samples: int = 200,
    n_sentences: int = 8,
    lexicon_size: int = 40,
    question_words: int = 4,
    overlap: int = 3,
    extra_words: int = 3,
    seed: int = 0,
    id_prefix: str = "syn",
    filler_size: int = 60,
    distractor_topic_words: int = 2,
) -> Corpus:
    if overlap > question_words:
        raise ValueError("overlap cannot exceed question_words")
    rng = np.random.default_rng(seed)
    words = lexicon(lexicon_size + filler_size, seed=0)
    filler = words[lexicon_size:]
    words = words[:lexicon_size]
    samples = []
    for k in range(n_samples):
        q_words = [str(w) for w in rng.choice(words, question_words, replace=False)]
        others = [w for w in words if w not in q_words]
        template = QUESTION_TEMPLATES[int(rng.integers(len(QUESTION_TEMPLATES)))]
        question = template.format(*q_words)

        shared = [str(w) for w in rng.choice(q_words, overlap, replace=False)]
        answer_content = shared + [str(w) for w in rng.choice(others, extra_words, replace=False)]
        rng.shuffle(answer_content)
        answer = _sentence(rng, answer_content)

        sentences = []
        for _ in range(n_sentences - 1):
            n_words = overlap + extra_words + int(rng.integers(-1, 2))
            if filler:
                k_topic = min(distractor_topic_words, n_words)
                picked = [str(w) for w in rng.choice(others, k_topic, replace=False)]
                picked += [str(w) for w in rng.choice(filler, n_words - k_topic, replace=False)]
                rng.shuffle(picked)
            else:
                picked = [str(w) for w in rng.choice(others, n_words, replace=False)]
            sentences.append(_sentence(rng, picked))
        sentences.insert(int(rng.integers(n_sentences)), answer)
        if len(set(sentences)) != len(sentences):
            raise RuntimeError("generated duplicate sentences; change the seed")
        samples.append(Sample(f"{id_prefix}{k:04d}", question, tuple(sentences), (answer,)))
    return Corpus(tuple(samples), f"synthetic(seed={seed})")
