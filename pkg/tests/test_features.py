import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlsum.corpus import Corpus, Sample
from rlsum.features import (
    FeatureError,
    TfidfVector,
    Vocabulary,
    assemble_state,
    fit_vocabulary,
    tokenize,
    vectorize,
)


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("The cat, the CAT.", ["the", "cat", "the", "cat"]),
        ("", []),
        ("p53-mediated apoptosis", ["p53", "mediated", "apoptosis"]),
        ("  --IL-6 (interleukin)!!", ["il", "6", "interleukin"]),
    ],
)
def test_tokenize(text, tokens):
    assert tokenize(text) == tokens


@pytest.fixture
def three_docs():
    # documents: {the, cat}, {the, dog}, {the, cat, sat}
    return Corpus(
        (
            Sample("1", "the cat", ("the.",), ("cat",)),
            Sample("2", "the dog", ("dog.",), ("the",)),
            Sample("3", "the cat sat", ("sat.",), ("cat the",)),
        )
    )


class TestFitVocabulary:
    def test_ranking_by_document_frequency(self, three_docs):
        vocab = fit_vocabulary(three_docs, 10)
        assert vocab.terms == ("the", "cat", "dog", "sat")
        assert vocab.document_frequency == (3, 2, 1, 1)
        assert vocab.num_documents == 3
        assert vocab.term_to_index == {"the": 0, "cat": 1, "dog": 2, "sat": 3}

    def test_truncation(self, three_docs):
        vocab = fit_vocabulary(three_docs, 1)
        assert vocab.dimension == 1 and vocab.terms == ("the",)

    def test_deterministic(self, three_docs):
        assert fit_vocabulary(three_docs, 3).term_to_index == fit_vocabulary(three_docs, 3).term_to_index

    def test_empty_corpus(self):
        with pytest.raises(FeatureError):
            fit_vocabulary(Corpus(()), 10)

    def test_json_round_trip(self, three_docs):
        vocab = fit_vocabulary(three_docs, 10)
        back = Vocabulary.from_json(vocab.to_json())
        assert back == vocab
        assert np.array_equal(back.idf, vocab.idf)


class TestVectorize:
    def test_all_oov(self, three_docs):
        v = vectorize(["zebra", "yak"], fit_vocabulary(three_docs, 10))
        assert len(v) == 0 and v.dimension == 4
        assert np.array_equal(v.to_dense(), np.zeros(4))

    def test_single_token_is_unit(self, three_docs):
        v = vectorize(["dog"], fit_vocabulary(three_docs, 10))
        assert v.indices.tolist() == [2] and v.values.tolist() == [1.0]

    def test_equal_tf_equal_df(self, three_docs):
        v = vectorize(["dog", "sat"], fit_vocabulary(three_docs, 10))
        np.testing.assert_allclose(v.to_dense(), [0, 0, 1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)

    def test_hand_computed_weights(self, three_docs):
        # N=3: idf(the) = ln(4/4)+1 = 1, idf(cat) = ln(4/3)+1, tf(cat) = 2
        w_the, w_cat = 1.0, 2.0 * (math.log(4 / 3) + 1.0)
        norm = math.hypot(w_the, w_cat)
        v = vectorize(["the", "cat", "cat", "unknown"], fit_vocabulary(three_docs, 10))
        np.testing.assert_allclose(v.to_dense(), [w_the / norm, w_cat / norm, 0, 0], rtol=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from(["the", "cat", "dog", "sat", "oov", "x"]), max_size=30))
    def test_nonnegative_and_unit_norm(self, tokens):
        vocab = fit_vocabulary(
            Corpus((Sample("1", "the cat", ("dog",), ("sat",)), Sample("2", "the", ("x",), ("the",)))), 10
        )
        v = vectorize(tokens, vocab)
        assert np.all(v.values >= 0)
        if len(v):
            assert abs(v.norm() - 1.0) < 1e-9
        again = vectorize(tokens, vocab)
        assert np.array_equal(v.values, again.values) and np.array_equal(v.indices, again.indices)


def _unit(index, dim=4):
    return TfidfVector(np.array([index]), np.array([1.0]), dim)


class TestAssembleState:
    def test_zero(self):
        z = TfidfVector.zeros(4)
        s = assemble_state(z, z, z, z, z)
        assert s.shape == (20,) and not s.any()

    def test_candidate_slot(self):
        z = TfidfVector.zeros(4)
        s = assemble_state(_unit(2), z, z, z, z)
        assert np.flatnonzero(s).tolist() == [2]

    def test_question_slot_offset(self):
        z = TfidfVector.zeros(4)
        s = assemble_state(z, z, z, z, _unit(1))
        assert np.flatnonzero(s).tolist() == [4 * 4 + 1]

    def test_dimension_mismatch_names_slot(self):
        z = TfidfVector.zeros(4)
        with pytest.raises(FeatureError, match="remaining"):
            assemble_state(z, z, z, TfidfVector.zeros(3), z)

    @pytest.mark.parametrize("slot", range(5))
    def test_slots_are_independent(self, slot):
        rng = np.random.default_rng(slot)
        base = [TfidfVector.from_dense(rng.random(6)) for _ in range(5)]
        s0 = assemble_state(*base)
        perturbed = list(base)
        perturbed[slot] = TfidfVector.from_dense(rng.random(6))
        changed = np.flatnonzero(assemble_state(*perturbed) != s0)
        assert changed.size and changed.min() >= 6 * slot and changed.max() < 6 * (slot + 1)
