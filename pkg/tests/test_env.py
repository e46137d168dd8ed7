import numpy as np
import pytest

from rlsum.corpus import Sample
from rlsum.env import EnvError, EpisodeDone, SummaryEnv, build_summary
from rlsum.features import fit_vocabulary, tokenize, vectorize
from rlsum.corpus import Corpus
from rlsum.rouge import rouge_l_multi


def _slot(state, k, V):
    return state[k * V : (k + 1) * V]


class TestBuildSummary:
    sample = Sample("s", "q", ("A.", "B.", "C."), ("x",))

    def test_all_zero(self):
        assert build_summary([0, 0, 0], self.sample) == ""

    def test_all_one(self):
        assert build_summary([1, 1, 1], self.sample) == "A. B. C."

    def test_selection(self):
        assert build_summary([1, 0, 1], self.sample) == "A. C."

    def test_length_mismatch(self):
        with pytest.raises(EnvError):
            build_summary([1, 0], self.sample)


class TestReset:
    def test_initial_state_slots(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        sample = toy_corpus[0]
        V = toy_vocab.dimension
        s = env.reset(sample)
        assert s.shape == (5 * V,)
        assert not _slot(s, 2, V).any()
        expect = [
            vectorize(tokenize(sample.sentences[0]), toy_vocab),
            vectorize(tokenize(" ".join(sample.sentences)), toy_vocab),
            None,
            vectorize(tokenize(" ".join(sample.sentences[1:])), toy_vocab),
            vectorize(tokenize(sample.question), toy_vocab),
        ]
        for k, vec in enumerate(expect):
            if vec is not None:
                assert np.array_equal(_slot(s, k, V), vec.to_dense())
        assert env.cursor == 0 and not env.done

    def test_single_sentence_has_no_remaining(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        s = env.reset(toy_corpus[2])
        assert not _slot(s, 3, toy_vocab.dimension).any()

    def test_reset_is_deterministic(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        assert np.array_equal(env.reset(toy_corpus[0]), env.reset(toy_corpus[0]))

    def test_empty_sample(self, toy_vocab):
        with pytest.raises(EnvError):
            SummaryEnv(toy_vocab).reset(Sample("e", "q", (), ("x",)))


class TestStep:
    def test_single_step_episode(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        sample = toy_corpus[2]
        env.reset(sample)
        res = env.step(1)
        assert res.done
        refs = [tokenize(r) for r in sample.ideal_summaries]
        assert res.reward == rouge_l_multi(tokenize(sample.sentences[0]), refs)

    def test_all_skip_reward_zero(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        env.reset(toy_corpus[0])
        rewards = [env.step(0).reward for _ in range(3)]
        assert rewards == [0.0, 0.0, 0.0] and env.done

    def test_reference_equal_to_selection(self):
        sample = Sample("s", "q", ("Alpha beta.", "Gamma delta."), ("Alpha beta. Gamma delta.",))
        vocab = fit_vocabulary(Corpus((sample,)), 100)
        env = SummaryEnv(vocab)
        env.reset(sample)
        assert env.step(1).reward == 0.0
        assert env.step(1).reward == 1.0

    def test_summary_slot_tracks_selection(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        V = toy_vocab.dimension
        sample = toy_corpus[0]
        env.reset(sample)
        s = env.step(1).state
        assert np.array_equal(_slot(s, 2, V), vectorize(tokenize(sample.sentences[0]), toy_vocab).to_dense())
        assert np.array_equal(_slot(s, 0, V), vectorize(tokenize(sample.sentences[1]), toy_vocab).to_dense())
        s = env.step(0).state
        assert np.array_equal(_slot(s, 2, V), vectorize(tokenize(sample.sentences[0]), toy_vocab).to_dense())

    def test_terminal_state_zeroes_candidate_and_remaining(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        V = toy_vocab.dimension
        env.reset(toy_corpus[1])
        env.step(1)
        s = env.step(0).state
        assert not _slot(s, 0, V).any() and not _slot(s, 3, V).any()
        assert _slot(s, 1, V).any() and _slot(s, 2, V).any() and _slot(s, 4, V).any()

    def test_step_after_done(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        env.reset(toy_corpus[2])
        env.step(0)
        with pytest.raises(EpisodeDone):
            env.step(0)

    def test_invalid_action(self, toy_corpus, toy_vocab):
        env = SummaryEnv(toy_vocab)
        env.reset(toy_corpus[0])
        with pytest.raises(EnvError):
            env.step(2)


def test_return_identity_and_replay(synthetic_small):
    vocab = fit_vocabulary(synthetic_small, 1000)
    env = SummaryEnv(vocab)
    rng = np.random.default_rng(0)
    for sample in synthetic_small:
        decisions = rng.integers(0, 2, len(sample.sentences)).tolist()
        rewards, dones = [], []
        env.reset(sample)
        for a in decisions:
            res = env.step(a)
            rewards.append(res.reward)
            dones.append(res.done)
        assert dones == [False] * (len(decisions) - 1) + [True]
        refs = [tokenize(r) for r in sample.ideal_summaries]
        expected = rouge_l_multi(tokenize(build_summary(decisions, sample)), refs)
        assert sum(rewards) == expected and 0.0 <= expected <= 1.0
        assert env.score(decisions) == expected
