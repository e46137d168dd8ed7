"""Policy-gradient training with a decaying exploration perturbation, plus evaluation."""

from __future__ import annotations

import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .corpus import Corpus, Sample
from .env import SummaryEnv
from .features import Vocabulary
from .optim import AdamState, GradientAccumulator, OptimConfig, adam_update, scale, sgd_update
from .policy import (
    DEFAULT_HIDDEN,
    PolicyParams,
    act_greedy,
    forward,
    init_params,
    sparse_grad_rows,
)

log = logging.getLogger(__name__)

SAMPLING_MODES = ("consistent", "literal")


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PerturbationSchedule:
    p0: float = 0.2
    scale: int = 3000

    def __call__(self, counter: int) -> float:
        return perturbation(self, counter)


def perturbation(schedule: PerturbationSchedule, counter: int) -> float:
    """p0 * scale / (scale + counter)."""
    if counter < 0:
        raise ValueError("counter must be >= 0")
    return schedule.p0 * schedule.scale / (schedule.scale + counter)


def perturbed_prob(pr: float, p: float) -> float:
    """Squash ``pr`` towards 1/2: (pr + p) / (1 + 2p)."""
    return (pr + p) / (1.0 + 2.0 * p)


def sample_action(
    pr_a0: float, p: float, rng: np.random.Generator, mode: str = "consistent"
) -> tuple[int, int]:
    """Draw an exploratory action and the matching target for the Pr(a=0) output.

    ``consistent`` draws "select" with the perturbed Pr(a=1). ``literal`` draws
    "select" with the perturbed Pr(a=0), as the algorithm listing is typeset.
    Either way the target is ``y = 1 - action``.
    """
    if mode == "consistent":
        q = perturbed_prob(1.0 - pr_a0, p)
    elif mode == "literal":
        q = perturbed_prob(pr_a0, p)
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    xi = 1 if rng.random() < q else 0
    return xi, 1 - xi


@dataclass(frozen=True)
class TrainConfig:
    steps_budget: int = 50_000
    hidden: int = DEFAULT_HIDDEN
    p0: float = 0.2
    p_scale: int = 3000
    max_sentences: int = 30
    seed: int = 0
    eval_interval: int = 5000
    window: int = 1000
    optimizer: OptimConfig = field(default_factory=OptimConfig)
    sampling_mode: str = "consistent"
    beta: float = 1.0
    aggregate: str = "max"

    def __post_init__(self):
        if not 0.0 <= self.p0 <= 0.5:
            raise ValueError("p0 must lie in [0, 0.5]")
        if self.p_scale < 1:
            raise ValueError("p_scale must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.steps_budget < 0 or self.eval_interval < 0:
            raise ValueError("steps_budget and eval_interval must be >= 0")
        if self.hidden < 1:
            raise ValueError("hidden must be >= 1")
        if self.sampling_mode not in SAMPLING_MODES:
            raise ValueError(f"sampling_mode must be one of {SAMPLING_MODES}")

    @property
    def schedule(self) -> PerturbationSchedule:
        return PerturbationSchedule(self.p0, self.p_scale)


@dataclass(frozen=True)
class MetricsRow:
    step: int
    episodes: int
    reward: float
    moving_avg: float
    p: float
    phase: str

    HEADER = "step,episodes,reward,moving_avg,p,phase"

    def to_csv(self) -> str:
        return (
            f"{self.step},{self.episodes},{self.reward:.6f},"
            f"{self.moving_avg:.6f},{self.p:.6f},{self.phase}"
        )


def greedy_episode(params: PolicyParams, env: SummaryEnv, sample: Sample) -> tuple[list[int], float]:
    s = env.reset(sample)
    while True:
        res = env.step(act_greedy(params, s))
        if res.done:
            return list(env.decisions), res.reward
        s = res.state


def evaluate(
    params: PolicyParams,
    corpus: Corpus,
    vocab: Vocabulary,
    beta: float = 1.0,
    aggregate: str = "max",
    workers: int = 1,
    on_episode: Callable | None = None,
) -> tuple[float, list[float]]:
    """Greedy-policy mean ROUGE-L over ``corpus``; results come back in corpus order."""
    if len(corpus) == 0:
        raise ValueError("cannot evaluate on an empty corpus")

    def chunk(samples: Sequence[Sample]):
        env = SummaryEnv(vocab, beta, aggregate)
        return [greedy_episode(params, env, s) for s in samples]

    samples = list(corpus.samples)
    if workers <= 1:
        results = chunk(samples)
    else:
        parts = [samples[k::workers] for k in range(workers)]
        with ThreadPoolExecutor(workers) as pool:
            done = list(pool.map(chunk, parts))
        results = [None] * len(samples)
        for k, part in enumerate(done):
            results[k::workers] = part
    scores = [r for _, r in results]
    if on_episode is not None:
        for sample, (decisions, reward) in zip(samples, results):
            on_episode(sample.id, decisions, reward, "eval")
    return float(np.mean(scores)), scores


def evaluate_random(
    corpus: Corpus,
    vocab: Vocabulary,
    seed: int = 0,
    select_prob: float = 0.5,
    repeats: int = 1,
    beta: float = 1.0,
    aggregate: str = "max",
) -> tuple[float, list[float]]:
    """Mean ROUGE-L of a policy that selects each sentence independently with ``select_prob``."""
    rng = np.random.default_rng(seed)
    env = SummaryEnv(vocab, beta, aggregate)
    scores = []
    for sample in corpus:
        total = 0.0
        for _ in range(repeats):
            env.reset(sample)
            decisions = (rng.random(len(sample.sentences)) < select_prob).astype(int).tolist()
            total += env.score(decisions)
        scores.append(total / repeats)
    return float(np.mean(scores)), scores


class Trainer:
    """Mutable training loop state.

    One decision per ``step``; parameters change only when an episode ends,
    using the reward-scaled mean of that episode's cross-entropy gradients.
    """

    def __init__(
        self,
        train_corpus: Corpus,
        vocab: Vocabulary,
        cfg: TrainConfig,
        eval_corpus: Corpus | None = None,
        params: PolicyParams | None = None,
    ):
        if len(train_corpus) == 0:
            raise ValueError("training corpus is empty")
        self.corpus = train_corpus
        self.vocab = vocab
        self.cfg = cfg
        self.eval_corpus = eval_corpus
        init_seq, loop_seq = np.random.SeedSequence(cfg.seed).spawn(2)
        state_dim = 5 * vocab.dimension
        if params is None:
            params = init_params(state_dim, cfg.hidden, int(init_seq.generate_state(1)[0]))
        elif params.state_dim != state_dim:
            raise ValueError(f"params expect state_dim {params.state_dim}, vocabulary gives {state_dim}")
        self.initial_params = params.copy()
        self.params = params
        self.adam = AdamState.zeros(params) if cfg.optimizer.kind == "adam" else None
        self.rng = np.random.default_rng(loop_seq)
        self.env = SummaryEnv(vocab, cfg.beta, cfg.aggregate)
        self.acc = GradientAccumulator(params)
        self.step = 0
        self.episodes = 0
        self.recent = deque(maxlen=cfg.window)
        self.metrics: list[MetricsRow] = []
        self.on_row: Callable[[MetricsRow], None] | None = None
        self.on_eval: Callable[["Trainer"], None] | None = None
        self.on_episode: Callable | None = None
        self._sample_index: int | None = None
        self._state: np.ndarray | None = None

    @property
    def moving_avg(self) -> float:
        return sum(self.recent) / len(self.recent) if self.recent else 0.0

    @property
    def in_episode(self) -> bool:
        return self._sample_index is not None

    def _emit(self, row: MetricsRow):
        self.metrics.append(row)
        if self.on_row is not None:
            self.on_row(row)

    def _begin_episode(self, index: int | None = None):
        if index is None:
            index = int(self.rng.integers(len(self.corpus)))
        self._sample_index = index
        self._state = self.env.reset(self.corpus[index])
        self.acc.clear()

    def _decide(self, s: np.ndarray, p: float, action: int | None = None) -> int:
        cache = forward(self.params, s)
        if not math.isfinite(cache.logit):
            raise TrainingError(
                f"non-finite logit at step {self.step} (sample "
                f"{self.corpus[self._sample_index].id!r}, |W_s|={np.linalg.norm(self.params.W_s):.3e}, "
                f"|W_h|={np.linalg.norm(self.params.W_h):.3e}, b_h={self.params.b_h!r})"
            )
        if action is None:
            action, y = sample_action(cache.pr_a0, p, self.rng, self.cfg.sampling_mode)
        else:
            y = 1 - action
        rows, block, g = sparse_grad_rows(self.params, s, y, cache)
        self.acc.add_rows(rows, block, g)
        return action

    def _update(self, reward: float):
        mean_grad = self.acc.mean()
        opt = self.cfg.optimizer
        if opt.kind == "sgd":
            self.params = sgd_update(self.params, mean_grad, reward, opt.alpha)
        else:
            self.adam, self.params = adam_update(self.adam, self.params, scale(mean_grad, reward), opt)
        if not self.params.is_finite():
            raise TrainingError(f"non-finite parameters after update at step {self.step}")

    def _finish_episode(self, reward: float, p: float):
        self._update(reward)
        self.episodes += 1
        self.recent.append(reward)
        if self.on_episode is not None:
            self.on_episode(self.corpus[self._sample_index].id, list(self.env.decisions), reward, "train")
        self._sample_index = None
        self._state = None
        self.acc.clear()
        self._emit(MetricsRow(self.step, self.episodes, reward, self.moving_avg, p, "train"))

    def evaluate_now(self) -> float:
        mean, _ = evaluate(
            self.params, self.eval_corpus, self.vocab, self.cfg.beta, self.cfg.aggregate,
            on_episode=self.on_episode,
        )
        p = perturbation(self.cfg.schedule, self.step)
        self._emit(MetricsRow(self.step, self.episodes, mean, self.moving_avg, p, "eval"))
        log.info("step %d: eval mean ROUGE-L %.4f (train moving avg %.4f)", self.step, mean, self.moving_avg)
        return mean

    def run(self, steps_budget: int | None = None) -> PolicyParams:
        """Make decisions until the global step counter reaches ``steps_budget``."""
        budget = self.cfg.steps_budget if steps_budget is None else steps_budget
        schedule = self.cfg.schedule
        interval = self.cfg.eval_interval
        while self.step < budget:
            if not self.in_episode:
                self._begin_episode()
            p = perturbation(schedule, self.step)
            action = self._decide(self._state, p)
            res = self.env.step(action)
            self.step += 1
            if res.done:
                self._finish_episode(res.reward, p)
            else:
                self._state = res.state
            if interval and self.step % interval == 0:
                if self.eval_corpus is not None and len(self.eval_corpus):
                    self.evaluate_now()
                if self.on_eval is not None:
                    self.on_eval(self)
        return self.params

    # Resumption: an unfinished episode is stored as its sample index and the
    # decisions taken so far, then replayed; params are constant within an
    # episode so the replayed gradients are bitwise identical.

    def training_state(self) -> dict:
        return {
            "step": self.step,
            "episodes": self.episodes,
            "recent": list(self.recent),
            "rng": self.rng.bit_generator.state,
            "pending": None
            if not self.in_episode
            else {"sample_index": self._sample_index, "decisions": list(self.env.decisions)},
        }

    def load_training_state(self, state: dict, adam: AdamState | None = None) -> None:
        self.step = int(state["step"])
        self.episodes = int(state["episodes"])
        self.recent = deque(state["recent"], maxlen=self.cfg.window)
        self.rng.bit_generator.state = state["rng"]
        if adam is not None:
            self.adam = adam
        pending = state.get("pending")
        self._sample_index = None
        if pending is not None:
            self._begin_episode(int(pending["sample_index"]))
            for action in pending["decisions"]:
                self._decide(self._state, 0.0, action=int(action))
                self._state = self.env.step(int(action)).state


def train(
    corpus: Corpus,
    vocab: Vocabulary,
    cfg: TrainConfig,
    eval_corpus: Corpus | None = None,
) -> tuple[PolicyParams, list[MetricsRow]]:
    trainer = Trainer(corpus, vocab, cfg, eval_corpus)
    params = trainer.run()
    return params, trainer.metrics
