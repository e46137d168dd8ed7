"""Global-policy reinforcement learning for query-based extractive summarisation.

A small relu network reads tf.idf views of the candidate sentence, the whole
input, the summary so far, the remaining sentences and the question, and
decides sentence by sentence whether to extract it. Training is a REINFORCE
variant whose only nonzero reward is the ROUGE-L score of the finished summary.
"""

from .corpus import Corpus, Sample, ingest_bioasq, split, split_sentences
from .env import SummaryEnv, build_summary
from .features import Vocabulary, TfidfVector, assemble_state, fit_vocabulary, tokenize, vectorize
from .optim import AdamState, GradientAccumulator, OptimConfig, adam_update, sgd_update
from .policy import PolicyParams, Gradient, act_greedy, cross_entropy_grad, forward, init_params
from .rouge import RougeScore, lcs_length, rouge_l, rouge_l_multi
from .trainer import (
    PerturbationSchedule,
    TrainConfig,
    Trainer,
    evaluate,
    perturbation,
    perturbed_prob,
    sample_action,
    train,
)

__version__ = "0.1.0"
