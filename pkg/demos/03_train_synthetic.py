# %% [markdown]
# # Learning a global policy on a synthetic corpus
#
# 200 training questions, 8 candidate sentences each; exactly one sentence
# shares three content words with the question and is the reference. We
# train with the default configuration (hidden size 200, Adam, exploration
# perturbation starting at 0.2) and compare greedy decoding on 50 unseen
# questions with a policy that flips a fair coin per sentence.

# %%
import time

from rlsum.corpus import Corpus
from rlsum.features import fit_vocabulary
from rlsum.synthetic import make_corpus
from rlsum.trainer import TrainConfig, Trainer, evaluate, evaluate_random

corpus = make_corpus(250, seed=0)
train_set, held_out = Corpus(corpus.samples[:200]), Corpus(corpus.samples[200:])
vocab = fit_vocabulary(train_set)
print("vocabulary size", vocab.dimension, "-> state dimension", 5 * vocab.dimension)

# %%
trainer = Trainer(train_set, vocab, TrainConfig(steps_budget=50_000, eval_interval=5000), eval_corpus=held_out)
t0 = time.perf_counter()
trainer.run()
print(f"{trainer.step} decisions, {trainer.episodes} episodes in {time.perf_counter() - t0:.0f}s")

# %% [markdown]
# Training curve (moving average of the last 1000 episode rewards) next to
# the held-out greedy mean measured every 5000 steps.

# %%
evals = {r.step: r.reward for r in trainer.metrics if r.phase == "eval"}
train_rows = [r for r in trainer.metrics if r.phase == "train"]
for row in train_rows[:: len(train_rows) // 10]:
    nearest = max((s for s in evals if s <= row.step), default=None)
    test = f"{evals[nearest]:.3f}" if nearest else "  -  "
    print(f"step {row.step:6d}  p={row.p:.3f}  train {row.moving_avg:.3f}  test {test}  " + "#" * int(40 * row.moving_avg))

# %%
greedy, _ = evaluate(trainer.params, held_out, vocab)
coin, _ = evaluate_random(held_out, vocab, seed=1, repeats=20)
print(f"held-out greedy ROUGE-L {greedy:.3f} vs random {coin:.3f}")
