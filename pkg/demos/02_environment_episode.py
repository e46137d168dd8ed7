# %% [markdown]
# # One episode by hand
#
# The environment walks over the candidate sentences. Each step the agent
# says skip (0) or select (1); only the final step pays, with the ROUGE-L of
# the selected sentences against the ideal answers.

# %%
import numpy as np

from rlsum.env import SummaryEnv
from rlsum.features import SLOTS, fit_vocabulary
from rlsum.synthetic import make_corpus

corpus = make_corpus(20, seed=0)
vocab = fit_vocabulary(corpus)
sample = corpus[0]
print("Q:", sample.question)
for i, s in enumerate(sample.sentences):
    print(f"  [{i}] {s}")
print("reference:", sample.ideal_summaries[0])

# %% [markdown]
# The state is five tf.idf blocks of length V: candidate, whole input,
# summary so far, remaining sentences, question.

# %%
env = SummaryEnv(vocab)
state = env.reset(sample)
V = vocab.dimension
for k, name in enumerate(SLOTS):
    block = state[k * V : (k + 1) * V]
    print(f"{name:>15}: {np.count_nonzero(block)} nonzero terms, norm {np.linalg.norm(block):.3f}")

# %% [markdown]
# Select only the answer sentence, then compare with selecting everything.

# %%
answer = sample.sentences.index(sample.ideal_summaries[0])
for policy_name, decisions in [
    ("answer only", [int(i == answer) for i in range(len(sample.sentences))]),
    ("everything", [1] * len(sample.sentences)),
    ("nothing", [0] * len(sample.sentences)),
]:
    env.reset(sample)
    rewards = [env.step(a).reward for a in decisions]
    print(f"{policy_name:>12}: rewards per step {[round(r, 3) for r in rewards]}")
