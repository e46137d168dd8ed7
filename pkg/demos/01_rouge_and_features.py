# %% [markdown]
# # Text pipeline: tokens, tf.idf and ROUGE-L
#
# The reward and the state share one tokenizer: lowercase, split on anything
# that is not a letter or digit.

# %%
from rlsum.corpus import Corpus, Sample, split_sentences
from rlsum.features import fit_vocabulary, tokenize, vectorize
from rlsum.rouge import lcs_length, rouge_l, rouge_l_multi

print(tokenize("p53-mediated apoptosis, e.g. in TUMOURS."))
print(split_sentences("Dr. Smith, e.g. here, agrees. Next point. 3 more follow!"))

# %% [markdown]
# ## Vocabulary and tf.idf vectors
#
# One document per sample (question + sentences + ideal answers). Terms are
# ranked by document frequency; weights are raw tf times smoothed idf, then
# L2-normalised.

# %%
corpus = Corpus(
    (
        Sample("a", "What binds p53?", ("MDM2 binds p53.", "p53 is a protein."), ("MDM2 binds p53.",)),
        Sample("b", "What is insulin?", ("Insulin is a hormone.",), ("A hormone.",)),
    )
)
vocab = fit_vocabulary(corpus, max_terms=50)
print(list(zip(vocab.terms, vocab.document_frequency))[:6])
v = vectorize(tokenize("MDM2 binds p53 p53"), vocab)
print({vocab.terms[i]: round(float(w), 3) for i, w in zip(v.indices, v.values)}, "norm", round(v.norm(), 12))

# %% [markdown]
# ## ROUGE-L
#
# Plain LCS over the whole token sequences; the reward is the F-measure
# (beta = 1) against the best-matching reference.

# %%
cand, ref = tokenize("the cat sat"), tokenize("the cat ate")
print("lcs", lcs_length(cand, ref), rouge_l(cand, ref))
print("multi", rouge_l_multi(tokenize("mdm2 binds p53"), [tokenize("p53"), tokenize("MDM2 binds p53.")]))
