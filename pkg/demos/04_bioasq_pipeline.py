# %% [markdown]
# # End to end through the command line
#
# BioASQ Phase B files are not redistributed, so this writes a small file in
# the same schema, then runs `ingest`, `train`, `eval`, `summarize` and
# `score` exactly as a shell user would (`rlsum <command> ...`).

# %%
import json
import tempfile
from pathlib import Path

from rlsum.cli import main
from rlsum.synthetic import make_corpus

work = Path(tempfile.mkdtemp(prefix="rlsum-demo-"))
questions = []
for s in make_corpus(120, seed=5):
    half = len(s.sentences) // 2
    questions.append(
        {
            "id": s.id,
            "body": s.question,
            "snippets": [{"text": " ".join(s.sentences[:half])}, {"text": " ".join(s.sentences[half:])}],
            "ideal_answer": list(s.ideal_summaries),
        }
    )
questions.append({"id": "empty", "body": "Unanswerable?", "snippets": [], "ideal_answer": "n/a"})
(work / "bioasq.json").write_text(json.dumps({"questions": questions}))

# %%
main(["ingest", str(work / "bioasq.json"), str(work / "corpus.json")])
main(["train", str(work / "corpus.json"), "--checkpoint-out", str(work / "model.json"),
      "--metrics-out", str(work / "metrics.csv"), "--steps", "20000", "--eval-interval", "4000"])
print((work / "metrics.csv").read_text().splitlines()[0])
print("\n".join(ln for ln in (work / "metrics.csv").read_text().splitlines() if ln.endswith("eval")))

# %%
main(["eval", str(work / "corpus.json"), str(work / "model.json"), "--split", "test"])

# %%
sample = json.loads((work / "corpus.json").read_text())[0]
main(["summarize", str(work / "model.json"), "--question", sample["question"],
      "--document", " ".join(sample["sentences"])])
(work / "cand.txt").write_text(sample["sentences"][0])
(work / "ref.txt").write_text(sample["ideal_summaries"][0])
main(["score", str(work / "cand.txt"), str(work / "ref.txt")])
