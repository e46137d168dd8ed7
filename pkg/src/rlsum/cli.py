"""Command line entry point: ``rlsum {ingest,train,eval,summarize,score}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import checkpoint as ckpt_io
from .checkpoint import Checkpoint, CheckpointError
from .config import ConfigError, RunConfig
from .corpus import (
    CorpusError,
    Sample,
    clean_sentences,
    cap_sentences,
    ingest_bioasq,
    load_corpus,
    save_corpus,
    split,
    split_sentences,
)
from .env import SummaryEnv
from .features import FeatureError, fit_vocabulary, tokenize
from .optim import OptimError
from .policy import PolicyError
from .rouge import RougeScore, best_reference, rouge_l
from .trainer import MetricsRow, Trainer, TrainingError, evaluate, greedy_episode

log = logging.getLogger("rlsum")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2

_VALIDATION_ERRORS = (CorpusError, ConfigError, CheckpointError, FeatureError, PolicyError, OptimError)


class UsageError(Exception):
    pass


class _TraceWriter:
    def __init__(self, path: str | None):
        self._fh = open(path, "w", encoding="utf-8") if path else None

    def __call__(self, sample_id, decisions, reward, phase):
        if self._fh is not None:
            rec = {"phase": phase, "sample_id": sample_id, "decisions": decisions, "reward": reward}
            self._fh.write(json.dumps(rec) + "\n")

    def close(self):
        if self._fh is not None:
            self._fh.close()


def cmd_ingest(args) -> int:
    raw = Path(args.input).read_bytes()
    corpus = ingest_bioasq(raw, args.max_sentences, provenance=args.input)
    save_corpus(corpus, args.output)
    print(f"kept {len(corpus)} questions, dropped {corpus.dropped}")
    return EXIT_OK


def _run_config(args) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    return base.override(
        steps=args.steps,
        seed=args.seed,
        alpha=args.alpha,
        hidden=args.hidden,
        max_terms=args.max_terms,
        max_sentences=args.max_sentences,
        test_fraction=args.test_fraction,
        beta=args.beta,
        sampling_mode=args.sampling_mode,
        optimizer=args.optimizer,
        eval_interval=args.eval_interval,
        window=args.window,
    )


def _read_metrics_prefix(path: Path, upto_step: int) -> list[str]:
    if not path.exists():
        return []
    lines = path.read_text(encoding="utf-8").splitlines()
    return [ln for ln in lines[1:] if ln and int(ln.split(",", 1)[0]) <= upto_step]


def cmd_train(args) -> int:
    resume = None
    if args.resume:
        resume = ckpt_io.load(args.resume)
        cfg = RunConfig.from_dict(resume.config)
        if args.steps is not None:
            cfg = cfg.override(steps=args.steps)
    else:
        cfg = _run_config(args)
    corpus = cap_sentences(load_corpus(args.corpus), cfg.max_sentences)
    train_set, test_set = split(corpus, cfg.test_fraction, cfg.seed)
    vocab = fit_vocabulary(train_set, cfg.max_terms)
    tcfg = cfg.train_config()

    if resume is not None:
        if resume.vocab != vocab:
            raise CheckpointError("checkpoint vocabulary differs from the one refitted on this corpus")
        trainer = Trainer(train_set, vocab, tcfg, eval_corpus=test_set, params=resume.params)
        trainer.load_training_state(resume.training, resume.adam)
    else:
        trainer = Trainer(train_set, vocab, tcfg, eval_corpus=test_set)

    metrics_path = Path(args.metrics_out)
    kept = _read_metrics_prefix(metrics_path, trainer.step) if resume is not None else []
    trace = _TraceWriter(args.trace_out)
    fh = open(metrics_path, "w", encoding="utf-8", newline="\n")
    fh.write(MetricsRow.HEADER + "\n")
    for ln in kept:
        fh.write(ln + "\n")

    def write_row(row: MetricsRow):
        fh.write(row.to_csv() + "\n")

    def write_checkpoint(t: Trainer):
        fh.flush()
        ckpt_io.save(
            Checkpoint(t.params, vocab, cfg.to_dict(), t.adam, t.training_state()),
            args.checkpoint_out,
        )

    trainer.on_row = write_row
    trainer.on_eval = write_checkpoint
    trainer.on_episode = trace if args.trace_out else None
    try:
        trainer.run()
    finally:
        write_checkpoint(trainer)
        fh.close()
        trace.close()
    print(
        f"trained {trainer.step} steps, {trainer.episodes} episodes; "
        f"train moving avg {trainer.moving_avg:.6f}"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    ck = ckpt_io.load(args.checkpoint)
    cfg = RunConfig.from_dict(ck.config) if ck.config else RunConfig()
    corpus = cap_sentences(load_corpus(args.corpus), cfg.max_sentences)
    if args.split != "all":
        train_set, test_set = split(corpus, cfg.test_fraction, cfg.seed)
        corpus = train_set if args.split == "train" else test_set
    trace = _TraceWriter(args.trace_out)
    try:
        mean, scores = evaluate(
            ck.params, corpus, ck.vocab, cfg.beta, cfg.aggregate, workers=args.workers,
            on_episode=trace if args.trace_out else None,
        )
    finally:
        trace.close()
    for sample, score in zip(corpus, scores):
        print(f"{sample.id}\t{score:.6f}")
    print(f"mean\t{mean:.6f}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    ck = ckpt_io.load(args.checkpoint)
    cfg = RunConfig.from_dict(ck.config) if ck.config else RunConfig()
    max_sentences = args.max_sentences or cfg.max_sentences
    document = args.document
    if args.document_file:
        document = Path(args.document_file).read_text(encoding="utf-8")
    sentences = clean_sentences(split_sentences(document or ""), max_sentences)
    if not sentences:
        raise UsageError("document contains no sentences")
    sample = Sample("input", args.question, sentences, ("",))
    env = SummaryEnv(ck.vocab, cfg.beta, cfg.aggregate)
    greedy_episode(ck.params, env, sample)
    print(env.summary())
    return EXIT_OK


def cmd_score(args) -> int:
    candidate = tokenize(Path(args.candidate).read_text(encoding="utf-8"))
    refs = [tokenize(Path(p).read_text(encoding="utf-8")) for p in args.references]
    if args.aggregate == "max":
        s = best_reference(candidate, refs, args.beta)
    else:
        per = [rouge_l(candidate, r, args.beta) for r in refs]
        n = len(per)
        s = RougeScore(
            sum(x.precision for x in per) / n,
            sum(x.recall for x in per) / n,
            sum(x.f_measure for x in per) / n,
        )
    print(f"{s.precision:.6f}\t{s.recall:.6f}\t{s.f_measure:.6f}")
    return EXIT_OK


def _add_train_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON run config; flags below override it")
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int, help="decision-step budget")
    p.add_argument("--alpha", type=float, help="learning rate")
    p.add_argument("--hidden", type=int)
    p.add_argument("--max-terms", type=int)
    p.add_argument("--max-sentences", type=int)
    p.add_argument("--test-fraction", type=float)
    p.add_argument("--beta", type=float, help="ROUGE-L F-measure beta")
    p.add_argument("--sampling-mode", choices=["consistent", "literal"])
    p.add_argument("--optimizer", choices=["sgd", "adam"])
    p.add_argument("--eval-interval", type=int)
    p.add_argument("--window", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rlsum", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="normalise a BioASQ Phase B JSON file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--max-sentences", type=int, default=30)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train a policy on a normalised corpus")
    p.add_argument("corpus")
    p.add_argument("--checkpoint-out", required=True)
    p.add_argument("--metrics-out", required=True)
    p.add_argument("--resume", metavar="CHECKPOINT", help="continue from a checkpoint")
    p.add_argument("--trace-out", help="write per-episode decisions as JSON lines")
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="greedy mean ROUGE-L of a checkpoint")
    p.add_argument("corpus")
    p.add_argument("checkpoint")
    p.add_argument("--split", choices=["all", "train", "test"], default="all")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace-out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("summarize", help="summarise one document for one question")
    p.add_argument("checkpoint")
    p.add_argument("--question", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--document")
    g.add_argument("--document-file")
    p.add_argument("--max-sentences", type=int)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("score", help="ROUGE-L of a candidate file against reference files")
    p.add_argument("candidate")
    p.add_argument("references", nargs="+")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--aggregate", choices=["max", "mean"], default="max")
    p.set_defaults(func=cmd_score)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, *_VALIDATION_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TrainingError, OSError, ValueError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
