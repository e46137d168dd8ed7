import json

import pytest

from rlsum.corpus import Corpus, Sample
from rlsum.features import fit_vocabulary
from rlsum.synthetic import make_corpus


def bioasq_bytes(questions) -> bytes:
    return json.dumps({"questions": questions}).encode("utf-8")


@pytest.fixture
def toy_corpus():
    return Corpus(
        (
            Sample(
                "a",
                "What causes fever?",
                ("Infection causes fever.", "The sky is blue.", "Fever is a symptom."),
                ("Infection causes fever.",),
            ),
            Sample(
                "b",
                "Where is the heart?",
                ("The heart is in the chest.", "Cats purr."),
                ("The heart is in the chest.", "In the chest."),
            ),
            Sample("c", "What is water?", ("Water is wet.",), ("Water is H2O.",)),
        ),
        "toy",
    )


@pytest.fixture
def toy_vocab(toy_corpus):
    return fit_vocabulary(toy_corpus, 1000)


@pytest.fixture(scope="session")
def synthetic_small():
    return make_corpus(20, seed=3)


_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record ``(criterion, passed, detail)`` for the end-of-run acceptance report."""

    def record(name: str, passed: bool, detail: str = ""):
        _ACCEPTANCE[name] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split()[0].rstrip("."))):
        passed, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
