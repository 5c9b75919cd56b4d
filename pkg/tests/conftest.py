from __future__ import annotations

import glob
import os

import pytest

from focusgen.frontend import parse_dsl, parse_interchange
from focusgen.model import resolve

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "corpus")
GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS_DIR, name)


def corpus_source(name: str) -> str:
    with open(corpus_path(name), encoding="utf-8") as fh:
        return fh.read()


def load_model(name: str):
    """Parse and resolve a corpus model; fails the test on any diagnostic."""
    source = corpus_source(name)
    if name.endswith(".json"):
        model, diags = parse_interchange(source, name)
    else:
        model, diags = parse_dsl(source, name)
    assert model is not None, [d.render() for d in diags]
    return resolve(model)


def all_corpus_models() -> list[str]:
    return sorted(os.path.basename(p) for p in glob.glob(os.path.join(CORPUS_DIR, "*.afm")))


@pytest.fixture(scope="session")
def echo():
    return load_model("echo.afm")


@pytest.fixture(scope="session")
def passthru():
    return load_model("passthru.afm")


@pytest.fixture(scope="session")
def chain():
    return load_model("chain.afm")


@pytest.fixture()
def run_cli(capsys):
    """Invoke the command-line client in-process and capture its output."""
    from focusgen.cli import main

    def invoke(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke
