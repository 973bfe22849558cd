from pathlib import Path

import pytest

from boolcover import corpus

ROOT = Path(__file__).resolve().parents[1]
CORPUS_DIR = ROOT / "data" / "corpus"
GOLDEN_DIR = ROOT / "data" / "golden"


@pytest.fixture(scope="session")
def algebras():
    return corpus.corpus_algebras()


@pytest.fixture(scope="session")
def mo2_fam():
    return corpus.mo2_family()


@pytest.fixture(scope="session")
def b4_fam():
    return corpus.b4_family()


@pytest.fixture(scope="session")
def star16_fam():
    return corpus.star16_family()


@pytest.fixture(scope="session")
def bases():
    return corpus.corpus_bases()
