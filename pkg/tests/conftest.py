import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from biocorpus.selfies_codec import selfies_alphabet
from biocorpus.tokenization import build_vocabulary

DATA = Path(__file__).resolve().parents[1] / "src" / "biocorpus" / "data"


@pytest.fixture(scope="session")
def corpus_lines() -> list[str]:
    return [
        line for line in (DATA / "molecules.smi").read_text().splitlines() if line
    ]


@pytest.fixture(scope="session")
def halogen_lines() -> list[str]:
    return [
        line for line in (DATA / "halogens.smi").read_text().splitlines() if line
    ]


@pytest.fixture(scope="session")
def vocab():
    return build_vocabulary(DATA / "text_vocab.txt", selfies_alphabet(), 100)


@pytest.fixture(scope="session")
def text_vocab_path() -> Path:
    return DATA / "text_vocab.txt"
