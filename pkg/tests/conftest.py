import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO = Path(__file__).resolve().parent.parent
VALID_CORPUS = REPO / "corpus" / "valid"
ERROR_CORPUS = REPO / "corpus" / "errors"


@pytest.fixture(scope="session")
def valid_corpus():
    return sorted(VALID_CORPUS.glob("*.qed"))


@pytest.fixture(scope="session")
def error_corpus():
    return ERROR_CORPUS
