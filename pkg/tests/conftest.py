import random
import sys
from pathlib import Path

import pytest

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.forms import FormKind, standard_space
from src.linalg import QQ
from src.utils.serialization import datum_from_json, read_document

FIXTURES = project_root / 'fixtures'


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive enumerations and larger Hilbert truncations')


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def reference_doc():
    return read_document(FIXTURES / 'regular_sp4_o5.json')


@pytest.fixture
def reference_datum(reference_doc):
    """Regular SO(5) datum of charge 4 in the zero fibre."""
    return datum_from_json(reference_doc['datum'])


@pytest.fixture
def sp4():
    return standard_space(FormKind.SYMPLECTIC, 4, QQ)


@pytest.fixture
def o5():
    return standard_space(FormKind.ORTHOGONAL, 5, QQ)
