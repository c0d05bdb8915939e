from pathlib import Path

import pytest

from chronos.modelfile import load_model

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def m0():
    """Demonstration model: tank empty over [2,5], building over [1,2]+[4,5]."""
    return load_model(DATA / "m0.tmodel")
