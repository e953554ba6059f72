from pathlib import Path

import pytest

from bittp import ProblemInstance, load_instance

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def toy3() -> ProblemInstance:
    return load_instance(DATA_DIR / "toy3.ttp")
