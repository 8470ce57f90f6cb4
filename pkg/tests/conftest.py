import os

import numpy as np
import pytest

ARTIFACTS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                         "artifacts")


@pytest.fixture(scope="session")
def artifacts_dir():
    os.makedirs(ARTIFACTS, exist_ok=True)
    return ARTIFACTS


@pytest.fixture(autouse=True)
def _no_nan_warnings():
    # fail loudly on accidental nan/overflow instead of warning
    with np.errstate(invalid="raise", over="raise", divide="raise"):
        yield
