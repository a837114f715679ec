import os
import random

import pytest

# One seed for every randomized suite; override with RELEQUIL_SEED to shake
# the property tests.
SEED = int(os.environ.get("RELEQUIL_SEED", "20260819"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)
