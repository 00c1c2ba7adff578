import json
import pathlib
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ORACLES = json.loads((pathlib.Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture(scope="session")
def oracle():
    return ORACLES


def seeded(generator, **kwargs):
    """Strategy drawing a seed and handing a fresh Random to a catalog generator."""
    return st.integers(0, 10**6).map(lambda seed: generator(random.Random(seed), **kwargs))
