import numpy as np
import pytest

from madsmooth.links import get_link
from madsmooth.sample import Sample
from madsmooth.selection import select


@pytest.fixture(scope="session")
def normal_model():
    """Selected logit/polynomial model on a seeded standard-normal sample."""
    sample = Sample.from_values(np.random.default_rng(2024).normal(size=200))
    return sample, select(sample, get_link("logit"), "poly")
