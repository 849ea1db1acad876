import random

import pytest

from recombination.chain import build_chain
from recombination.models import (
    random_nondegenerate,
    symmetric_three_site_model,
    three_site_model,
    two_site_model,
)
from recombination.partitions import parse_partition

SPLIT_A = parse_partition("{1}{2,3}")
SPLIT_B = parse_partition("{1,2}{3}")
COARSE3 = parse_partition("{1,2,3}")
FINE3 = parse_partition("{1}{2}{3}")


@pytest.fixture
def three():
    return build_chain(three_site_model())


@pytest.fixture
def sym():
    return build_chain(symmetric_three_site_model())


@pytest.fixture
def dyadic():
    return build_chain(two_site_model())


def random_models(count, seed, **kwargs):
    rng = random.Random(seed)
    return [random_nondegenerate(rng, **kwargs) for _ in range(count)]
