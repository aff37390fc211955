import os

import numpy as np
import pytest

from glaplace.ratfield import FIELD, RING, X, Y
from glaplace.diffop import DiffOp
from glaplace.cli import parse_file
from glaplace.utilities import cfg

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')


def data_path(name):
    return os.path.join(DATA, name)


# randomized cases of the algebra property suites
ALGEBRA_CASES = 10000


def property_cases(default=ALGEBRA_CASES):
    # GLAPLACE_PROPERTY_CASES overrides every suite, e.g. 50 for a quick run
    return int(os.environ.get('GLAPLACE_PROPERTY_CASES', default))


def random_poly(rng, degree=2, span=3):
    p = RING.zero
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            p += int(rng.integers(-span, span + 1)) * RING({(i, j): 1})
    return p


def random_rf(rng, degree=2):
    num = random_poly(rng, degree)
    den = random_poly(rng, 1)
    while not den:
        den = random_poly(rng, 1)
    return FIELD(num) / FIELD(den)


def random_op(rng, order=2, degree=1):
    terms = {}
    for k in range(order + 1):
        for i in range(k + 1):
            if rng.random() < 0.6:
                terms[(i, k - i)] = FIELD(random_poly(rng, degree))
    return DiffOp(terms)


@pytest.fixture
def rng():
    return np.random.default_rng(cfg.oracle_seed)


@pytest.fixture
def example1():
    return parse_file(data_path('example1.pde')).system()


@pytest.fixture
def example2():
    return parse_file(data_path('example2.pde')).system()


@pytest.fixture
def example3():
    return parse_file(data_path('example3.pde')).system()


@pytest.fixture
def x():
    return X


@pytest.fixture
def y():
    return Y
