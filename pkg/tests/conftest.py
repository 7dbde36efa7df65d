import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qfwitt import DiagonalForm, make_field  # noqa: E402

TEST_FIELDS = ("Q", "Q(sqrt(-7))", "Q(sqrt(2))", "Q(sqrt(-5))")

WORKED_FORM = ["-3-9*t", "-1", "-2-6*t", "1-t", "-6+4*t", "-3+2*t", "4-4*t"]


def random_element(K, rng, height=30):
    while True:
        if K.degree == 1:
            x = K(rng.randint(-height, height))
        else:
            x = K(rng.randint(-height, height), rng.randint(-height, height))
        if not x.is_zero():
            return x


def random_form(K, rng, dim, height=30):
    return DiagonalForm(K, tuple(random_element(K, rng, height) for _ in range(dim)))


@pytest.fixture(params=TEST_FIELDS)
def field(request):
    return make_field(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def worked_field():
    return make_field("Q(sqrt(-7))")


@pytest.fixture
def worked_form(worked_field):
    K = worked_field
    return DiagonalForm(K, tuple(K.parse(s) for s in WORKED_FORM))


@pytest.fixture
def report(capsys):
    """Print a line to the real terminal, bypassing capture."""

    def emit(line):
        with capsys.disabled():
            print(line)

    return emit
