import random

import pytest

from thetaq._rational import rat
from thetaq.cyclo import CycloNum
from thetaq.series import Series


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_cyclo(rng, span=6):
    return CycloNum(*(rat(rng.randint(-span, span), rng.randint(1, 4))
                      for _ in range(4)))


def random_series(rng, nterms=5, cutoff=8):
    terms = {}
    for _ in range(nterms):
        q = rat(rng.randint(-4, 12), rng.choice((1, 2, 3, 4)))
        z = rat(rng.randint(-6, 6), rng.choice((1, 2)))
        if q < cutoff:
            terms[(q, z)] = random_cyclo(rng)
    return Series(terms, rat(cutoff))


def assert_equal_series(a, b, order, msg=""):
    ok, mismatch = a.equal_up_to(b, order)
    assert ok, f"{msg} first mismatch at {mismatch}"
