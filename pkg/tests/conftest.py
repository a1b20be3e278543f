import random

import pytest
from hypothesis import settings, strategies as st

from clusterkit.laurent import LaurentPoly, default_names
from clusterkit.properties import random_valid_matrix

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")

NAMES3 = default_names(3)


@st.composite
def laurent_polys(draw, names=NAMES3, max_terms=6, exp_range=3, coeff_range=20, nonzero=False):
    m = len(names)
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(-exp_range, exp_range)) for _ in range(m))
        terms[e] = draw(st.integers(-coeff_range, coeff_range).filter(bool))
    p = LaurentPoly(terms, names)
    if nonzero and not p:
        p = LaurentPoly.constant(1, names)
    return p


@st.composite
def valid_matrices(draw):
    """Random full-rank extended exchange matrices, m <= 5, entries in [-2, 2]."""
    return random_valid_matrix(random.Random(draw(st.integers(0, 10 ** 9))))


@pytest.fixture
def rng():
    return random.Random(12345)
