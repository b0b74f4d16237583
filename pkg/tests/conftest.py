import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from weightkit.oracle import GenParams, random_chain_map, random_complex
from weightkit.ring_linalg import CoeffRing, QQ, ZZ

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F2 = CoeffRing.prime_field(2)
F3 = CoeffRing.prime_field(3)
D2 = CoeffRing.dual_numbers(2)

RINGS = {"Z": ZZ, "Q": QQ, "F2": F2, "F3": F3}


@st.composite
def complexes(draw, ring=ZZ, span_max=3, max_dim=2, bound=3):
    seed = draw(st.integers(0, 2**32))
    lo = draw(st.integers(-2, 1))
    span = draw(st.integers(1, span_max))
    return random_complex(GenParams(ring, lo, lo + span - 1, max_dim, bound, seed))


@st.composite
def maps(draw, ring=ZZ, span_max=3, max_dim=2, endo=False):
    M = draw(complexes(ring, span_max, max_dim))
    N = M if endo else draw(complexes(ring, span_max, max_dim))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_chain_map(M, N, rng)


@pytest.fixture
def rng():
    return random.Random(12345)
