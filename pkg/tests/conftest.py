import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from orthlmov.partitions import enumerate_vectors
from orthlmov.pbseries import PbSeries
from orthlmov.qt import QTLaurent

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def laurents(draw, qmax=4, tmax=3, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        key = (draw(st.integers(-qmax, qmax)), draw(st.integers(-tmax, tmax)))
        terms[key] = draw(small_fracs)
    return QTLaurent(terms)


def random_laurent(rng: random.Random, qmax=3, tmax=2, max_terms=3) -> QTLaurent:
    return QTLaurent({(rng.randint(-qmax, qmax), rng.randint(-tmax, tmax)):
                      Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, max_terms))})


def random_pbseries(rng: random.Random, L=1, D=6, max_keys=4, constant=None) -> PbSeries:
    keys = enumerate_vectors(L, D, include_zero=False)
    coeffs = {rng.choice(keys): random_laurent(rng) for _ in range(rng.randint(1, max_keys))}
    if constant is not None:
        coeffs[enumerate_vectors(L, 0)[0]] = constant
    return PbSeries(coeffs, L, D)


@pytest.fixture
def rng():
    return random.Random(20261014)
