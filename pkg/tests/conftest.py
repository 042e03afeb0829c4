import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cherednik_lab.gf import field_of_order
from cherednik_lab.poly import ParamRing, ParamScalar, Polynomial

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_QS = [2, 3, 4, 5, 7, 8, 9]


@st.composite
def field_polys(draw, F, n, max_terms=5, max_exp=4, homogeneous_degree=None):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        if homogeneous_degree is None:
            e = tuple(draw(st.integers(0, max_exp)) for _ in range(n))
        else:
            cuts = sorted(draw(st.integers(0, homogeneous_degree)) for _ in range(n - 1))
            bounds = [0] + cuts + [homogeneous_degree]
            e = tuple(bounds[k + 1] - bounds[k] for k in range(n))
        terms[e] = F.add(terms.get(e, 0), draw(st.integers(1, F.q - 1)))
    return Polynomial(F, n, terms)


@st.composite
def param_scalars(draw, F, m, max_terms=4, max_exp=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(m))
        terms[e] = F.add(terms.get(e, 0), draw(st.integers(1, F.q - 1)))
    return ParamScalar(F, m, terms)


def random_homogeneous(ring, n, degree, rng: random.Random, terms: int = 4, coef=None):
    """Random homogeneous polynomial; `coef(rng)` draws ring coefficients."""
    from cherednik_lab.poly import monomial_basis

    basis = monomial_basis(n, degree)
    out = Polynomial.zero(ring, n)
    for _ in range(terms):
        e = rng.choice(basis)
        out = out + Polynomial.monomial(ring, e, coef(rng))
    return out


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(params=[3, 4, 5, 9])
def small_field(request):
    return field_of_order(request.param)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
