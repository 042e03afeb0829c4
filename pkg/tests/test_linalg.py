import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cherednik_lab.gf import field_create, field_of_order
from cherednik_lab.linalg import (
    BudgetExceeded,
    bareiss_rank,
    det,
    identity,
    left_kernel,
    mat_inv,
    mat_mul,
    matvec_left,
    rank,
    rref,
)
from cherednik_lab.poly import ParamScalar

FIELDS = [field_of_order(q) for q in (2, 3, 4, 5, 9)]


def _random_matrix(rng, F, rows, cols, density=0.6):
    return np.array([[rng.randrange(F.q) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)],
                    dtype=np.int64)


@settings(max_examples=60)
@given(st.sampled_from(FIELDS), st.integers(1, 6), st.integers(1, 6), st.integers(0, 10_000))
def test_left_kernel_annihilates_and_has_complementary_dimension(F, rows, cols, seed):
    A = _random_matrix(random.Random(seed), F, rows, cols)
    K = left_kernel(F, A)
    r = rank(F, A)
    assert K.shape[0] == rows - r
    for v in K:
        assert not matvec_left(F, v, A).any()
    if K.shape[0]:
        assert rank(F, K) == K.shape[0]


@settings(max_examples=60)
@given(st.sampled_from(FIELDS), st.integers(1, 5), st.integers(0, 10_000))
def test_rank_full_iff_det_nonzero(F, n, seed):
    A = _random_matrix(random.Random(seed), F, n, n)
    full = rank(F, A) == n
    assert full == (det(F, tuple(map(tuple, A.tolist()))) != 0)
    if full:
        M = tuple(map(tuple, A.tolist()))
        assert mat_mul(F, M, mat_inv(F, M)) == identity(n)


def test_rref_is_reduced():
    F = field_of_order(5)
    A = np.array([[1, 2, 3], [2, 4, 1], [0, 0, 2]])
    R, piv = rref(F, A)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1], [0, 0, 0]]


def _symbolic(rng, F, rows, cols, m=2):
    out = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            terms = {}
            for _ in range(rng.randint(0, 2)):
                terms[tuple(rng.randint(0, 2) for _ in range(m))] = rng.randrange(1, F.q)
            row.append(ParamScalar(F, m, terms))
        out.append(row)
    return out


@pytest.mark.parametrize("q", [2, 3, 5])
def test_bareiss_matches_generic_specialization(q):
    F = field_of_order(q)
    big = field_create(F.p, 8 if q == 2 else 6)
    emb = F.embedding_into(big)
    rng = random.Random(q)
    for _ in range(25):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        M = _symbolic(rng, F, rows, cols)
        sym = bareiss_rank(M).rank
        best = 0
        for _ in range(3):
            pt = [rng.randrange(big.q) for _ in range(2)]
            vals = np.array([[x.evaluate(pt, big) for x in row] for row in M], dtype=np.int64)
            best = max(best, rank(big, vals))
        assert sym == best
    del emb


def test_bareiss_rank_deficient_example():
    F = field_of_order(3)
    c = ParamScalar.variable(F, 1, 0)
    one = ParamScalar.constant(F, 1, 1)
    M = [[c, c * c], [one, c], [c + one, c * c + c]]
    assert bareiss_rank(M).rank == 1


def test_bareiss_budget():
    F = field_of_order(3)
    rng = random.Random(1)
    M = _symbolic(rng, F, 6, 6, m=2)
    M = [[x + ParamScalar.variable(F, 2, 0) ** 2 for x in row] for row in M]
    with pytest.raises(BudgetExceeded):
        bareiss_rank(M, budget=5)
