import itertools
import random

import pytest

from cherednik_lab.gf import field_of_order, squares_partition
from cherednik_lab.groups import (
    GroupSpec,
    GroupSpecError,
    classify_reflection,
    dual_action_matrix,
    group_data,
    smallest_nonresidue,
)
from cherednik_lab.linalg import det, identity, mat_inv, mat_mul, mat_rank, mat_sub
from cherednik_lab.poly import LinearForm, Polynomial, linear_substitute

CONFIGS = [
    ("GL", 2, 2), ("GL", 2, 3), ("GL", 2, 4), ("GL", 2, 5), ("GL", 3, 2), ("GL", 3, 3),
    ("SL", 2, 3), ("SL", 2, 5), ("SL", 2, 4), ("SL", 3, 2), ("SL", 2, 7),
    ("O_plus", 2, 3), ("O_minus", 2, 3), ("O_odd", 3, 3), ("O_plus", 2, 5), ("Sym", 4, 3),
]


def conj(F, g, s):
    return mat_mul(F, mat_mul(F, g, s), mat_inv(F, g))


@pytest.mark.parametrize("family,n,q", CONFIGS)
def test_reflection_invariants(family, n, q):
    G = group_data(family, n, q)
    F = G.field
    I = identity(G.rank)
    for s in G.reflections:
        assert mat_rank(F, mat_sub(F, I, s.matrix)) == 1
        assert LinearForm(F, s.alpha).pair(s.alpha_vee) == F.sub(1, s.lam)
        assert s.dual == dual_action_matrix(F, s.matrix)
        for k in range(G.rank):
            x = Polynomial.variable(F, G.rank, k)
            expected = x - LinearForm(F, s.alpha).as_polynomial().scale(s.alpha_vee[k])
            assert linear_substitute(x, s.dual) == expected
    assert sum(c.size for c in G.classes) == len(G.reflections)
    assert len({s.matrix for s in G.reflections}) == len(G.reflections)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)])
def test_gl_class_sizes(n, q):
    G = group_data("GL", n, q)
    sizes = {c.kind: c.size for c in G.classes}
    assert len(G.classes) == q - 1
    uni = (q**n - 1) * (q ** (n - 1) - 1) // (q - 1)
    semi = (q**n - 1) * q ** (n - 1) // (q - 1)
    assert sizes["unipotent"] == uni
    assert all(c.size == semi for c in G.classes if c.kind == "semisimple")
    assert len(G.reflections) == uni + (q - 2) * semi


def test_named_class_tables():
    assert [(c.kind, c.size) for c in group_data("GL", 2, 2).classes] == [("unipotent", 3)]
    G3 = group_data("GL", 2, 3)
    assert sorted(c.size for c in G3.classes) == [8, 12]
    assert next(c for c in G3.classes if c.kind == "semisimple").lam == 2
    G5 = group_data("SL", 2, 5)
    assert [(c.kind, c.size) for c in G5.classes] == [("unipotent-Q", 12), ("unipotent-R", 12)]


def test_orthogonal_orders():
    assert group_data("O_plus", 2, 3).order == 4
    assert group_data("O_odd", 3, 3).order == 48
    assert group_data("O_minus", 2, 3).order == 8
    assert group_data("O_minus", 2, 3).nonresidue == smallest_nonresidue(field_of_order(3)) == 2


def test_invalid_specs():
    for args in [("O_plus", 3, 3), ("O_odd", 2, 3), ("O_minus", 2, 4), ("Sym", 3, 3), ("XX", 2, 3), ("GL", 2, 6),
                 ("SL", 1, 5)]:
        with pytest.raises(GroupSpecError):
            GroupSpec(*args)


def test_sl2_classification_examples():
    G = group_data("SL", 2, 5)
    F = G.field
    d1 = ((1, 1), (0, 1))
    assert G.classes[classify_reflection(G, d1)].kind == "unipotent-Q"
    gamma = 2
    s = mat_sub(F, tuple(tuple(F.mul(gamma, x) for x in row) for row in d1), tuple(
        tuple(F.sub(gamma, 1) if i == j else 0 for j in range(2)) for i in range(2)))
    assert G.classes[classify_reflection(G, s)].kind == "unipotent-R"
    G3 = group_data("GL", 2, 3)
    for s in G3.reflections:
        if s.lam != 1:
            assert G3.classes[classify_reflection(G3, s)].lam == 2


@pytest.mark.parametrize("q", [3, 5, 7])
def test_nonsquare_scaling_swaps_sl2_classes(q):
    G = group_data("SL", 2, q)
    F = G.field
    gamma = smallest_nonresidue(F)
    I = identity(2)
    for s in G.reflections:
        t = tuple(tuple(F.sub(F.mul(gamma, s.matrix[i][j]), F.mul(F.sub(gamma, 1), I[i][j])) for j in range(2))
                  for i in range(2))
        assert classify_reflection(G, t) != s.class_id


@pytest.mark.parametrize("q", [3, 5])
def test_sl2_classes_are_conjugation_orbits(q):
    G = group_data("SL", 2, q)
    F = G.field
    elems = [g for g in (((a, b), (c, d)) for a, b, c, d in itertools.product(range(q), repeat=4)) if det(F, g) == 1]
    assert len(elems) == q * (q * q - 1)
    for s in G.reflections:
        orbit = {conj(F, g, s.matrix) for g in elems}
        ids = {classify_reflection(G, t) for t in orbit}
        assert ids == {s.class_id}
        assert len(orbit) == G.classes[s.class_id].size


@pytest.mark.parametrize("family,n,q", CONFIGS)
def test_class_ids_stable_under_random_conjugation(family, n, q):
    G = group_data(family, n, q)
    F = G.field
    rng = random.Random(f"{family}{n}{q}")
    for s in rng.sample(G.reflections, min(8, len(G.reflections))):
        for _ in range(20):
            g = G.random_element(rng)
            assert classify_reflection(G, conj(F, g, s.matrix)) == s.class_id


def test_dual_action_examples():
    F5 = field_of_order(5)
    assert dual_action_matrix(F5, identity(2)) == identity(2)
    assert dual_action_matrix(F5, ((3, 0), (0, 1))) == ((2, 0), (0, 1))
    assert dual_action_matrix(F5, ((1, 1), (0, 1))) == ((1, 0), (4, 1))


@pytest.mark.parametrize("family,n,q", [("GL", 2, 3), ("SL", 2, 5), ("GL", 3, 2)])
def test_dual_action_is_multiplicative(family, n, q):
    G = group_data(family, n, q)
    F = G.field
    rng = random.Random(q)
    for _ in range(25):
        g, h = G.random_element(rng), G.random_element(rng)
        assert dual_action_matrix(F, mat_mul(F, g, h)) == mat_mul(F, dual_action_matrix(F, g), dual_action_matrix(F, h))


def test_sym_reflections_are_transpositions():
    G = group_data("Sym", 5, 3)
    assert G.rank == 4 and len(G.reflections) == 10 and len(G.classes) == 1
    assert G.order == 120


def test_sl_n_single_class():
    assert len(group_data("SL", 3, 2).classes) == 1
    assert len(group_data("SL", 2, 4).classes) == 1


def test_square_class_of_other_q():
    F = field_of_order(7)
    assert smallest_nonresidue(F) == 3 and 3 in squares_partition(F).R
