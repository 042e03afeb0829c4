"""Reflections and their conjugacy classes for GL_n, SL_n, orthogonal groups and Sym(N).

Matrices act on h by left multiplication on column vectors.  A reflection s
is stored with (alpha, alpha_vee, lam) such that on h*

    s . x = x - (alpha_vee, x) alpha,        lam = 1 - (alpha, alpha_vee),

i.e. its dual matrix is I - alpha alpha_vee^T, and on h

    s = I + lam^{-1} alpha_vee alpha^T.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .gf import Field, field_of_order, squares_partition
from .linalg import Matrix, det, identity, mat_inv, mat_mul, mat_rank, mat_sub, transpose

FAMILIES = ("GL", "SL", "O_odd", "O_plus", "O_minus", "Sym")
FAMILY_ALIASES = {"O": "O_odd", "O+": "O_plus", "O-": "O_minus", "S": "Sym"}
BRUTE_FORCE_LIMIT = 10**6


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    """family, n (matrix size; for Sym the N of Sym(N)), q (for Sym the characteristic)."""

    family: str
    n: int
    q: int

    def __post_init__(self):
        fam = FAMILY_ALIASES.get(self.family, self.family)
        object.__setattr__(self, "family", fam)
        if fam not in FAMILIES:
            raise GroupSpecError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise GroupSpecError("n must be positive")
        try:
            F = field_of_order(self.q)
        except ValueError as exc:
            raise GroupSpecError(str(exc)) from exc
        if fam == "Sym":
            if F.r != 1:
                raise GroupSpecError("Sym(N) takes the characteristic p as q")
            if self.n < 2:
                raise GroupSpecError("Sym(N) needs N >= 2")
            if self.n % F.p == 0:
                raise GroupSpecError("Sym(N) needs p not dividing N")
        if fam == "GL" or fam == "SL":
            if fam == "SL" and self.n < 2:
                raise GroupSpecError("SL_1 has no reflections")
        if fam in ("O_plus", "O_minus") and self.n % 2:
            raise GroupSpecError(f"{fam} needs even n")
        if fam == "O_odd" and self.n % 2 == 0:
            raise GroupSpecError("O_odd needs odd n")
        if fam == "O_minus" and F.p == 2:
            raise GroupSpecError("O_minus needs a non-square, so odd q")

    @property
    def field(self) -> Field:
        return field_of_order(self.q)

    @property
    def rank(self) -> int:
        """Dimension of h."""
        return self.n - 1 if self.family == "Sym" else self.n

    @property
    def p(self) -> int:
        return self.field.p

    def label(self) -> str:
        names = {"O_odd": "O", "O_plus": "O+", "O_minus": "O-"}
        if self.family == "Sym":
            return f"Sym({self.n})/F_{self.q}"
        return f"{names.get(self.family, self.family)}_{self.n}(F_{self.q})"


@dataclass(frozen=True)
class Reflection:
    matrix: Matrix
    alpha: tuple[int, ...]
    alpha_vee: tuple[int, ...]
    lam: int
    class_id: int

    @property
    def dual(self) -> Matrix:
        """Matrix of the action on h* in the substitution convention of poly.linear_substitute."""
        return _dual_from_data(self.alpha, self.alpha_vee, self.lam_field)

    # the field is attached by GroupData after construction
    lam_field: Field | None = field(default=None, compare=False, repr=False)


@functools.lru_cache(maxsize=None)
def _dual_from_data(alpha, alpha_vee, F) -> Matrix:
    n = len(alpha)
    return tuple(
        tuple(F.sub(1 if i == j else 0, F.mul(alpha[i], alpha_vee[j])) for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class ClassInfo:
    class_id: int
    kind: str
    size: int
    representative: Matrix
    lam: int


@dataclass
class GroupData:
    spec: GroupSpec
    field: Field
    reflections: list[Reflection]
    classes: list[ClassInfo]
    order: int
    generators: list[Matrix]
    form: Matrix | None = None
    nonresidue: int | None = None
    elements: list[Matrix] | None = None
    _class_of: dict[Matrix, int] = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_of_matrix(self, g: Matrix) -> int | None:
        return self._class_of.get(g)

    def contains(self, g: Matrix) -> bool:
        F = self.field
        fam = self.spec.family
        d = det(F, g)
        if fam == "GL":
            return d != 0
        if fam == "SL":
            return d == 1
        if fam.startswith("O"):
            return d != 0 and mat_mul(F, mat_mul(F, transpose(g), self.form), g) == self.form
        return g in set(self.elements)

    def random_element(self, rng: random.Random) -> Matrix:
        F, n = self.field, self.rank
        if self.elements is not None:
            return rng.choice(self.elements)
        while True:
            g = [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)]
            d = det(F, tuple(map(tuple, g)))
            if d == 0:
                continue
            if self.spec.family == "SL":
                inv = F.inv(d)
                g[0] = [F.mul(inv, x) for x in g[0]]
            return tuple(map(tuple, g))

    def to_json(self, with_reflections: bool = False) -> dict:
        F = self.field
        fmt = lambda M: [[F.format(x) for x in row] for row in M]
        out = {
            "spec": {"family": self.spec.family, "n": self.spec.n, "q": self.spec.q},
            "field": F.descriptor(),
            "rank": self.rank,
            "order": self.order,
            "reflection_count": len(self.reflections),
            "classes": [
                {
                    "id": c.class_id,
                    "kind": c.kind,
                    "lambda": F.format(c.lam),
                    "size": c.size,
                    "representative": fmt(c.representative),
                }
                for c in self.classes
            ],
        }
        if self.form is not None:
            out["form"] = fmt(self.form)
        if self.nonresidue is not None:
            out["nonresidue"] = F.format(self.nonresidue)
        if with_reflections:
            out["reflections"] = [
                {
                    "matrix": fmt(s.matrix),
                    "alpha": [F.format(x) for x in s.alpha],
                    "alpha_vee": [F.format(x) for x in s.alpha_vee],
                    "lambda": F.format(s.lam),
                    "class_id": s.class_id,
                }
                for s in self.reflections
            ]
        return out


# ---------------------------------------------------------------------------
# helpers


def dual_action_matrix(F: Field, g: Matrix) -> Matrix:
    """(g^{-1})^T; raises ZeroDivisionError for singular g."""
    return transpose(mat_inv(F, g))


def _pair(F: Field, a: Sequence[int], b: Sequence[int]) -> int:
    acc = 0
    for x, y in zip(a, b):
        acc = F.add(acc, F.mul(x, y))
    return acc


def reflection_matrix(F: Field, alpha, alpha_vee) -> Matrix:
    lam = F.sub(1, _pair(F, alpha, alpha_vee))
    inv = F.inv(lam)
    n = len(alpha)
    return tuple(
        tuple(F.add(1 if i == j else 0, F.mul(inv, F.mul(alpha_vee[i], alpha[j]))) for j in range(n)) for i in range(n)
    )


def reflection_data(F: Field, g: Matrix) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """(alpha, alpha_vee, lam) of a reflection matrix, alpha normalized to leading 1."""
    n = len(g)
    N = mat_sub(F, identity(n), dual_action_matrix(F, g))
    if mat_rank(F, N) != 1:
        raise GroupSpecError("matrix is not a reflection")
    col = next(j for j in range(n) if any(N[i][j] for i in range(n)))
    raw = [N[i][col] for i in range(n)]
    l0 = next(i for i in range(n) if raw[i])
    inv = F.inv(raw[l0])
    alpha = tuple(F.mul(inv, x) for x in raw)
    alpha_vee = tuple(N[l0][j] for j in range(n))
    lam = F.sub(1, _pair(F, alpha, alpha_vee))
    return alpha, alpha_vee, lam


def _nonzero_vectors(F: Field, n: int):
    for v in itertools.product(range(F.q), repeat=n):
        if any(v):
            yield v


def _normalized_vectors(F: Field, n: int):
    for v in _nonzero_vectors(F, n):
        if v[next(i for i in range(n) if v[i])] == 1:
            yield v


def _diag(F: Field, entries: Sequence[int]) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def _d_one(n: int) -> Matrix:
    return tuple(tuple(1 if (i == j or (i, j) == (0, 1)) else 0 for j in range(n)) for i in range(n))


def smallest_nonresidue(F: Field) -> int:
    return min(squares_partition(F).R)


def _transvection_generators(F: Field, n: int) -> list[Matrix]:
    gens = []
    for i, j in itertools.permutations(range(n), 2):
        for k in range(F.r):
            a = F.p**k
            gens.append(tuple(tuple((1 if r == c else 0) if (r, c) != (i, j) else a for c in range(n)) for r in range(n)))
    return gens


def _gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def _sl2_square_class(F: Field, alpha, alpha_vee) -> int:
    """0 for C_Q, 1 for C_R: alpha = mu (-v2, v1) with v = alpha_vee."""
    v1, v2 = alpha_vee
    w = (F.neg(v2), v1)
    k = 0 if w[0] else 1
    mu = F.div(alpha[k], w[k])
    return 0 if F.is_square(mu) else 1


# ---------------------------------------------------------------------------
# enumeration


def enumerate_reflections(spec: GroupSpec) -> GroupData:
    if spec.family in ("GL", "SL"):
        return _linear_group(spec)
    if spec.family == "Sym":
        return _symmetric_group(spec)
    return orthogonal_group(spec)


def _linear_group(spec: GroupSpec) -> GroupData:
    F = spec.field
    n = spec.n
    sl = spec.family == "SL"
    sl2_split = sl and n == 2 and F.p != 2
    raw = []
    for alpha in _normalized_vectors(F, n):
        for av in _nonzero_vectors(F, n):
            lam = F.sub(1, _pair(F, alpha, av))
            if lam == 0 or (sl and lam != 1):
                continue
            raw.append((alpha, av, lam))
    if sl2_split:
        key = lambda t: _sl2_square_class(F, t[0], t[1])
        ids = {0: 0, 1: 1}
    else:
        lams = sorted({t[2] for t in raw}, key=lambda x: (x != 1, x))
        ids = {lam: k for k, lam in enumerate(lams)}
        key = lambda t: t[2]
    refl = []
    for alpha, av, lam in raw:
        refl.append(Reflection(reflection_matrix(F, alpha, av), alpha, av, lam, ids[key((alpha, av, lam))], F))
    refl.sort(key=lambda s: s.class_id)
    classes = []
    for cid in sorted(set(ids.values())):
        members = [s for s in refl if s.class_id == cid]
        if not members:
            continue
        lam = members[0].lam
        if sl2_split:
            kind = "unipotent-Q" if cid == 0 else "unipotent-R"
            if cid == 0:
                rep = _d_one(n)
            else:
                g = smallest_nonresidue(F)
                rep = ((1, g), (0, 1))
        elif lam == 1:
            kind, rep = "unipotent", _d_one(n)
        else:
            kind, rep = "semisimple", _diag(F, [F.inv(lam)] + [1] * (n - 1))
        classes.append(ClassInfo(cid, kind, len(members), rep, lam))
    order = _gl_order(n, F.q) // ((F.q - 1) if sl else 1)
    gens = _transvection_generators(F, n)
    if not sl and F.q > 2:
        gens.append(_diag(F, [F.primitive] + [1] * (n - 1)))
    data = GroupData(spec, F, refl, classes, order, gens)
    data._class_of = {s.matrix: s.class_id for s in refl}
    return data


def _brute_force_data(spec: GroupSpec, F: Field, elements: list[Matrix], form=None, nonresidue=None) -> GroupData:
    n = spec.rank
    ident = identity(n)
    refl_mats = sorted(g for g in elements if mat_rank(F, mat_sub(F, g, ident)) == 1)
    if len(elements) * max(len(refl_mats), 1) > 5 * 10**7:
        raise GroupSpecError("conjugation orbit computation too large")
    inverses = {g: mat_inv(F, g) for g in elements}
    class_of: dict[Matrix, int] = {}
    orbits: list[list[Matrix]] = []
    for s in refl_mats:
        if s in class_of:
            continue
        orbit = sorted({mat_mul(F, mat_mul(F, g, s), inverses[g]) for g in elements})
        for t in orbit:
            class_of[t] = len(orbits)
        orbits.append(orbit)
    refl = []
    classes = []
    for cid, orbit in enumerate(orbits):
        for t in orbit:
            alpha, av, lam = reflection_data(F, t)
            refl.append(Reflection(t, alpha, av, lam, cid, F))
        lam = refl[-1].lam
        classes.append(ClassInfo(cid, "unipotent" if lam == 1 else "semisimple", len(orbit), orbit[0], lam))
    data = GroupData(spec, F, refl, classes, len(elements), refl_mats, form, nonresidue, elements)
    data._class_of = class_of
    return data


def quadratic_form_matrix(spec: GroupSpec) -> tuple[Matrix, int | None]:
    F = spec.field
    n = spec.n
    if spec.family == "O_odd":
        return identity(n), None
    diag = [1 if i % 2 == 0 else F.neg(1) for i in range(n)]
    r = None
    if spec.family == "O_minus":
        r = smallest_nonresidue(F)
        diag[-1] = F.neg(r)
    return _diag(F, diag), r


def orthogonal_group(spec: GroupSpec) -> GroupData:
    """All g with g^T A g = A, by column-wise backtracking."""
    if not spec.family.startswith("O"):
        raise GroupSpecError("orthogonal_group needs an O family")
    F = spec.field
    n = spec.n
    if F.q ** (n * n) > 10**12 and F.q**n > 10**4:
        raise GroupSpecError("orthogonal group too large for brute force")
    A, r = quadratic_form_matrix(spec)
    vectors = list(itertools.product(range(F.q), repeat=n))

    def bil(u, v):
        acc = 0
        for i in range(n):
            if u[i] and v[i] and A[i][i]:
                acc = F.add(acc, F.mul(A[i][i], F.mul(u[i], v[i])))
        return acc

    norms = {v: bil(v, v) for v in vectors}
    cols_by_norm = {}
    for v in vectors:
        cols_by_norm.setdefault(norms[v], []).append(v)
    elements: list[Matrix] = []

    def extend(chosen):
        k = len(chosen)
        if k == n:
            elements.append(tuple(tuple(chosen[j][i] for j in range(n)) for i in range(n)))
            if len(elements) > BRUTE_FORCE_LIMIT:
                raise GroupSpecError("brute-force size limit exceeded")
            return
        for v in cols_by_norm.get(A[k][k], []):
            if all(bil(c, v) == A[i][k] for i, c in enumerate(chosen)):
                extend(chosen + [v])

    extend([])
    elements.sort()
    return _brute_force_data(spec, F, elements, A, r)


def _perm_matrix(N: int, sigma: Sequence[int]) -> Matrix:
    n = N - 1

    def coords(a, b):
        v = [0] * n
        if a < b:
            for k in range(a, b):
                v[k] = 1
        else:
            for k in range(b, a):
                v[k] = -1
        return v

    cols = [coords(sigma[i], sigma[i + 1]) for i in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _symmetric_group(spec: GroupSpec) -> GroupData:
    F = spec.field
    N = spec.n
    total = 1
    for k in range(2, N + 1):
        total *= k
    if total > BRUTE_FORCE_LIMIT:
        raise GroupSpecError("brute-force size limit exceeded")
    elements = sorted(
        {tuple(tuple(x % F.p for x in row) for row in _perm_matrix(N, s)) for s in itertools.permutations(range(N))}
    )
    return _brute_force_data(spec, F, elements)


def classify_reflection(data: GroupData, s: Reflection | Matrix) -> int:
    """Class id of a reflection of the group, computed from its matrix."""
    F = data.field
    g = s.matrix if isinstance(s, Reflection) else tuple(map(tuple, s))
    if not data.contains(g):
        raise GroupSpecError("matrix is not in the group")
    alpha, av, lam = reflection_data(F, g)
    fam = data.spec.family
    if fam == "GL":
        return next(c.class_id for c in data.classes if c.lam == lam)
    if fam == "SL":
        if lam != 1:
            raise GroupSpecError("SL reflections are unipotent")
        if data.rank == 2 and F.p != 2:
            return _sl2_square_class(F, alpha, av)
        return 0
    cid = data.class_of_matrix(g)
    if cid is None:
        raise GroupSpecError("not a reflection of the group")
    return cid


@functools.lru_cache(maxsize=64)
def group_data(family: str, n: int, q: int) -> GroupData:
    return enumerate_reflections(GroupSpec(family, n, q))
