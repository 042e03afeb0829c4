"""Dunkl operators on S h* for the trivial lowest weight.

    D_j f = t d_j f - sum_s c_{class(s)} alpha_s[j] (f - s.f) / alpha_s

Indices j are 0-based here (y_1 is j = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf import Field, FieldElement
from .groups import GroupData
from .poly import (
    LinearForm,
    ParamRing,
    Polynomial,
    divide_exact,
    linear_substitute,
    monomial_basis,
    partial_derivative,
)


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class CherednikParams:
    """t in {0, 1}; c None for symbolic parameters, else one value per class id."""

    t: int = 1
    c: tuple[FieldElement, ...] | None = None
    tau: str = "triv"

    def __post_init__(self):
        if self.t not in (0, 1):
            raise ParameterError("t must be 0 or 1 (other nonzero t rescale to t = 1)")
        if self.tau != "triv":
            raise ParameterError("only the trivial lowest weight is supported")
        if self.c is not None:
            object.__setattr__(self, "c", tuple(self.c))

    @property
    def symbolic(self) -> bool:
        return self.c is None


class _OperatorCache:
    """Per-degree matrices of d_j and of the class sums T_{k,j}; c-independent."""

    def __init__(self, group: GroupData):
        self.group = group
        F = group.field
        n = group.rank
        self.field = F
        self.n = n
        self.m = group.num_classes
        self.refl = [(s.class_id, LinearForm(F, s.alpha), s.dual) for s in group.reflections]
        self.bases = {0: monomial_basis(n, 0)}
        self.index = {0: {e: k for k, e in enumerate(self.bases[0])}}
        self.deriv: dict[int, list[np.ndarray]] = {}
        self.T: dict[int, list[list[np.ndarray]]] = {}
        self._images = {0: [[Polynomial.monomial(F, (0,) * n)] for _ in self.refl]}
        self._var_images = [
            [Polynomial(F, n, {tuple(1 if k == i else 0 for k in range(n)): dual[i][j] for i in range(n) if dual[i][j]})
             for j in range(n)]
            for _, _, dual in self.refl
        ]
        self._done = 0

    def basis(self, i: int) -> list[tuple[int, ...]]:
        if i not in self.bases:
            self.bases[i] = monomial_basis(self.n, i)
            self.index[i] = {e: k for k, e in enumerate(self.bases[i])}
        return self.bases[i]

    def ensure(self, i: int) -> None:
        while self._done < i:
            self._build(self._done + 1)
            self._done += 1

    def _build(self, i: int) -> None:
        F, n, m = self.field, self.n, self.m
        basis = self.basis(i)
        prev = self.basis(i - 1)
        pidx = self.index[i - 1]
        d, dp = len(basis), len(prev)
        deriv = [np.zeros((dp, d), dtype=np.int64) for _ in range(n)]
        for col, e in enumerate(basis):
            for j in range(n):
                a = e[j] % F.p
                if a:
                    deriv[j][pidx[e[:j] + (e[j] - 1,) + e[j + 1 :]], col] = a
        T = [[np.zeros((dp, d), dtype=np.int64) for _ in range(n)] for _ in range(m)]
        prev_images = self._images[i - 1]
        new_images = []
        for r, (cid, alpha, _dual) in enumerate(self.refl):
            imgs = []
            var_img = self._var_images[r]
            for col, e in enumerate(basis):
                l = next(k for k in range(n) if e[k])
                lower = e[:l] + (e[l] - 1,) + e[l + 1 :]
                img = var_img[l] * prev_images[r][pidx[lower]]
                imgs.append(img)
                mono = Polynomial.monomial(F, e)
                g = divide_exact(mono - img, alpha)
                if g.is_zero():
                    continue
                for j in range(n):
                    aj = alpha.coeffs[j]
                    if not aj:
                        continue
                    Tkj = T[cid][j]
                    for ge, gv in g.terms.items():
                        row = pidx[ge]
                        Tkj[row, col] = F.add(int(Tkj[row, col]), F.mul(aj, gv))
            new_images.append(imgs)
        self._images[i] = new_images
        self._images.pop(i - 1, None)
        self.deriv[i] = deriv
        self.T[i] = T


class DunklContext:
    """Group data plus parameters, with cached operator matrices per degree."""

    def __init__(self, group: GroupData, params: CherednikParams, _cache: _OperatorCache | None = None):
        self.group = group
        self.params = params
        self.field: Field = group.field
        self.n = group.rank
        self.m = group.num_classes
        self.scalar_field: Field = self.field
        if params.c is not None:
            if len(params.c) != self.m:
                raise ParameterError(f"need {self.m} parameter values, got {len(params.c)}")
            K = params.c[0].field if params.c else self.field
            if any(x.field != K for x in params.c):
                raise ParameterError("parameter values must lie in one field")
            try:
                self._embed = self.field.embedding_into(K)
            except ValueError as exc:
                raise ParameterError(f"parameter values must lie in an extension of {self.field.id}") from exc
            self.scalar_field = K
        if _cache is not None and _cache.group is not group:
            _cache = None
        self.cache = _cache or _OperatorCache(group)
        self.ring = ParamRing(self.field, self.m) if params.symbolic else self.scalar_field
        self._gram = None

    @property
    def symbolic(self) -> bool:
        return self.params.symbolic

    @property
    def t(self) -> int:
        return self.params.t

    def specialize(self, c: Sequence[FieldElement]) -> "DunklContext":
        return DunklContext(self.group, CherednikParams(self.t, tuple(c)), self.cache)

    def with_t(self, t: int) -> "DunklContext":
        return DunklContext(self.group, CherednikParams(t, self.params.c), self.cache)

    def basis(self, i: int):
        return self.cache.basis(i)

    def parts(self, i: int, j: int) -> list[tuple[np.ndarray, int | None]]:
        """Summands of D_j on degree i: (matrix, class id or None for the c-free part).

        Matrices have shape (dim_{i-1}, dim_i) and hold codes; a part with class
        id k is to be multiplied by c_k.
        """
        self.cache.ensure(i)
        F = self.field
        out = []
        if self.t:
            out.append((self.cache.deriv[i][j], None))
        for k in range(self.m):
            out.append((F.vneg(self.cache.T[i][k][j]), k))
        return out

    @property
    def extended(self) -> bool:
        """True when specialized values lie in a proper extension of the group's field."""
        return self.scalar_field != self.field

    def matrix(self, i: int, j: int) -> np.ndarray:
        """D_j on degree i at specialized c, with codes in the scalar field."""
        if self.symbolic:
            raise ParameterError("matrix() needs specialized parameters")
        K = self.scalar_field
        self.cache.ensure(i)
        acc = np.zeros((len(self.basis(i - 1)), len(self.basis(i))), dtype=np.int64)
        for M, k in self.parts(i, j):
            coef = 1 if k is None else self.params.c[k].value
            if coef:
                MK = self._embed[M] if self.extended else M
                acc = K.vadd(acc, K.vmul(MK, coef))
        return acc

    def coefficient_of_class(self, k: int):
        if self.symbolic:
            return self.ring.variable(k)
        return self.params.c[k].value


def _check_input(ctx: DunklContext, f: Polynomial) -> None:
    if f.ring != ctx.ring or f.nvars != ctx.n:
        raise ParameterError("polynomial does not live in the context's ring")
    if not f.is_homogeneous():
        raise ParameterError("Dunkl operators are applied to homogeneous inputs only")


def dunkl_apply(ctx: DunklContext, j: int, f: Polynomial, method: str = "direct") -> Polynomial:
    """D_{y_j} f (j 0-based) computed reflection by reflection, or from cached matrices."""
    _check_input(ctx, f)
    if not 0 <= j < ctx.n:
        raise ParameterError(f"y index {j} out of range")
    R = ctx.ring
    if f.is_zero() or f.degree() == 0:
        return Polynomial.zero(R, ctx.n)
    if method == "matrix" or (not ctx.symbolic and ctx.extended):
        return _dunkl_matrix_apply(ctx, j, f)
    if method != "direct":
        raise ParameterError(f"unknown method {method!r}")
    out = partial_derivative(f, j) if ctx.t else Polynomial.zero(R, ctx.n)
    per_class = [Polynomial.zero(R, ctx.n) for _ in range(ctx.m)]
    for s in ctx.group.reflections:
        aj = s.alpha[j]
        if not aj:
            continue
        g = divide_exact(f - linear_substitute(f, s.dual), LinearForm(ctx.field, s.alpha))
        per_class[s.class_id] = per_class[s.class_id] + g.scale(aj)
    for k, g in enumerate(per_class):
        if not g.is_zero():
            out = out - g.times(ctx.coefficient_of_class(k))
    return out


def _dunkl_matrix_apply(ctx: DunklContext, j: int, f: Polynomial) -> Polynomial:
    R = ctx.ring
    i = int(f.degree())
    basis = ctx.basis(i)
    prev = ctx.basis(i - 1)
    vec = f.to_vector(basis)
    out = [R.zero] * len(prev)
    for M, k in ctx.parts(i, j):
        coef = R.one if k is None else ctx.coefficient_of_class(k)
        if R.is_zero(coef):
            continue
        if not ctx.symbolic and ctx.extended:
            M = ctx._embed[M]
        rows, cols = np.nonzero(M)
        for r, c in zip(rows.tolist(), cols.tolist()):
            if R.is_zero(vec[c]):
                continue
            term = R.mul(R.scale(vec[c], int(M[r, c])), coef)
            out[r] = R.add(out[r], term)
    return Polynomial(R, ctx.n, dict(zip(prev, out)))


def is_singular(ctx: DunklContext, f: Polynomial) -> bool:
    _check_input(ctx, f)
    if f.degree() <= 0:
        raise ParameterError("singular vectors have positive degree")
    return all(dunkl_apply(ctx, j, f).is_zero() for j in range(ctx.n))


def dunkl_commute_check(ctx: DunklContext, j: int, k: int, f: Polynomial) -> bool:
    _check_input(ctx, f)
    if j == k:
        return True
    a = dunkl_apply(ctx, j, dunkl_apply(ctx, k, f)) if f.degree() >= 1 else f
    b = dunkl_apply(ctx, k, dunkl_apply(ctx, j, f)) if f.degree() >= 1 else f
    return a == b


def make_context(group: GroupData, t: int = 1, c: Sequence[FieldElement] | None = None) -> DunklContext:
    return DunklContext(group, CherednikParams(t, None if c is None else tuple(c)))
