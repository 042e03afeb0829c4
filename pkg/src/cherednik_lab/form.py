"""Gram matrices B_i of the contravariant form, their ranks and kernels.

Entry (x^a, y^b) of B_i is the constant term of D_n^{b_n} ... D_1^{b_1} x^a.
Blocks are built by the recursion

    B_i[a, b] = sum_{a'} D_j[a', a] B_{i-1}[a', b - e_j],   j = first index with b_j > 0,

which peels off the innermost operator D_1^{b_1} first and therefore
reproduces the fixed application order exactly.

Internally an entry is an array over F_p of shape (r, P): r digits of the
F_q coefficient of each parameter monomial, with parameter monomials in a
graded order so that degree <= i monomials form a prefix.  Multiplying by a
constant of F_q is then an F_p-linear map and the recursion is a sequence
of integer matrix products.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .dunkl import DunklContext
from .gf import Field, FieldElement, field_create
from .linalg import BudgetExceeded, bareiss_rank, left_kernel, rank as field_rank
from .poly import Exponent, ParamScalar, Polynomial, divisibility_test, multiplicity, proportionality_test

DEFAULT_BUDGET = 400_000


class RankMismatchError(RuntimeError):
    """Symbolic and specialized ranks disagree after repeated sampling."""


class _ParamIndex:
    """Parameter monomials in graded order: all of degree 0, then 1, ..."""

    def __init__(self, m: int):
        self.m = m
        self.exps: list[Exponent] = [(0,) * m]
        self.index: dict[Exponent, int] = {(0,) * m: 0}
        self.prefix = [1]  # prefix[d] = number of monomials of degree <= d

    def upto(self, d: int) -> int:
        while len(self.prefix) <= d:
            deg = len(self.prefix)
            for e in _compositions(self.m, deg):
                self.index[e] = len(self.exps)
                self.exps.append(e)
            self.prefix.append(len(self.exps))
        return self.prefix[d]

    def shift(self, k: int, d: int) -> np.ndarray:
        """Target indices of c_k * mu for mu of degree <= d."""
        self.upto(d + 1)
        return np.array(
            [self.index[e[:k] + (e[k] + 1,) + e[k + 1 :]] for e in self.exps[: self.prefix[d]]], dtype=np.int64
        )


def _compositions(m: int, d: int):
    if m == 0:
        if d == 0:
            yield ()
        return
    if m == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _compositions(m - 1, d - a):
            yield (a,) + rest


def _lift(F: Field, M: np.ndarray) -> np.ndarray:
    """F_p matrix of v -> M^T-weighted combination: rows (m, rho), cols (m', sigma)."""
    rows, cols = M.shape  # M[m', m]
    reg = F.regular_rep[M.T]  # (m, m', r, r)
    return reg.transpose(0, 2, 1, 3).reshape(cols * F.r, rows * F.r)


@dataclass
class GramBlock:
    """B_i in the lex-decreasing monomial basis (rows x^a, columns y^a).

    `data` has shape (dim, dim, r, P) over F_p; P = 1 for specialized blocks.
    """

    degree: int
    basis: list[Exponent]
    field: Field
    nparams: int
    symbolic: bool
    data: np.ndarray
    param_exps: list[Exponent]
    point: tuple[FieldElement, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def codes(self) -> np.ndarray:
        """(dim, dim, P) array of F_q codes of each parameter coefficient."""
        return np.tensordot(self.data, self.field.digit_weights, axes=([2], [0])).astype(np.int64)

    def is_zero(self) -> bool:
        return not self.data.any()

    def entry(self, a: int, b: int):
        codes = self.codes()[a, b]
        if not self.symbolic:
            return int(codes[0])
        return ParamScalar(self.field, self.nparams, {e: int(v) for e, v in zip(self.param_exps, codes) if v})

    def matrix(self) -> list[list]:
        codes = self.codes()
        if not self.symbolic:
            return codes[:, :, 0].tolist()
        out = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                nz = np.nonzero(codes[a, b])[0]
                row.append(ParamScalar(self.field, self.nparams, {self.param_exps[k]: int(codes[a, b, k]) for k in nz}))
            out.append(row)
        return out

    def field_matrix(self) -> np.ndarray:
        if self.symbolic:
            raise ValueError("block is symbolic; evaluate it first")
        return self.codes()[:, :, 0]

    def max_entry_degree(self) -> int:
        if not self.symbolic:
            return 0
        used = np.nonzero(self.data.any(axis=(0, 1, 2)))[0]
        return max((sum(self.param_exps[k]) for k in used), default=0)

    def evaluate(self, point: Sequence[FieldElement]) -> np.ndarray:
        """Codes of the block at c = point (point in the block's field or an extension)."""
        if not self.symbolic:
            raise ValueError("block is already specialized")
        if len(point) != self.nparams:
            raise ValueError(f"need {self.nparams} values")
        big = point[0].field
        small = self.field
        emb = small.embedding_into(big)
        vals = [x.value for x in point]
        P = len(self.param_exps)
        E = np.zeros((small.r, P, big.r), dtype=np.int64)
        basis_images = [int(emb[small.p**k]) for k in range(small.r)]
        for mu_idx, mu in enumerate(self.param_exps):
            cm = 1
            for x, a in zip(vals, mu):
                if a:
                    cm = big.mul(cm, big.pow(x, a))
            for rho, w in enumerate(basis_images):
                E[rho, mu_idx] = big.digits(big.mul(w, cm))
        d = self.dim
        flat = self.data.reshape(d * d, small.r * P).astype(np.float64)
        digits = (flat @ E.reshape(small.r * P, big.r).astype(np.float64)).astype(np.int64) % big.p
        return (digits @ big.digit_weights).reshape(d, d)

    def entry_strings(self) -> list[list[str]]:
        F = self.field
        if not self.symbolic:
            return [[F.format(v) for v in row] for row in self.field_matrix().tolist()]
        return [[str(x) for x in row] for row in self.matrix()]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "basis": [list(e) for e in self.basis],
            "entries": self.entry_strings(),
        }


class _GramEngine:
    def __init__(self, ctx: DunklContext):
        self.ctx = ctx
        F = ctx.scalar_field
        self.F = F
        self.symbolic = ctx.symbolic
        self.m = ctx.m if ctx.symbolic else 0
        self.pindex = _ParamIndex(self.m)
        self.blocks: dict[int, np.ndarray] = {}
        one = np.zeros((1, 1, F.r, 1), dtype=np.int64)
        one[0, 0, 0, 0] = 1
        self.blocks[0] = one

    def width(self, i: int) -> int:
        return self.pindex.upto(i) if self.symbolic else 1

    def block(self, i: int) -> np.ndarray:
        top = max(self.blocks)
        for d in range(top + 1, i + 1):
            self.blocks[d] = self._step(d)
        return self.blocks[i]

    def _step(self, i: int) -> np.ndarray:
        ctx, F = self.ctx, self.F
        r, p, n = F.r, F.p, ctx.n
        prev = self.blocks[i - 1]
        basis = ctx.basis(i)
        pidx = ctx.cache.index[i - 1]
        d, dp = len(basis), len(ctx.basis(i - 1))
        Pp, P = self.width(i - 1), self.width(i)
        out = np.zeros((d, d, r, P), dtype=np.int64)
        groups: dict[int, list[tuple[int, int]]] = {}
        for col, b in enumerate(basis):
            j = next(k for k in range(n) if b[k])
            groups.setdefault(j, []).append((col, pidx[b[:j] + (b[j] - 1,) + b[j + 1 :]]))
        for j, members in groups.items():
            cols = [c for c, _ in members]
            src = [s for _, s in members]
            nb = len(cols)
            V = prev[:, src].transpose(0, 2, 1, 3).reshape(dp * r, nb * Pp).astype(np.float64)
            acc = np.zeros((d, r, nb, P), dtype=np.int64)
            if self.symbolic:
                parts = ctx.parts(i, j)
            else:
                parts = [(ctx.matrix(i, j), None)]
            for M, k in parts:
                if not M.any():
                    continue
                L = _lift(F, M).astype(np.float64)
                W = (L @ V).astype(np.int64).reshape(d, r, nb, Pp)
                if k is None:
                    acc[..., :Pp] += W
                else:
                    acc[..., self.pindex.shift(k, i - 1)] += W
            out[:, cols] = (acc % p).transpose(0, 2, 1, 3)
        return out


def _engine(ctx: DunklContext) -> _GramEngine:
    if ctx._gram is None:
        ctx._gram = _GramEngine(ctx)
    return ctx._gram


def gram_block(ctx: DunklContext, i: int) -> GramBlock:
    if i < 0:
        raise ValueError("degree must be nonnegative")
    eng = _engine(ctx)
    data = eng.block(i)
    P = data.shape[3]
    exps = eng.pindex.exps[:P] if ctx.symbolic else [()]
    return GramBlock(i, list(ctx.basis(i)), ctx.scalar_field, ctx.m, ctx.symbolic, data, exps,
                     None if ctx.symbolic else ctx.params.c)


def gram_block_direct(ctx: DunklContext, i: int) -> GramBlock:
    """Independent route: apply the operator word to every row monomial from scratch."""
    from .dunkl import dunkl_apply

    R = ctx.ring
    basis = list(ctx.basis(i))
    F = ctx.field
    rows = []
    for a in basis:
        row = []
        for b in basis:
            f = Polynomial.monomial(R, a)
            for j in range(ctx.n):
                for _ in range(b[j]):
                    f = dunkl_apply(ctx, j, f)
            row.append(f.coefficient((0,) * ctx.n))
        rows.append(row)
    return block_from_entries(ctx, i, rows)


def block_from_entries(ctx: DunklContext, i: int, rows) -> GramBlock:
    F = ctx.field
    basis = list(ctx.basis(i))
    d = len(basis)
    if ctx.symbolic:
        pindex = _ParamIndex(ctx.m)
        P = pindex.upto(i)
        data = np.zeros((d, d, F.r, P), dtype=np.int64)
        for a, row in enumerate(rows):
            for b, x in enumerate(row):
                for e, v in x.terms.items():
                    data[a, b, :, pindex.index[e]] = F.digits(v)
        return GramBlock(i, basis, F, ctx.m, True, data, pindex.exps[:P])
    F = ctx.scalar_field
    data = np.zeros((d, d, F.r, 1), dtype=np.int64)
    for a, row in enumerate(rows):
        for b, x in enumerate(row):
            data[a, b, :, 0] = F.digits(x)
    return GramBlock(i, basis, F, ctx.m, False, data, [()], ctx.params.c)


# ---------------------------------------------------------------------------
# ranks and kernels


@dataclass
class RankReport:
    degree: int
    dim: int
    rank: int
    kernel: list[Polynomial]
    mode: str
    method: str
    point: tuple[FieldElement, ...] | None = None
    field: Field | None = None
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        F = self.field
        out = {
            "degree": self.degree,
            "dim": self.dim,
            "rank": self.rank,
            "mode": self.mode,
            "method": self.method,
            "kernel": [v.to_json() for v in self.kernel],
        }
        if self.point is not None:
            out["point"] = [str(x) for x in self.point]
            out["point_field"] = F.descriptor()
        return out


def specialization_field(block: GramBlock, min_size: int | None = None) -> Field:
    """Smallest F_{q^k} with q^k > 2 * (max entry degree) * dim."""
    F = block.field
    need = min_size if min_size is not None else 2 * max(block.max_entry_degree(), 1) * block.dim
    k = 1
    while F.q**k <= need:
        k += 1
    return field_create(F.p, F.r * k)


def random_point(big: Field, m: int, rng: random.Random) -> tuple[FieldElement, ...]:
    return tuple(big.element(rng.randrange(big.q)) for _ in range(m))


def _kernel_polys(F: Field, basis: Sequence[Exponent], M: np.ndarray) -> list[Polynomial]:
    K = left_kernel(F, M)
    return [Polynomial(F, len(basis[0]), {e: int(v) for e, v in zip(basis, row) if v}) for row in K]


def rank_kernel(
    block: GramBlock,
    mode: str = "generic",
    c: Sequence[FieldElement] | None = None,
    rng: random.Random | None = None,
    budget: int = DEFAULT_BUDGET,
    big: Field | None = None,
) -> RankReport:
    """Rank and left kernel {v : v B = 0} of a block.

    mode "at-c": exact elimination at the given point (or on a specialized block).
    mode "generic": symbolic elimination when within budget, always cross-checked
    by a random specialization in an extension field; the kernel is reported at
    that point.
    """
    d = block.dim
    if mode == "at-c":
        if block.symbolic:
            if c is None:
                raise ValueError("at-c mode needs an assignment")
            M = block.evaluate(c)
            Fc = c[0].field if c else block.field
            point = tuple(c)
        else:
            M = block.field_matrix()
            Fc = block.field
            point = block.point
        rk = field_rank(Fc, M)
        return RankReport(block.degree, d, rk, _kernel_polys(Fc, block.basis, M), "at-c", "elimination", point, Fc)
    if mode != "generic":
        raise ValueError(f"unknown mode {mode!r}")
    if not block.symbolic:
        raise ValueError("generic mode needs a symbolic block")
    rng = rng or random.Random(0)
    if block.is_zero():
        ident = np.zeros((d, d), dtype=np.int64)
        return RankReport(block.degree, d, 0, _kernel_polys(block.field, block.basis, ident), "generic", "symbolic",
                          None, block.field)
    big = big or specialization_field(block)
    notes: list[str] = []
    try:
        sym = bareiss_rank(block.matrix(), budget).rank
        method = "symbolic"
    except BudgetExceeded:
        sym = None
        method = "specialization"
        notes.append("symbolic elimination over budget; rank from independent specializations")
    attempts = []
    for _ in range(4):
        point = random_point(big, block.nparams, rng)
        M = block.evaluate(point)
        rk = field_rank(big, M)
        attempts.append((rk, point, M))
        if sym is not None:
            if rk == sym:
                break
        elif len(attempts) >= 2 and max(a[0] for a in attempts) == rk and sum(1 for a in attempts if a[0] == rk) >= 2:
            break
    best = max(attempts, key=lambda a: a[0])
    if sym is not None and best[0] != sym:
        raise RankMismatchError(
            f"degree {block.degree}: symbolic rank {sym} but specializations gave {[a[0] for a in attempts]}"
        )
    if sym is None and sum(1 for a in attempts if a[0] == best[0]) < 2:
        raise RankMismatchError(f"degree {block.degree}: specializations disagree {[a[0] for a in attempts]}")
    rk, point, M = best
    if len(attempts) > 1:
        notes.append(f"resampled {len(attempts) - 1} time(s)")
    return RankReport(block.degree, d, rk, _kernel_polys(big, block.basis, M), "generic", method, point, big, notes)


# ---------------------------------------------------------------------------
# diagonal structure


@dataclass
class DegreeProfile:
    degree: int
    is_diagonal: bool
    is_zero: bool
    c_free: bool
    proportional: bool
    entries: list[ParamScalar]
    divisors_found: dict[str, int]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "is_diagonal": self.is_diagonal,
            "is_zero": self.is_zero,
            "c_free": self.c_free,
            "proportional": self.proportional,
            "entries": [str(x) for x in self.entries],
            "divisors_found": self.divisors_found,
        }


def candidate_divisors(ctx: DunklContext) -> dict[str, ParamScalar]:
    G = ctx.group
    F = ctx.field
    fam, n, q, m = G.spec.family, G.rank, F.q, ctx.m
    out: dict[str, ParamScalar] = {}
    if fam == "GL" and n == 2 and F.r == 1 and q > 2:
        lams = [c.lam for c in G.classes]
        s1 = ParamScalar.linear(F, [1] * m, F.neg(1))
        s2 = ParamScalar.linear(F, lams, 1)
        out[str(s1)] = s1
        out[str(s2)] = s2
    if fam in ("GL", "SL") and q == 2 and n == 3:
        s = ParamScalar.linear(F, [1], 1)
        out[str(s)] = s
    if fam == "SL" and n == 2 and F.r == 1 and q > 3:
        for const in (F.neg(2), 2 % F.p):
            s = ParamScalar.linear(F, [1, 1], const)
            out[str(s)] = s
    return out


def diagonal_profile(ctx: DunklContext, i_max: int) -> list[DegreeProfile]:
    if not ctx.symbolic:
        raise ValueError("diagonal_profile needs symbolic parameters")
    cands = candidate_divisors(ctx)
    out = []
    for i in range(i_max + 1):
        blk = gram_block(ctx, i)
        codes = blk.codes()
        off = codes.copy()
        for a in range(blk.dim):
            off[a, a] = 0
        mat = blk.matrix()
        diag = [mat[a][a] for a in range(blk.dim)]
        nonzero = [x for x in diag if not x.is_zero()]
        divs: dict[str, int] = {}
        if nonzero:
            rep = nonzero[0]
            for name, ell in cands.items():
                divs[name] = multiplicity(ell, rep)
        out.append(
            DegreeProfile(
                degree=i,
                is_diagonal=not off.any(),
                is_zero=blk.is_zero(),
                c_free=all(x.is_constant() for x in diag),
                proportional=proportionality_test(diag),
                entries=diag,
                divisors_found=divs,
            )
        )
    return out
