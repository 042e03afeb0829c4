"""Exact linear algebra over finite fields (numpy arrays of codes) and
fraction-free elimination over the parameter ring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf import Field
from .poly import ParamScalar

Matrix = tuple[tuple[int, ...], ...]


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# small dense matrices as tuples of tuples


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(F: Field, A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for l in range(k):
                if A[i][l] and B[l][j]:
                    acc = F.add(acc, F.mul(A[i][l], B[l][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def mat_sub(F: Field, A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(F.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(F: Field, a: int, A: Matrix) -> Matrix:
    return tuple(tuple(F.mul(a, x) for x in row) for row in A)


def mat_inv(F: Field, A: Matrix) -> Matrix:
    n = len(A)
    M = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = F.inv(M[col][col])
        M[col] = [F.mul(inv, x) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def det(F: Field, A: Matrix) -> int:
    n = len(A)
    M = [list(row) for row in A]
    out = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            out = F.neg(out)
        out = F.mul(out, M[col][col])
        inv = F.inv(M[col][col])
        for r in range(col + 1, n):
            if M[r][col]:
                f = F.mul(M[r][col], inv)
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[col])]
    return out


def mat_rank(F: Field, A: Matrix) -> int:
    if not A:
        return 0
    return len(rref(F, np.array(A, dtype=np.int64))[1])


# ---------------------------------------------------------------------------
# vectorized elimination


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a code matrix, and its pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2 or M.size == 0:
        return M, []
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = F.vmul(M[r], F.inv(int(M[r, c])))
        others = np.nonzero(M[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = M[others, c][:, None]
            M[others] = F.vadd(M[others], F.vneg(F.vmul(factors, M[r][None, :])))
        pivots.append(c)
        r += 1
    return M, pivots


def rank(F: Field, A: np.ndarray) -> int:
    return len(rref(F, A)[1])


def left_kernel(F: Field, A: np.ndarray) -> np.ndarray:
    """Basis of {v : v A = 0} as rows, in reduced row echelon form."""
    A = np.asarray(A, dtype=np.int64)
    rows = A.shape[0]
    At = A.T
    R, pivots = rref(F, At)
    free = [j for j in range(rows) if j not in set(pivots)]
    basis = np.zeros((len(free), rows), dtype=np.int64)
    for k, fcol in enumerate(free):
        basis[k, fcol] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = F.neg(int(R[i, fcol]))
    if len(free) == 0:
        return basis
    return rref(F, basis)[0]


def matvec_left(F: Field, v: np.ndarray, A: np.ndarray) -> np.ndarray:
    """v A over F."""
    out = np.zeros(A.shape[1], dtype=np.int64)
    for i in np.nonzero(v)[0]:
        out = F.vadd(out, F.vmul(int(v[i]), A[i]))
    return out


# ---------------------------------------------------------------------------
# symbolic rank


@dataclass
class SymbolicRank:
    rank: int
    method: str


def _pattern_rank(entries: list[list[ParamScalar]]) -> int | None:
    """Rank when the nonzero pattern is a partial permutation (exact)."""
    rows = [i for i, row in enumerate(entries) if any(not x.is_zero() for x in row)]
    col_hits: dict[int, int] = {}
    for i in rows:
        nz = [j for j, x in enumerate(entries[i]) if not x.is_zero()]
        if len(nz) != 1:
            return None
        if nz[0] in col_hits:
            return None
        col_hits[nz[0]] = i
    return len(rows)


def bareiss_rank(entries: Sequence[Sequence[ParamScalar]], budget: int = 2_000_000) -> SymbolicRank:
    """Rank over the fraction field of F_q[c] by fraction-free elimination.

    `budget` bounds the number of coefficient multiplications; exceeding it
    raises BudgetExceeded.
    """
    M = [list(row) for row in entries]
    M = [row for row in M if any(not x.is_zero() for x in row)]
    if not M:
        return SymbolicRank(0, "symbolic")
    keep = [j for j in range(len(M[0])) if any(not row[j].is_zero() for row in M)]
    M = [[row[j] for j in keep] for row in M]
    pr = _pattern_rank(M)
    if pr is not None:
        return SymbolicRank(pr, "symbolic")
    rows, cols = len(M), len(M[0])
    spent = 0
    prev = None
    r = 0
    for c in range(cols):
        if r == rows:
            break
        cands = [i for i in range(r, rows) if not M[i][c].is_zero()]
        if not cands:
            continue
        piv = min(cands, key=lambda i: len(M[i][c].terms))
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a, b = M[i][j], M[i][c]
                spent += len(pv.terms) * len(a.terms) + len(b.terms) * len(M[r][j].terms)
                if spent > budget:
                    raise BudgetExceeded(f"symbolic elimination exceeded budget {budget}")
                val = pv * a - b * M[r][j]
                if prev is not None and not val.is_zero():
                    spent += len(val.terms) * len(prev.terms)
                    val = val.divide_exact(prev)
                M[i][j] = val
            M[i][c] = ParamScalar.zero(pv.field, pv.nvars)
        prev = pv
        r += 1
    return SymbolicRank(r, "symbolic")
