"""Hilbert series of L_{t,c}(triv), baby Verma series, reduced series,
Dickson invariants, and the Frobenius / dimension / h0-h1 diagnostics."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .dunkl import DunklContext
from .form import GramBlock, RankReport, gram_block, rank_kernel, random_point, specialization_field
from .gf import Field, FieldElement, field_create, field_of_order
from .linalg import left_kernel, rank as field_rank, rref
from .poly import Polynomial, divide_exact_poly, linear_substitute


class SeriesError(ValueError):
    pass


class ReducedSeriesError(SeriesError):
    """H does not factor as ((1-z^p)/(1-z))^n h(z^p); `reason` says why."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# integer polynomials in z


def _trim(c: Sequence[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder over Z; b must have leading coefficient +-1."""
    a = list(a)
    b = _trim(b)
    if b[-1] not in (1, -1):
        raise ValueError("divisor must have unit leading coefficient")
    q = [0] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] * b[-1]
        q[k] = coef
        if coef:
            for j, y in enumerate(b):
                a[k + j] -= coef * y
    return _trim(q), _trim(a)


def qint(k: int) -> list[int]:
    """(1 - z^k)/(1 - z) = 1 + z + ... + z^{k-1}."""
    return [1] * k


@dataclass(frozen=True)
class HilbertSeries:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(_trim(self.coeffs))
        if any(x < 0 for x in c):
            raise SeriesError(f"negative coefficient in {list(c)}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def of(cls, coeffs: Sequence[int]) -> "HilbertSeries":
        return cls(tuple(coeffs))

    @classmethod
    def product(cls, *factors: Sequence[int]) -> "HilbertSeries":
        acc = [1]
        for f in factors:
            acc = _pmul(acc, f)
        return cls(tuple(acc))

    def __call__(self, z):
        return sum(a * z**i for i, a in enumerate(self.coeffs))

    @property
    def dimension(self) -> int:
        return sum(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def top(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def leq(self, other: "HilbertSeries") -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return all(x <= y for x, y in zip(a, b))

    def substitute_power(self, p: int) -> list[int]:
        out = [0] * (p * self.degree + 1) if self.coeffs else []
        for i, a in enumerate(self.coeffs):
            out[p * i] = a
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                parts.append(str(a))
            else:
                parts.append(mono if a == 1 else f"{a}{mono}")
        return " + ".join(parts)

    def factored(self) -> str:
        """Cosmetic factorization into (1-z^k)/(1-z) factors by trial division."""
        rest = list(self.coeffs)
        if not rest:
            return "0"
        ks = []
        k = len(rest)
        while k >= 2:
            qt, rm = _pdivmod(rest, qint(k))
            if not rm and qt:
                ks.append(k)
                rest = qt
            else:
                k -= 1
        if not ks:
            return str(self)
        ks.sort()
        num = "".join(f"(1-z^{k})" for k in ks)
        den = "(1-z)" if len(ks) == 1 else f"(1-z)^{len(ks)}"
        tail = HilbertSeries(tuple(rest))
        out = f"{num}/{den}"
        return out if tail.coeffs == (1,) else f"{out} * ({tail})"

    def to_json(self) -> dict:
        return {"coefficients": list(self.coeffs), "string": str(self), "factored": self.factored(),
                "dimension": self.dimension}


# ---------------------------------------------------------------------------
# degrees, baby Verma, reduced series


def dickson_degrees(family: str, n: int, q: int) -> list[int]:
    if family == "GL":
        return [q**n - q**i for i in range(n)]
    if family == "SL":
        return [sum(q**k for k in range(n))] + [q**n - q**i for i in range(1, n)]
    raise SeriesError(f"no fundamental degrees known for {family}")


def baby_verma_series(family: str, n: int, q: int, t: int) -> HilbertSeries:
    p = field_of_order(q).p
    mult = p if t else 1
    return HilbertSeries.product(*(qint(mult * d) for d in dickson_degrees(family, n, q)))


def baby_verma_top_degree(family: str, n: int, q: int, t: int) -> int:
    p = field_of_order(q).p
    return (p if t else 1) * sum(dickson_degrees(family, n, q)) - n


def reduced_series(H: HilbertSeries, p: int, n: int) -> HilbertSeries:
    base = [1]
    for _ in range(n):
        base = _pmul(base, qint(p))
    quot, rem = _pdivmod(list(H.coeffs), base)
    if rem:
        raise ReducedSeriesError(f"not divisible by ((1-z^{p})/(1-z))^{n}")
    if any(a for i, a in enumerate(quot) if i % p):
        raise ReducedSeriesError(f"quotient not supported on multiples of {p}")
    h = quot[::p]
    if any(a < 0 for a in h):
        raise ReducedSeriesError("negative coefficient in reduced series")
    return HilbertSeries(tuple(h))


def unreduce(h: HilbertSeries, p: int, n: int) -> HilbertSeries:
    out = h.substitute_power(p)
    for _ in range(n):
        out = _pmul(out, qint(p))
    return HilbertSeries(tuple(out))


# ---------------------------------------------------------------------------
# Hilbert series of L


@dataclass
class HilbertRun:
    series: HilbertSeries
    reports: list[RankReport]
    stop_rule: str
    truncated: bool
    max_degree: int
    mode: str

    def to_json(self) -> dict:
        return {
            "series": self.series.to_json(),
            "ranks": [r.rank for r in self.reports],
            "methods": [r.method for r in self.reports],
            "stop_rule": self.stop_rule,
            "truncated": self.truncated,
            "max_degree": self.max_degree,
            "mode": self.mode,
        }


def default_max_degree(ctx: DunklContext) -> int | None:
    spec = ctx.group.spec
    if spec.family in ("GL", "SL"):
        return baby_verma_top_degree(spec.family, spec.n, spec.q, ctx.t)
    return None


def random_specialization(ctx: DunklContext, max_degree: int, rng: random.Random) -> tuple[FieldElement, ...]:
    """Uniform point of F_{q^k}^m with q^k > 2 * max_degree * (largest block dimension)."""
    from math import comb

    F = ctx.field
    need = 2 * max(max_degree, 1) * comb(ctx.n + max_degree - 1, max_degree)
    k = 1
    while F.q**k <= need:
        k += 1
    return random_point(field_create(F.p, F.r * k), ctx.m, rng)


def _resolve(ctx: DunklContext, c_spec, max_degree: int | None = None, rng: random.Random | None = None):
    """(context to build blocks from, evaluation point or None, mode)."""
    if isinstance(c_spec, str):
        if c_spec == "random":
            point = random_specialization(ctx, max_degree or 1, rng or random.Random(0))
            return ctx.specialize(point), None, "random"
        if c_spec != "generic":
            raise SeriesError(f"unknown c value {c_spec!r}")
        if not ctx.symbolic:
            raise SeriesError("generic c needs a symbolic context")
        return ctx, None, "generic"
    if c_spec is None:
        if ctx.symbolic:
            raise SeriesError("symbolic context needs c_spec")
        return ctx, None, "at-c"
    point = tuple(c_spec)
    return ctx.specialize(point), None, "at-c"


def hilbert_L_report(
    ctx: DunklContext,
    c_spec="generic",
    max_degree: int | None = None,
    rng: random.Random | None = None,
) -> HilbertRun:
    rng = rng or random.Random(0)
    bound = default_max_degree(ctx)
    if max_degree is None:
        if bound is None:
            raise SeriesError(f"max_degree is required for {ctx.group.spec.family}")
        max_degree = bound
    base, point, mode = _resolve(ctx, c_spec, max_degree, rng)
    reports = []
    stop = None
    for i in range(max_degree + 1):
        blk = gram_block(base, i)
        if mode == "generic":
            rep = rank_kernel(blk, "generic", rng=rng)
        elif point is not None:
            rep = rank_kernel(blk, "at-c", c=point)
        else:
            rep = rank_kernel(blk, "at-c")
        if rep.rank == 0:
            stop = i
            break
        reports.append(rep)
    if stop is not None:
        rule = f"first zero block at degree {stop}; all later blocks vanish"
        truncated = False
    elif bound is not None and max_degree >= bound:
        rule = f"reached baby Verma top degree {bound}"
        truncated = False
    else:
        rule = f"reached max_degree {max_degree} without a zero block"
        truncated = True
    return HilbertRun(HilbertSeries(tuple(r.rank for r in reports)), reports, rule, truncated, max_degree, mode)


def hilbert_L(ctx: DunklContext, c_spec="generic", max_degree: int | None = None,
              rng: random.Random | None = None) -> HilbertSeries:
    return hilbert_L_report(ctx, c_spec, max_degree, rng).series


# ---------------------------------------------------------------------------
# Dickson invariants


@dataclass
class DicksonSet:
    n: int
    q: int
    L: Polynomial
    Q: list[Polynomial]  # Q[0] .. Q[n-1]

    @property
    def degrees(self) -> dict[str, int]:
        out = {"L": int(self.L.degree())}
        for i, Qi in enumerate(self.Q):
            out[f"Q{i}"] = int(Qi.degree())
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "degrees": self.degrees,
                "L": self.L.to_json(), "Q": [Qi.to_json() for Qi in self.Q]}


def _bracket(F: Field, n: int, exps: Sequence[int]) -> Polynomial:
    """det(x_j^{q^{e_i}})."""
    q = F.q
    out = Polynomial.zero(F, n)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        e = [0] * n
        for i, j in enumerate(perm):
            e[j] += q ** exps[i]
        coef = 1 if inv % 2 == 0 else F.neg(1)
        out = out + Polynomial(F, n, {tuple(e): coef})
    return out


def dickson_invariants(n: int, q: int, max_degree: int = 400) -> DicksonSet:
    F = field_of_order(q)
    if q**n - 1 > max_degree or n > 4:
        raise SeriesError(f"Dickson invariants for n={n}, q={q} exceed the polynomial budget")
    L = _bracket(F, n, list(range(n - 1, -1, -1)))
    Q = [L ** (q - 1)]
    for i in range(1, n):
        exps = [e for e in range(n, -1, -1) if e != i]
        Q.append(divide_exact_poly(_bracket(F, n, exps), L))
    return DicksonSet(n, q, L, Q)


def invariant_under(f: Polynomial, generators: Sequence, F: Field) -> bool:
    from .groups import dual_action_matrix

    return all(linear_substitute(f, dual_action_matrix(F, g)) == f for g in generators)


# ---------------------------------------------------------------------------
# Frobenius, dimension bound, h0 vs h1


@dataclass
class FrobeniusReport:
    hilbert: HilbertSeries
    top_degree: int
    top_dim: int
    palindromic: bool
    frobenius: bool
    basis: list[list[tuple[int, ...]]]
    pairing_ranks: list[int]
    point: tuple[FieldElement, ...] | None

    def to_json(self) -> dict:
        return {
            "hilbert": self.hilbert.to_json(),
            "top_degree": self.top_degree,
            "top_dim": self.top_dim,
            "palindromic": self.palindromic,
            "frobenius": self.frobenius,
            "basis": [[list(e) for e in deg] for deg in self.basis],
            "pairing_ranks": self.pairing_ranks,
            "point": None if self.point is None else [str(x) for x in self.point],
        }


def _blocks_at_point(ctx, c_spec, max_degree, rng):
    """Field matrices of B_0..B_d at one point where every rank is generic."""
    if max_degree is None:
        max_degree = default_max_degree(ctx)
    base, point, mode = _resolve(ctx, c_spec, max_degree, rng)
    run = hilbert_L_report(base, "generic" if mode == "generic" else point, max_degree, rng)
    d = run.series.degree
    blocks = [gram_block(base, i) for i in range(d + 1)]
    if mode == "generic":
        need = 2 * max(max(b.max_entry_degree() for b in blocks), 1) * max(b.dim for b in blocks) * (d + 1)
        big = specialization_field(blocks[-1], need)
        for _ in range(6):
            point = random_point(big, ctx.m, rng)
            mats = [b.evaluate(point) for b in blocks]
            if all(field_rank(big, M) == a for M, a in zip(mats, run.series.coeffs)):
                return run, mats, big, point
        raise SeriesError("could not find a point with generic ranks in every degree")
    if point is not None:
        return run, [b.evaluate(point) for b in blocks], point[0].field, point
    return run, [b.field_matrix() for b in blocks], base.scalar_field, base.params.c


def frobenius_check(ctx: DunklContext, c_spec="generic", max_degree: int | None = None,
                    rng: random.Random | None = None) -> FrobeniusReport:
    rng = rng or random.Random(0)
    run, mats, F, point = _blocks_at_point(ctx, c_spec, max_degree, rng)
    H = run.series
    d = H.degree
    n = ctx.n
    bases = [list(ctx.basis(i)) for i in range(d + 1)]
    std = []
    for i in range(d + 1):
        K = left_kernel(F, mats[i])
        _, piv = rref(F, K) if K.shape[0] else (K, [])
        std.append([e for k, e in enumerate(bases[i]) if k not in set(piv)])
    top_dim = H.top
    frob = False
    ranks: list[int] = []
    if top_dim == 1 and run.truncated is False:
        Md = mats[d]
        b0 = int(np.nonzero(Md.any(axis=0))[0][0])
        index_d = {e: k for k, e in enumerate(bases[d])}
        frob = True
        for i in range(d + 1):
            rows, cols = std[i], std[d - i]
            P = np.zeros((len(rows), len(cols)), dtype=np.int64)
            for a, u in enumerate(rows):
                for b, v in enumerate(cols):
                    P[a, b] = Md[index_d[tuple(x + y for x, y in zip(u, v))], b0]
            rk = field_rank(F, P)
            ranks.append(rk)
            if rk != len(rows) or rk != len(cols):
                frob = False
    return FrobeniusReport(H, d, top_dim, H.is_palindromic(), frob, std, ranks, point)


def group_order(ctx: DunklContext) -> int:
    return ctx.group.order


def dimension_bound_check(ctx: DunklContext, c_spec="generic", max_degree: int | None = None,
                          rng: random.Random | None = None) -> dict:
    if ctx.t != 1:
        raise SeriesError("the dimension bound concerns t = 1")
    run = hilbert_L_report(ctx, c_spec, max_degree, rng)
    H = run.series
    p, n, order = ctx.field.p, ctx.n, ctx.group.order
    bound = p**n * order
    out = {"dim_L": H.dimension, "bound": bound, "ok": H.dimension <= bound, "truncated": run.truncated}
    try:
        h = reduced_series(H, p, n)
        out.update({"h": list(h.coeffs), "h1": h.dimension, "h1_ok": 1 <= h.dimension <= order})
    except ReducedSeriesError as exc:
        out.update({"h": None, "h1": None, "h1_ok": None, "reduced_error": exc.reason})
    return out


def compare_h0_h1(ctx: DunklContext, max_degree0: int | None = None, max_degree1: int | None = None,
                  rng: random.Random | None = None) -> dict:
    rng = rng or random.Random(0)
    sym = DunklContext(ctx.group, type(ctx.params)(0), ctx.cache)
    h0 = hilbert_L(sym, "generic", max_degree0, rng)
    H1 = hilbert_L(sym.with_t(1), "generic", max_degree1, rng)
    h1 = reduced_series(H1, ctx.field.p, ctx.n)
    return {"h0": h0, "h1": h1, "coefficientwise_leq": h0.leq(h1), "equal": h0 == h1}
