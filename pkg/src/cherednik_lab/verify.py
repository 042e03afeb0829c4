"""Registry of character-table claims and the orthogonal-group conjecture runner.

Each claim is a fixed configuration plus an expected Hilbert series (or None when
the value is only reported).  Claims run independently, optionally in a process
pool, and reports are assembled in claim-id order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .dunkl import DunklContext, make_context
from .gf import FieldElement
from .groups import group_data
from .poly import ParamScalar
from .series import (
    HilbertSeries,
    ReducedSeriesError,
    baby_verma_series,
    hilbert_L_report,
    qint,
    reduced_series,
)

SCOPES = ("GL0", "GL1", "SL0", "SL1")


class NamedPointError(ValueError):
    pass


def named_point(ctx: DunklContext, name: str) -> tuple[FieldElement, ...]:
    """Representative c for a hyperplane row, with membership asserted.

    GL_2(F_p):  "sum=1"    -> (1, 0, ...)       on sum c = 1
                "lsum=-1"  -> (p-1, 0, ...)     on sum lambda c = -1, off sum c = 1
    SL_2(F_p):  "cq+cr=2"  -> (1, 1)
                "cq+cr=-2" -> (1, p-3)
    """
    G, F = ctx.group, ctx.field
    fam, n, m = G.spec.family, G.rank, ctx.m
    if F.r != 1 or n != 2:
        raise NamedPointError("named points exist for GL_2 and SL_2 over prime fields")
    if fam == "GL" and F.q > 2:
        s1 = ParamScalar.linear(F, [1] * m, F.neg(1))
        s2 = ParamScalar.linear(F, [c.lam for c in G.classes], 1)
        if name == "sum=1":
            pt = (1,) + (0,) * (m - 1)
            on, off = [s1], []
        elif name == "lsum=-1":
            pt = (F.p - 1,) + (0,) * (m - 1)
            on, off = [s2], [s1]
        else:
            raise NamedPointError(f"unknown GL point {name!r}")
    elif fam == "SL" and F.q > 3:
        plus2 = ParamScalar.linear(F, [1, 1], F.neg(2))
        minus2 = ParamScalar.linear(F, [1, 1], 2 % F.p)
        if name == "cq+cr=2":
            pt, on, off = (1, 1), [plus2], [minus2]
        elif name == "cq+cr=-2":
            pt, on, off = (1, (F.p - 3) % F.p), [minus2], [plus2]
        else:
            raise NamedPointError(f"unknown SL point {name!r}")
    else:
        raise NamedPointError(f"no named points for {G.spec.label()}")
    point = tuple(F.element(x) for x in pt)
    for ell in on:
        if ell.evaluate(pt) != 0:
            raise NamedPointError(f"{name}: point {pt} is not on {ell} = 0")
    for ell in off:
        if ell.evaluate(pt) == 0:
            raise NamedPointError(f"{name}: point {pt} unexpectedly lies on {ell} = 0")
    return point


# ---------------------------------------------------------------------------
# claims


@dataclass(frozen=True)
class Claim:
    claim_id: str
    locus: str
    family: str
    n: int
    q: int
    t: int
    c: str | tuple[int, ...] = "generic"
    expected: tuple[int, ...] | None = None
    max_degree: int | None = None


@dataclass
class ClaimResult:
    claim_id: str
    locus: str
    config: dict
    expected: list[int] | None
    computed: list[int]
    status: str  # pass | fail | reported
    checks: dict = field(default_factory=dict)
    stop_rule: str = ""
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "claim": self.claim_id,
            "locus": self.locus,
            "config": self.config,
            "expected": self.expected,
            "computed": self.computed,
            "computed_string": str(HilbertSeries(tuple(self.computed))) if self.computed else "0",
            "status": self.status,
            "checks": self.checks,
            "stop_rule": self.stop_rule,
            "error": self.error,
        }


def _pow(k: int, n: int) -> tuple[int, ...]:
    return HilbertSeries.product(*([qint(k)] * n)).coeffs


def _prod(*ks: int) -> tuple[int, ...]:
    return HilbertSeries.product(*(qint(k) for k in ks)).coeffs


GL0 = "GL character table at t = 0"
GL1 = "GL character table at t = 1"
SL0 = "SL character table at t = 0"
SL1 = "SL character table at t = 1"


def claims_for(scope: str) -> list[Claim]:
    if scope == "ALL":
        return [c for s in SCOPES for c in claims_for(s)]
    if scope == "GL0":
        out = [
            Claim("GL0-2-2-c0", f"{GL0}, (q,n)=(2,2), c=0", "GL", 2, 2, 0, (0,), (1,)),
            Claim("GL0-2-2-c1", f"{GL0}, (q,n)=(2,2), c!=0", "GL", 2, 2, 0, (1,), (1, 2, 2, 1)),
            Claim("GL0-2-2-generic", f"{GL0}, (q,n)=(2,2), c!=0", "GL", 2, 2, 0, "generic", (1, 2, 2, 1)),
        ]
        for q, n in ((3, 2), (2, 3), (4, 2), (5, 2)):
            out.append(Claim(f"GL0-{q}-{n}-generic", f"{GL0}, (q,n)=({q},{n})", "GL", n, q, 0, "generic", (1,)))
            for k in range(3):
                out.append(Claim(f"GL0-{q}-{n}-random{k}", f"{GL0}, (q,n)=({q},{n})", "GL", n, q, 0, f"base{k}", (1,)))
        return out
    if scope == "GL1":
        return [
            Claim("GL1-2-2-generic", f"{GL1}, (q,n)=(2,2), generic c", "GL", 2, 2, 1, "generic", _prod(4, 6)),
            Claim("GL1-2-2-c0", f"{GL1}, (q,n)=(2,2), c=0", "GL", 2, 2, 1, (0,), (1, 2, 1)),
            Claim("GL1-2-2-c1", f"{GL1}, (q,n)=(2,2), c=1", "GL", 2, 2, 1, (1,), (1,)),
            Claim("GL1-2-3-c1", f"{GL1}, (q,n)=(2,3), c=1", "GL", 3, 2, 1, (1,), (1, 3)),
            Claim("GL1-2-3-generic", f"{GL1}, (q,n)=(2,3), generic c", "GL", 3, 2, 1, "generic", _pow(2, 3)),
            Claim("GL1-3-2-generic", f"{GL1}, (q,n)=(3,2), generic c", "GL", 2, 3, 1, "generic", _pow(3, 2)),
            Claim("GL1-3-2-lsum", f"{GL1}, (q,n)=(3,2), sum lambda c = -1", "GL", 2, 3, 1, "lsum=-1", (1, 2, 3)),
            Claim("GL1-3-2-sum", f"{GL1}, (q,n)=(3,2), sum c = 1", "GL", 2, 3, 1, "sum=1", (1, 2)),
            Claim("GL1-3-3-generic", f"{GL1}, (q,n)=(3,3), generic c", "GL", 3, 3, 1, "generic", _pow(3, 3)),
            Claim("GL1-4-2-generic", f"{GL1}, (q,n)=(4,2), generic c", "GL", 2, 4, 1, "generic", _pow(2, 2)),
            Claim("GL1-5-2-generic", f"{GL1}, (q,n)=(5,2), generic c", "GL", 2, 5, 1, "generic", _pow(5, 2)),
        ]
    if scope == "SL0":
        out = [
            Claim("SL0-2-2-c0", f"{SL0}, SL_2(F_2) = GL_2(F_2), c=0", "SL", 2, 2, 0, (0,), (1,)),
            Claim("SL0-2-2-c1", f"{SL0}, SL_2(F_2) = GL_2(F_2), c!=0", "SL", 2, 2, 0, (1,), (1, 2, 2, 1)),
        ]
        for q in (3, 5):
            out.append(Claim(f"SL0-{q}-2-generic", f"{SL0}, (q,n)=({q},2)", "SL", 2, q, 0, "generic", (1,)))
            for k in range(3):
                out.append(Claim(f"SL0-{q}-2-random{k}", f"{SL0}, (q,n)=({q},2)", "SL", 2, q, 0, f"base{k}", (1,)))
        return out
    if scope == "SL1":
        out = [
            Claim("SL1-2-3-generic", f"{SL1}, SL_3(F_2) = GL_3(F_2), generic c", "SL", 3, 2, 1, "generic", _pow(2, 3)),
            Claim("SL1-3-2-generic", f"{SL1}, (q,n)=(3,2), generic c", "SL", 2, 3, 1, "generic", _prod(12, 18)),
            Claim("SL1-4-2-generic", f"{SL1}, (q,n)=(4,2), generic c", "SL", 2, 4, 1, "generic", _pow(2, 2)),
            Claim("SL1-5-2-generic", f"{SL1}, (q,n)=(5,2), generic c", "SL", 2, 5, 1, "generic", _pow(5, 2)),
            Claim("SL1-5-2-qr+2", f"{SL1}, (q,n)=(5,2), c_Q + c_R = 2", "SL", 2, 5, 1, "cq+cr=2", (1, 2, 3, 4)),
            Claim("SL1-5-2-qr-2", f"{SL1}, (q,n)=(5,2), c_Q + c_R = -2", "SL", 2, 5, 1, "cq+cr=-2", (1, 2, 3, 4, 5)),
        ]
        for a in range(3):
            for b in range(3):
                out.append(Claim(f"SL1-3-2-c{a}{b}", f"{SL1}, (q,n)=(3,2), special c not tabulated", "SL", 2, 3, 1,
                                 (a, b), None))
        return out
    raise ValueError(f"unknown scope {scope!r}")


def claim_rng(seed: int, claim_id: str) -> random.Random:
    return random.Random(f"{seed}:{claim_id}")


def _point_for(ctx: DunklContext, c, rng: random.Random):
    F = ctx.field
    if c == "generic":
        return "generic", "generic"
    if isinstance(c, str) and c.startswith("base"):
        pt = tuple(F.element(rng.randrange(F.q)) for _ in range(ctx.m))
        return pt, [F.format(x.value) for x in pt]
    if isinstance(c, str):
        pt = named_point(ctx, c)
        return pt, [F.format(x.value) for x in pt]
    pt = tuple(F.element(x) for x in c)
    return pt, [F.format(x.value) for x in pt]


def run_claim(claim: Claim, seed: int = 0) -> ClaimResult:
    rng = claim_rng(seed, claim.claim_id)
    config = {"family": claim.family, "n": claim.n, "q": claim.q, "t": claim.t, "c": claim.c}
    try:
        G = group_data(claim.family, claim.n, claim.q)
        ctx = make_context(G, claim.t)
        c_spec, shown = _point_for(ctx, claim.c, rng)
        config["c"] = shown
        run = hilbert_L_report(ctx, c_spec, claim.max_degree, rng)
    except Exception as exc:  # reported per claim; the runner keeps going
        return ClaimResult(claim.claim_id, claim.locus, config, _list(claim.expected), [], "fail",
                           error=f"{type(exc).__name__}: {exc}")
    H = run.series
    checks = {}
    ok = not run.truncated
    if claim.t == 1:
        p, n, order = G.field.p, G.rank, G.order
        checks["dim"] = H.dimension
        checks["dim_bound"] = p**n * order
        checks["dim_ok"] = H.dimension <= p**n * order
        ok = ok and checks["dim_ok"]
        try:
            h = reduced_series(H, p, n)
            checks["h"] = list(h.coeffs)
            checks["h1_ok"] = h.dimension in (1, order)
            if claim.c == "generic":
                ok = ok and checks["h1_ok"]
        except ReducedSeriesError as exc:
            checks["h"] = None
            checks["reduced_error"] = exc.reason
            if claim.c == "generic":
                ok = False
        if claim.c == "generic" and claim.family in ("GL", "SL"):
            checks["below_baby_verma"] = H.leq(baby_verma_series(claim.family, n, claim.q, 1))
            ok = ok and checks["below_baby_verma"]
    if claim.expected is None:
        status = "reported" if ok or claim.c != "generic" else "fail"
    else:
        status = "pass" if ok and H.coeffs == tuple(claim.expected) else "fail"
    return ClaimResult(claim.claim_id, claim.locus, config, _list(claim.expected), list(H.coeffs), status, checks,
                       run.stop_rule)


def _list(x):
    return None if x is None else list(x)


def _run_pair(args):
    claim, seed = args
    return run_claim(claim, seed)


def run_claims(claims: Sequence[Claim], seed: int = 0, workers: int = 1,
               runner: Callable = _run_pair) -> list[ClaimResult]:
    jobs = [(c, seed) for c in claims]
    if workers <= 1 or len(jobs) <= 1:
        results = [runner(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(runner, jobs))
    return sorted(results, key=lambda r: r.claim_id)


def verification_report(results: Sequence[ClaimResult]) -> dict:
    failing = [r.claim_id for r in results if r.status == "fail"]
    return {
        "claims": [r.to_json() for r in results],
        "overall": "pass" if not failing else "fail",
        "failing": failing,
    }


# ---------------------------------------------------------------------------
# orthogonal groups


ORTHO_PAIRS = (("O_plus", 2, 3), ("O_minus", 2, 3), ("O_plus", 2, 5), ("O_minus", 2, 5), ("O_odd", 3, 3))
ORTHO_SLOW = (("O_plus", 2, 9), ("O_minus", 2, 9))


def conjectured_reduced(family: str, n: int, q: int) -> HilbertSeries:
    if family == "O_plus" and n == 2:
        return HilbertSeries.product([1, 1], qint(q - 1))
    if family == "O_minus" and n == 2:
        return HilbertSeries.product([1, 1], qint(q + 1))
    if family == "O_odd" and n == 3:
        return HilbertSeries.of([1])
    raise ValueError(f"no conjectured series for {family} n={n}")


# symbolic blocks hold dim^2 * (#parameter monomials) coefficients; past this
# many the runner switches to independent random specializations
SYMBOLIC_LIMIT = 20_000_000


def _estimated_symbolic_size(ctx: DunklContext, max_degree: int) -> int:
    from math import comb

    dim = comb(ctx.n + max_degree - 1, max_degree)
    return dim * dim * comb(ctx.m + max_degree, max_degree) * ctx.field.r


@dataclass
class ConjectureResult:
    family: str
    n: int
    q: int
    order: int
    method: str
    H: list[int]
    h: list[int] | None
    conjectured: list[int]
    match: bool
    truncated: bool
    stop_rule: str
    note: str = ""

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "q": self.q,
            "group_order": self.order,
            "method": self.method,
            "H": self.H,
            "H_factored": HilbertSeries(tuple(self.H)).factored() if self.H else "0",
            "h": self.h,
            "h_string": None if self.h is None else str(HilbertSeries(tuple(self.h))),
            "conjectured_h": self.conjectured,
            "status": "match" if self.match else "mismatch",
            "truncated": self.truncated,
            "stop_rule": self.stop_rule,
            "note": self.note,
        }


def run_conjecture_pair(family: str, n: int, q: int, seed: int = 0, max_degree: int | None = None,
                        samples: int = 2) -> ConjectureResult:
    rng = claim_rng(seed, f"{family}-{n}-{q}")
    G = group_data(family, n, q)
    ctx = make_context(G, 1)
    p = G.field.p
    conj = conjectured_reduced(family, n, q)
    conj_top = p * conj.degree + n * (p - 1)
    if max_degree is None:
        max_degree = max(2 * conj_top + 2, 30)
    note = ""
    if _estimated_symbolic_size(ctx, max_degree) <= SYMBOLIC_LIMIT:
        run = hilbert_L_report(ctx, "generic", max_degree, rng)
        method = "generic"
    else:
        runs = [hilbert_L_report(ctx, "random", max_degree, rng) for _ in range(samples)]
        series = {r.series.coeffs for r in runs}
        run = max(runs, key=lambda r: r.series.dimension)
        method = f"random specialization x{samples}"
        if len(series) > 1:
            note = "random specializations disagree; reporting the largest"
    H = run.series
    try:
        h = list(reduced_series(H, p, n).coeffs)
    except ReducedSeriesError as exc:
        h = None
        note = (note + "; " if note else "") + f"reduced series undefined: {exc.reason}"
    match = h is not None and tuple(h) == conj.coeffs and not run.truncated
    return ConjectureResult(family, n, q, G.order, method, list(H.coeffs), h, list(conj.coeffs), match,
                            run.truncated, run.stop_rule, note)


def _run_conj(args):
    return run_conjecture_pair(*args)


def run_conjecture(slow: bool = False, seed: int = 0, workers: int = 1,
                   pairs: Sequence[tuple[str, int, int]] | None = None) -> list[ConjectureResult]:
    pairs = list(pairs) if pairs is not None else list(ORTHO_PAIRS) + (list(ORTHO_SLOW) if slow else [])
    jobs = [(f, n, q, seed) for f, n, q in pairs]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_conj(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_conj, jobs))
