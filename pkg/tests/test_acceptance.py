"""Acceptance criteria 1-13.

Each test records named checks, prints one PASS/FAIL line and then asserts.
Run alone with `pytest tests/test_acceptance.py -s` or `python tests/test_acceptance.py`.
"""

import itertools
import random
import sys
import time

import numpy as np
import pytest

from cherednik_lab.dunkl import dunkl_apply, dunkl_commute_check, is_singular, make_context
from cherednik_lab.form import candidate_divisors, diagonal_profile, gram_block, rank_kernel
from cherednik_lab.gf import PowerSumDomain, field_of_order, power_sum, power_sum_bruteforce
from cherednik_lab.groups import group_data
from cherednik_lab.linalg import rank
from cherednik_lab.poly import ParamScalar, Polynomial, divisibility_test, monomial_basis
from cherednik_lab.series import (
    HilbertSeries,
    ReducedSeriesError,
    baby_verma_series,
    dickson_invariants,
    frobenius_check,
    hilbert_L_report,
    invariant_under,
    qint,
    reduced_series,
)
from cherednik_lab.verify import conjectured_reduced, run_conjecture

from conftest import random_homogeneous

ACCEPTANCE_LINES = []


class Checks:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.items: list[tuple[str, bool, str]] = []
        self.notes: list[str] = []
        self.start = time.perf_counter()

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.items.append((label, bool(ok), detail))
        return bool(ok)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def failures(self) -> list[str]:
        return [f"{label}: {detail}" if detail else label for label, ok, detail in self.items if not ok]

    @property
    def ok(self) -> bool:
        return bool(self.items) and not self.failures

    def line(self) -> str:
        elapsed = time.perf_counter() - self.start
        passed = sum(ok for _, ok, _ in self.items)
        status = "PASS" if self.ok else "FAIL"
        text = f"criterion {self.number:2d} {status} {self.title} ({passed}/{len(self.items)} checks, {elapsed:.1f}s)"
        for f in self.failures:
            text += f"\n    failed: {f}"
        for n in self.notes:
            text += f"\n    note: {n}"
        return text

    def done(self) -> None:
        assert self.ok, "; ".join(self.failures) or "no checks recorded"


@pytest.fixture
def criterion(request, capsys):
    made = []

    def make(number, title):
        made.append(Checks(number, title))
        return made[-1]

    yield make
    for c in made:
        line = c.line()
        ACCEPTANCE_LINES.append(line)
        request.config.stash.setdefault(ACCEPTANCE_KEY, []).append(line)
        with capsys.disabled():
            print(line)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def ctx_of(family, n, q, t=1):
    return make_context(group_data(family, n, q), t)


def point(ctx, *vals):
    return tuple(ctx.field.element(v) for v in vals)


def series(ctx, c="generic", max_degree=None, rng=None):
    run = hilbert_L_report(ctx, c, max_degree, rng or random.Random(0))
    return run.series, run


def pw(k, n):
    return HilbertSeries.product(*([qint(k)] * n))


def quotient_series(F, n, gens, top):
    """Hilbert series of F[x]/(gens) up to degree top, by linear algebra on each graded piece."""
    out = []
    for k in range(top + 1):
        basis = monomial_basis(n, k)
        rows = []
        for g in gens:
            d = int(g.degree())
            if d <= k:
                for e in monomial_basis(n, k - d):
                    rows.append((Polynomial.monomial(F, e) * g).to_vector(basis))
        r = rank(F, np.array(rows, dtype=np.int64)) if rows else 0
        out.append(len(basis) - r)
    while out and out[-1] == 0:
        out.pop()
    return HilbertSeries.of(out)


# ---------------------------------------------------------------------------


def test_criterion_01_gram_golden(criterion):
    c = criterion(1, "GL_2(F_2) degree 4 Gram block golden")
    ctx = ctx_of("GL", 2, 2)
    F = ctx.field
    x = ParamScalar.variable(F, 1, 0)
    A, B, Z = x * x * (x + 1), x * (x + 1), ParamScalar.zero(F, 1)
    golden = [[A, A, A, A, Z], [A, B, Z, Z, A], [A, Z, Z, Z, A], [A, Z, Z, B, A], [Z, A, A, A, A]]
    blk = gram_block(ctx, 4)
    c.check("basis x1^4 .. x2^4", blk.basis == [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)])
    c.check("entries", blk.matrix() == golden, str(blk.entry_strings()))
    rep = rank_kernel(blk, "generic", rng=random.Random(1))
    c.check("generic rank 4", rep.rank == 4, str(rep.rank))
    m = lambda a, b: Polynomial.monomial(rep.field, (a, b))
    c.check("kernel x1^4 + x1^2 x2^2 + x2^4", rep.kernel == [m(4, 0) + m(2, 2) + m(0, 4)], str(rep.kernel))
    at0 = rank_kernel(gram_block(ctx.specialize(point(ctx, 0)), 4), "at-c")
    c.check("rank 0 at c = 0", at0.rank == 0, str(at0.rank))
    c.done()


def test_criterion_02_gl_t0(criterion):
    c = criterion(2, "GL characters at t = 0")
    rng = random.Random(2)
    for q, n in ((3, 2), (2, 3), (4, 2), (5, 2)):
        ctx = ctx_of("GL", n, q, 0)
        H, _ = series(ctx)
        c.check(f"GL_{n}(F_{q}) generic", H.coeffs == (1,), str(H))
        for k in range(3):
            pt = point(ctx, *(rng.randrange(q) for _ in range(ctx.m)))
            H, _ = series(ctx, pt)
            c.check(f"GL_{n}(F_{q}) at {[str(v) for v in pt]}", H.coeffs == (1,), str(H))
    ctx = ctx_of("GL", 2, 2, 0)
    H0, _ = series(ctx, point(ctx, 0))
    H1, _ = series(ctx, point(ctx, 1))
    c.check("GL_2(F_2) c=0", H0.coeffs == (1,), str(H0))
    c.check("GL_2(F_2) c=1", H1.coeffs == (1, 2, 2, 1), str(H1))
    c.done()


def test_criterion_03_gl_t1(criterion):
    c = criterion(3, "GL characters at t = 1")
    for q, n in ((3, 2), (5, 2), (2, 3), (4, 2), (3, 3)):
        H, run = series(ctx_of("GL", n, q))
        p = field_of_order(q).p
        c.check(f"GL_{n}(F_{q}) generic", H == pw(p, n) and not run.truncated, str(H))
    H, _ = series(ctx_of("GL", 2, 2))
    c.check("GL_2(F_2) generic", H == HilbertSeries.product(qint(4), qint(6)), str(H))
    ctx = ctx_of("GL", 3, 2)
    H, _ = series(ctx, point(ctx, 1))
    c.check("GL_3(F_2) c=1", H.coeffs == (1, 3), str(H))
    ctx = ctx_of("GL", 2, 3)
    H, _ = series(ctx, point(ctx, 1, 0))
    c.check("GL_2(F_3) at (1,0)", H.coeffs == (1, 2), str(H))
    H, _ = series(ctx, point(ctx, 2, 0))
    c.check("GL_2(F_3) at (2,0)", H.coeffs == (1, 2, 3), str(H))
    ctx = ctx_of("GL", 2, 2)
    H, _ = series(ctx, point(ctx, 1))
    c.check("GL_2(F_2) c=1", H.coeffs == (1,), str(H))
    H, _ = series(ctx, point(ctx, 0))
    c.check("GL_2(F_2) c=0", H.coeffs == (1, 2, 1), str(H))
    c.done()


def test_criterion_04_structure(criterion):
    c = criterion(4, "contravariant form structure")
    cases = [("GL", 2, 3), ("GL", 2, 5), ("GL", 3, 2), ("GL", 2, 4), ("GL", 3, 3), ("SL", 2, 5), ("SL", 2, 7)]
    for fam, n, q in cases:
        ctx = ctx_of(fam, n, q)
        p = ctx.field.p
        cutoff = n * (p - 1) + 1 if fam == "GL" else 2 * p - 1
        profs = diagonal_profile(ctx, cutoff + 1)
        c.check(f"{fam}_{n}(F_{q}) diagonal to {cutoff + 1}", all(pr.is_diagonal for pr in profs))
        c.check(f"{fam}_{n}(F_{q}) proportional", all(pr.proportional for pr in profs))
        zero = [pr.degree for pr in profs if pr.is_zero]
        c.check(f"{fam}_{n}(F_{q}) B_k = 0 exactly for k >= {cutoff}",
                zero == list(range(cutoff, cutoff + 2)), str(zero))
    ctx = ctx_of("GL", 2, 2)
    c.check("GL_2(F_2) not diagonal", not all(pr.is_diagonal for pr in diagonal_profile(ctx, 4)))
    for p in (3, 5):
        ctx = ctx_of("GL", 2, p)
        s1, s2 = (str(x) for x in candidate_divisors(ctx).values())
        for pr in diagonal_profile(ctx, 2 * (p - 1)):
            c.check(f"GL_2(F_{p}) degree {pr.degree} divisible by {s1}",
                    (pr.divisors_found[s1] >= 1) == (pr.degree >= p - 1))
            c.check(f"GL_2(F_{p}) degree {pr.degree} divisible by {s2}",
                    (pr.divisors_found[s2] >= 1) == (pr.degree >= p))
    ctx = ctx_of("GL", 3, 2)
    ell = next(iter(candidate_divisors(ctx).values()))
    for pr in diagonal_profile(ctx, 3)[2:]:
        nonzero = [x for x in pr.entries if not x.is_zero()]
        c.check(f"GL_3(F_2) degree {pr.degree} divisible by {ell}",
                all(divisibility_test(ell, x) for x in nonzero), str(ell))
    c.done()


def test_criterion_05_sl_t0(criterion):
    c = criterion(5, "SL characters at t = 0")
    rng = random.Random(5)
    for q in (3, 5):
        ctx = ctx_of("SL", 2, q, 0)
        H, _ = series(ctx)
        c.check(f"SL_2(F_{q}) generic", H.coeffs == (1,), str(H))
        for _ in range(3):
            pt = point(ctx, *(rng.randrange(q) for _ in range(ctx.m)))
            H, _ = series(ctx, pt)
            c.check(f"SL_2(F_{q}) at {[str(v) for v in pt]}", H.coeffs == (1,), str(H))
    ctx = ctx_of("SL", 2, 2, 0)
    H0, _ = series(ctx, point(ctx, 0))
    H1, _ = series(ctx, point(ctx, 1))
    c.check("SL_2(F_2) c=0", H0.coeffs == (1,), str(H0))
    c.check("SL_2(F_2) c=1", H1.coeffs == (1, 2, 2, 1), str(H1))
    c.done()


def test_criterion_06_sl_t1(criterion):
    c = criterion(6, "SL characters at t = 1")
    ctx = ctx_of("SL", 2, 5)
    H, _ = series(ctx)
    c.check("SL_2(F_5) generic", H == pw(5, 2), str(H))
    H, _ = series(ctx, point(ctx, 1, 1))
    c.check("SL_2(F_5) at (1,1)", H.coeffs == (1, 2, 3, 4), str(H))
    H, _ = series(ctx, point(ctx, 1, 2))
    c.check("SL_2(F_5) at (1,2)", H.coeffs == (1, 2, 3, 4, 5), str(H))
    H, run = series(ctx_of("SL", 2, 3))
    c.check("SL_2(F_3) generic", H == HilbertSeries.product(qint(12), qint(18)), str(H))
    c.check("SL_2(F_3) blocks through degree 28", len(run.reports) >= 29 and not run.truncated,
            str(len(run.reports)))
    sl, gl = ctx_of("SL", 3, 2), ctx_of("GL", 3, 2)
    c.check("SL_3(F_2) blocks equal GL_3(F_2)",
            all(gram_block(sl, i).matrix() == gram_block(gl, i).matrix() for i in range(5)))
    H, _ = series(sl)
    c.check("SL_3(F_2) generic", H == pw(2, 3), str(H))
    c.done()


def test_criterion_07_reductions(criterion):
    c = criterion(7, "SL to GL reduction identities")
    sl, gl = ctx_of("SL", 2, 5), ctx_of("GL", 2, 5)
    F = sl.field
    half = F.inv(2)
    images = [ParamScalar.linear(F, [half, half])] + [ParamScalar.zero(F, 2)] * (gl.m - 1)
    for i in range(9):
        sub = [[x.substitute(images) for x in row] for row in gram_block(gl, i).matrix()]
        c.check(f"SL_2(F_5) degree {i}", gram_block(sl, i).matrix() == sub)
    sl, gl = ctx_of("SL", 2, 4), ctx_of("GL", 2, 4)
    F = sl.field
    c.check("GL_2(F_4) first class unipotent", gl.group.classes[0].kind == "unipotent")
    images = [ParamScalar.variable(F, 1, 0)] + [ParamScalar.zero(F, 1)] * (gl.m - 1)
    for i in range(6):
        sub = [[x.substitute(images) for x in row] for row in gram_block(gl, i).matrix()]
        c.check(f"SL_2(F_4) degree {i}", gram_block(sl, i).matrix() == sub)
    c.done()


def _coef(F, m):
    def draw(rng):
        terms = {tuple(rng.randint(0, 1) for _ in range(m)): rng.randrange(1, F.q) for _ in range(2)}
        return ParamScalar(F, m, terms)

    return draw


def test_criterion_08_dunkl(criterion):
    c = criterion(8, "singular vectors and Dunkl commutativity")
    cases = [("GL", 2, 3), ("GL", 2, 5), ("GL", 3, 2), ("GL", 2, 4), ("GL", 3, 3), ("SL", 2, 5), ("SL", 2, 4),
             ("SL", 3, 2)]
    for fam, n, q in cases + [("SL", 2, 3)]:
        ctx1 = ctx_of(fam, n, q, 1)
        ctx0 = ctx1.with_t(0)
        p = ctx1.field.p
        sing = all(is_singular(ctx1, Polynomial.monomial(ctx1.ring, tuple(p if k == i else 0 for k in range(n))))
                   for i in range(n))
        if (fam, n, q) == ("SL", 2, 3):
            c.check("SL_2(F_3) x_i^3 not singular, consistent with criterion 6", not sing)
            c.note("SL_2(F_3): x^3 is not singular, its generic series has top degree 28")
        else:
            c.check(f"{fam}_{n}(F_{q}) x_i^{p} singular", sing)
        lin = all(dunkl_apply(ctx0, j, Polynomial.variable(ctx0.ring, n, k)).is_zero()
                  for j in range(n) for k in range(n))
        c.check(f"{fam}_{n}(F_{q}) D_y x = 0 at t = 0", lin)
    ctx0 = ctx_of("GL", 2, 2, 0)
    c.check("GL_2(F_2) D_y x != 0 at t = 0",
            not dunkl_apply(ctx0, 0, Polynomial.variable(ctx0.ring, 2, 0)).is_zero())
    for fam, n, q in [("GL", 2, 2)] + cases:
        for t in (0, 1):
            ctx = ctx_of(fam, n, q, t)
            rng = random.Random(f"{fam}{n}{q}{t}")
            coef = _coef(ctx.field, ctx.m)
            ok = True
            for _ in range(50):
                f = random_homogeneous(ctx.ring, n, rng.randint(1, 4 if n == 2 else 3), rng, terms=3, coef=coef)
                ok = ok and all(dunkl_commute_check(ctx, j, k, f) for j, k in itertools.combinations(range(n), 2))
            c.check(f"{fam}_{n}(F_{q}) t={t} commute on 50 inputs", ok)
    c.done()


def test_criterion_09_dickson(criterion):
    c = criterion(9, "Dickson invariants and baby Verma series")
    for n, q in ((2, 2), (2, 3), (3, 2)):
        ds = dickson_invariants(n, q)
        c.check(f"({n},{q}) deg L", ds.degrees["L"] == sum(q**k for k in range(n)), str(ds.degrees))
        c.check(f"({n},{q}) deg Q_i", all(ds.degrees[f"Q{i}"] == q**n - q**i for i in range(n)), str(ds.degrees))
        G, S = group_data("GL", n, q), group_data("SL", n, q)
        refl = [s.matrix for s in G.reflections]
        c.check(f"({n},{q}) Q_i invariant under GL generators", all(invariant_under(Q, G.generators, G.field)
                                                                   for Q in ds.Q))
        c.check(f"({n},{q}) Q_i invariant under all reflections", all(invariant_under(Q, refl, G.field)
                                                                     for Q in ds.Q))
        c.check(f"({n},{q}) L invariant under SL generators", invariant_under(ds.L, S.generators, S.field))
        F = G.field
        for fam, gens in (("GL", list(ds.Q)), ("SL", [ds.L] + list(ds.Q[1:]))):
            for t in (0, 1):
                power = F.p if t else 1
                ideal = [g ** power for g in gens]
                top = int(sum(g.degree() for g in ideal)) - n
                want = quotient_series(F, n, ideal, top + 1)
                got = baby_verma_series(fam, n, q, t)
                if n == 3 and t == 1:
                    # the ideal computation is too large here; compare with the product formula directly
                    degs = [int(g.degree()) for g in ideal]
                    c.check(f"{fam}_{n}(F_{q}) t={t} baby Verma product",
                            got == HilbertSeries.product(*(qint(d) for d in degs)), str(got))
                    continue
                c.check(f"{fam}_{n}(F_{q}) t={t} baby Verma vs quotient", got == want, f"{got} vs {want}")
    c.done()


def test_criterion_10_dimension_and_reduced(criterion):
    c = criterion(10, "dimension bound, h(1) and reduced series")
    rows = [("GL", 2, 2), ("GL", 2, 3), ("GL", 2, 5), ("GL", 3, 2), ("GL", 2, 4), ("GL", 3, 3),
            ("SL", 2, 5), ("SL", 2, 4), ("SL", 3, 2), ("SL", 2, 3)]
    for fam, n, q in rows:
        ctx = ctx_of(fam, n, q)
        G = ctx.group
        p = G.field.p
        H, _ = series(ctx)
        c.check(f"{fam}_{n}(F_{q}) generic dim <= p^n |G|", H.dimension <= p**n * G.order,
                f"{H.dimension} vs {p**n * G.order}")
        try:
            h = reduced_series(H, p, n)
            c.check(f"{fam}_{n}(F_{q}) h(1) in {{1, |G|}}", h.dimension in (1, G.order), str(h))
        except ReducedSeriesError as exc:
            c.check(f"{fam}_{n}(F_{q}) reduced series", False, exc.reason)
    specials = [("GL", 2, 2, (0,)), ("GL", 2, 2, (1,)), ("GL", 3, 2, (1,)), ("GL", 2, 3, (1, 0)),
                ("GL", 2, 3, (2, 0)), ("SL", 2, 5, (1, 1)), ("SL", 2, 5, (1, 2))]
    for fam, n, q, vals in specials:
        ctx = ctx_of(fam, n, q)
        H, _ = series(ctx, point(ctx, *vals))
        bound = ctx.field.p**n * ctx.group.order
        c.check(f"{fam}_{n}(F_{q}) at {vals} dim <= p^n |G|", H.dimension <= bound)
    c.done()


def test_criterion_11_finite_field_sums(criterion):
    c = criterion(11, "power sums and vanishing sums over F_q^n")
    for q in (3, 5, 7, 9):
        F = field_of_order(q)
        for dom in PowerSumDomain:
            ok = all(power_sum(F, d, dom) == power_sum_bruteforce(F, d, dom) for d in range(3 * (q - 1) + 1))
            c.check(f"F_{q} {dom.name} power sums", ok)
    rng = random.Random(11)
    ok = True
    for _ in range(100):
        q = rng.choice([2, 3, 4, 5, 7, 9])
        n = rng.randint(1, 3 if q <= 5 else 2)
        F = field_of_order(q)
        short = rng.randrange(n)
        terms = {}
        for _ in range(rng.randint(1, 5)):
            e = [rng.randint(0, 2 * q) for _ in range(n)]
            e[short] = rng.randint(0, q - 2)
            terms[tuple(e)] = rng.randrange(1, q)
        f = Polynomial(F, n, terms)
        total = 0
        for pt in itertools.product(range(q), repeat=n):
            for e, v in f.terms.items():
                term = v
                for x, k in zip(pt, e):
                    term = F.mul(term, F.pow(x, k))
                total = F.add(total, term)
        ok = ok and total == 0
    c.check("sum over F_q^n vanishes when some exponent is below q - 1 (100 polynomials)", ok)
    c.done()


def test_criterion_12_frobenius(criterion):
    c = criterion(12, "Frobenius property")
    for n, q in ((2, 3), (2, 2)):
        rep = frobenius_check(ctx_of("GL", n, q))
        c.check(f"GL_{n}(F_{q}) generic Frobenius", rep.frobenius and rep.top_dim == 1, str(rep.hilbert))
    rep = frobenius_check(make_context(group_data("Sym", 5, 3), 0), "generic", max_degree=10)
    want = HilbertSeries.product([1, 1], [1, 1, 1], [1, 2, 3, 4])
    c.check("Sym(5) char 3 t=0 series", rep.hilbert == want, str(rep.hilbert))
    c.check("Sym(5) top_dim 4", rep.top_dim == 4, str(rep.top_dim))
    c.check("Sym(5) not Frobenius", not rep.frobenius)
    c.done()


def test_criterion_13_orthogonal_conjecture(criterion):
    c = criterion(13, "orthogonal group conjecture runner")
    results = run_conjecture(slow=False, seed=0, workers=2)
    c.check("runner covers the five pairs", [(r.family, r.n, r.q) for r in results] ==
            [("O_plus", 2, 3), ("O_minus", 2, 3), ("O_plus", 2, 5), ("O_minus", 2, 5), ("O_odd", 3, 3)])
    for r in results:
        c.check(f"{r.family}({r.n},{r.q}) completed", not r.truncated and r.h is not None, r.note)
        c.check(f"{r.family}({r.n},{r.q}) conjectured form", r.conjectured == list(conjectured_reduced(r.family, r.n,
                                                                                                r.q).coeffs))
        status = "match" if r.match else "mismatch"
        c.note(f"{r.family}({r.n},{r.q}): {status}, h = {HilbertSeries(tuple(r.h or [0]))} ({r.method})")
    c.done()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
