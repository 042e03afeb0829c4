"""Sparse multivariate polynomials over a field or over the parameter ring F_q[c_1..c_m].

Monomials are exponent tuples; tuple comparison is exactly the lex order
with x_1 > x_2 > ... > x_n, so sorting in reverse gives decreasing lex.

ParamScalar string grammar (used in all serialized output)::

    scalar   := "0" | term (" + " term)*
    term     := coef | [coef "*"] mono
    mono     := var ("*" var)*
    var      := "c" k ["^" e]             (k = 1..m, e >= 2)
    coef     := integer in 1..p-1 | "(" element ")"
    element  := field element in the power basis of the generator `a`, e.g. "a+2"

Terms are listed by decreasing lex order of their exponent vectors.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import Field, FieldElement

Exponent = tuple[int, ...]


class NotDivisibleError(ArithmeticError):
    """Exact division failed; `remainder` holds the nonzero witness."""

    def __init__(self, message: str, remainder=None):
        super().__init__(message)
        self.remainder = remainder


# ---------------------------------------------------------------------------
# monomials


def monomial_basis(n: int, i: int) -> list[Exponent]:
    """All degree-i monomials in n variables, decreasing lex."""
    if n < 1 or i < 0:
        raise ValueError("need n >= 1 and i >= 0")
    if n == 1:
        return [(i,)]
    out = []
    for a in range(i, -1, -1):
        for rest in monomial_basis(n - 1, i - a):
            out.append((a,) + rest)
    return out


def monomial_str(e: Exponent, var: str = "x") -> str:
    parts = []
    for k, a in enumerate(e):
        if a == 1:
            parts.append(f"{var}{k + 1}")
        elif a > 1:
            parts.append(f"{var}{k + 1}^{a}")
    return "*".join(parts) if parts else "1"


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, k: int) -> Exponent:
    return tuple(1 if j == k else 0 for j in range(n))


# ---------------------------------------------------------------------------
# parameter scalars


class ParamScalar:
    """Polynomial in c_1..c_m over a field, canonical sparse form."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: dict[Exponent, int] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: v for e, v in (terms or {}).items() if v}

    # constructors
    @classmethod
    def zero(cls, field: Field, nvars: int) -> "ParamScalar":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: Field, nvars: int, a: int) -> "ParamScalar":
        return cls(field, nvars, {(0,) * nvars: a})

    @classmethod
    def variable(cls, field: Field, nvars: int, k: int) -> "ParamScalar":
        return cls(field, nvars, {_unit(nvars, k): 1})

    @classmethod
    def linear(cls, field: Field, coeffs: Sequence[int], const: int = 0) -> "ParamScalar":
        m = len(coeffs)
        terms = {_unit(m, k): a for k, a in enumerate(coeffs)}
        terms[(0,) * m] = const
        return cls(field, m, terms)

    def _like(self, terms: dict[Exponent, int]) -> "ParamScalar":
        return ParamScalar(self.field, self.nvars, terms)

    def _coerce(self, other) -> "ParamScalar":
        if isinstance(other, ParamScalar):
            if other.field != self.field or other.nvars != self.nvars:
                raise ValueError("parameter rings differ")
            return other
        if isinstance(other, FieldElement):
            return ParamScalar.constant(self.field, self.nvars, other.value)
        if isinstance(other, int) and not isinstance(other, bool):
            return ParamScalar.constant(self.field, self.nvars, self.field.from_int(other))
        raise TypeError(f"cannot combine ParamScalar with {type(other).__name__}")

    # arithmetic
    def __add__(self, other) -> "ParamScalar":
        other = self._coerce(other)
        F = self.field
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = F.add(out.get(e, 0), v)
        return self._like(out)

    def __neg__(self) -> "ParamScalar":
        F = self.field
        return self._like({e: F.neg(v) for e, v in self.terms.items()})

    def __sub__(self, other) -> "ParamScalar":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "ParamScalar":
        other = self._coerce(other)
        F = self.field
        out: dict[Exponent, int] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = F.add(out.get(e, 0), F.mul(v1, v2))
        return self._like(out)

    def __pow__(self, k: int) -> "ParamScalar":
        out = ParamScalar.constant(self.field, self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, a: int) -> "ParamScalar":
        F = self.field
        return self._like({e: F.mul(v, a) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamScalar):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def leading(self) -> tuple[Exponent, int]:
        e = max(self.terms)
        return e, self.terms[e]

    def evaluate(self, values: Sequence[int], field: Field | None = None) -> int:
        """Evaluate at codes `values` of `field` (default: own field; else an extension)."""
        F = field or self.field
        emb = None if F == self.field else self.field.embedding_into(F)
        acc = 0
        for e, v in self.terms.items():
            term = int(emb[v]) if emb is not None else v
            for x, k in zip(values, e):
                if k:
                    term = F.mul(term, F.pow(x, k))
            acc = F.add(acc, term)
        return acc

    def substitute(self, images: Sequence["ParamScalar"]) -> "ParamScalar":
        """Replace c_k by images[k] (all living in a common target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0]
        out = ParamScalar.zero(target.field, target.nvars)
        cache: dict[tuple[int, int], ParamScalar] = {}
        for e, v in self.terms.items():
            term = ParamScalar.constant(target.field, target.nvars, v)
            for k, a in enumerate(e):
                if a:
                    if (k, a) not in cache:
                        cache[(k, a)] = images[k] ** a
                    term = term * cache[(k, a)]
            out = out + term
        return out

    def divide_exact(self, other: "ParamScalar") -> "ParamScalar":
        """Exact quotient by lex division; raises NotDivisibleError otherwise."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero parameter polynomial")
        F = self.field
        lead_e, lead_v = other.leading()
        inv_lead = F.inv(lead_v)
        rem = dict(self.terms)
        quot: dict[Exponent, int] = {}
        while rem:
            e = max(rem)
            v = rem[e]
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if min(shift) < 0:
                raise NotDivisibleError("parameter polynomial not divisible", self._like(rem))
            coef = F.mul(v, inv_lead)
            quot[shift] = coef
            for e2, v2 in other.terms.items():
                t = _add_exp(shift, e2)
                nv = F.sub(rem.get(t, 0), F.mul(coef, v2))
                if nv:
                    rem[t] = nv
                else:
                    rem.pop(t, None)
        return self._like(quot)

    # formatting
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        F = self.field
        pieces = []
        for e in sorted(self.terms, reverse=True):
            v = self.terms[e]
            mono = monomial_str(e, "c") if any(e) else ""
            coef = F.format(v)
            if F.r > 1 and not F.in_prime_subfield(v):
                coef = f"({coef})"
            if not mono:
                pieces.append(coef)
            elif v == 1:
                pieces.append(mono)
            else:
                pieces.append(f"{coef}*{mono}")
        return " + ".join(pieces)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str, field: Field, nvars: int) -> "ParamScalar":
        text = text.strip()
        out = cls.zero(field, nvars)
        if text == "0":
            return out
        for term in _split_terms(text):
            coef = 1
            e = [0] * nvars
            for factor in _split_factors(term):
                if factor.startswith("("):
                    coef = field.mul(coef, field.parse(factor[1:-1]))
                elif factor.startswith("c"):
                    name, _, power = factor.partition("^")
                    e[int(name[1:]) - 1] += int(power) if power else 1
                else:
                    coef = field.mul(coef, field.parse(factor))
            out = out + cls(field, nvars, {tuple(e): coef})
        return out


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "+" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return [t for t in out if t]


def _split_factors(term: str) -> list[str]:
    return [f for f in re.findall(r"\([^)]*\)|[^*]+", term) if f]


# ---------------------------------------------------------------------------
# coefficient rings


class ParamRing:
    """The ring F_q[c_1..c_m] as a coefficient ring for Polynomial."""

    def __init__(self, field: Field, nvars: int):
        self.field = field
        self.nvars = nvars
        self.zero = ParamScalar.zero(field, nvars)
        self.one = ParamScalar.constant(field, nvars, 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamRing) and (self.field, self.nvars) == (other.field, other.nvars)

    def __hash__(self) -> int:
        return hash(("param", self.field, self.nvars))

    def add(self, a: ParamScalar, b: ParamScalar) -> ParamScalar:
        return a + b

    def sub(self, a: ParamScalar, b: ParamScalar) -> ParamScalar:
        return a - b

    def neg(self, a: ParamScalar) -> ParamScalar:
        return -a

    def mul(self, a: ParamScalar, b: ParamScalar) -> ParamScalar:
        return a * b

    def is_zero(self, a: ParamScalar) -> bool:
        return a.is_zero()

    def scale(self, a: ParamScalar, b: int) -> ParamScalar:
        return a.scale(b)

    def from_base(self, a: int) -> ParamScalar:
        return ParamScalar.constant(self.field, self.nvars, a)

    def format(self, a: ParamScalar) -> str:
        return str(a)

    def variable(self, k: int) -> ParamScalar:
        return ParamScalar.variable(self.field, self.nvars, k)


Ring = Field | ParamRing


def base_field(ring: Ring) -> Field:
    return ring if isinstance(ring, Field) else ring.field


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Element of ring[x_1..x_n]; terms map exponent tuples to nonzero ring elements."""

    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring: Ring, nvars: int, terms: dict[Exponent, object] | None = None):
        self.ring = ring
        self.nvars = nvars
        self.terms = {e: v for e, v in (terms or {}).items() if not ring.is_zero(v)}

    @classmethod
    def zero(cls, ring: Ring, nvars: int) -> "Polynomial":
        return cls(ring, nvars)

    @classmethod
    def monomial(cls, ring: Ring, e: Exponent, coef=None) -> "Polynomial":
        return cls(ring, len(e), {tuple(e): ring.one if coef is None else coef})

    @classmethod
    def variable(cls, ring: Ring, nvars: int, k: int) -> "Polynomial":
        return cls.monomial(ring, _unit(nvars, k))

    @classmethod
    def from_vector(cls, ring: Ring, basis: Sequence[Exponent], values: Sequence) -> "Polynomial":
        return cls(ring, len(basis[0]), dict(zip(basis, values)))

    def _like(self, terms) -> "Polynomial":
        return Polynomial(self.ring, self.nvars, terms)

    def _check(self, other: "Polynomial") -> None:
        if other.ring != self.ring or other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        R = self.ring
        out = dict(self.terms)
        for e, v in other.terms.items():
            out[e] = R.add(out[e], v) if e in out else v
        return self._like(out)

    def __neg__(self) -> "Polynomial":
        R = self.ring
        return self._like({e: R.neg(v) for e, v in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        R = self.ring
        out: dict[Exponent, object] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = _add_exp(e1, e2)
                prod = R.mul(v1, v2)
                out[e] = R.add(out[e], prod) if e in out else prod
        return self._like(out)

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.monomial(self.ring, (0,) * self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, a: int) -> "Polynomial":
        """Multiply by a base-field code."""
        R = self.ring
        return self._like({e: R.scale(v, a) for e, v in self.terms.items()})

    def times(self, coef) -> "Polynomial":
        """Multiply by a ring element."""
        R = self.ring
        return self._like({e: R.mul(v, coef) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms)))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> float:
        return max((sum(e) for e in self.terms), default=float("-inf"))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for e, v in self.terms.items():
            parts.setdefault(sum(e), {})[e] = v
        return {d: self._like(t) for d, t in sorted(parts.items())}

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), self.ring.zero)

    def to_vector(self, basis: Sequence[Exponent]) -> list:
        return [self.coefficient(e) for e in basis]

    def map_coefficients(self, fn, ring: Ring) -> "Polynomial":
        return Polynomial(ring, self.nvars, {e: fn(v) for e, v in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        return sorted(self.terms.items(), reverse=True)

    def to_json(self) -> list[dict]:
        R = self.ring
        return [{"exponents": list(e), "coefficient": R.format(v)} for e, v in self.sorted_terms()]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        R = self.ring
        pieces = []
        for e, v in self.sorted_terms():
            coef = R.format(v)
            mono = monomial_str(e)
            if mono == "1":
                pieces.append(coef if " " not in coef else f"({coef})")
            elif coef == "1":
                pieces.append(mono)
            else:
                pieces.append(f"({coef})*{mono}" if (" " in coef or "+" in coef) else f"{coef}*{mono}")
        return " + ".join(pieces)

    __repr__ = __str__


@dataclass(frozen=True)
class LinearForm:
    """alpha = sum_i coeffs[i] x_i over `field`."""

    field: Field
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def leading_index(self) -> int:
        for k, a in enumerate(self.coeffs):
            if a:
                return k
        raise ValueError("zero linear form")

    def as_polynomial(self, ring: Ring | None = None) -> Polynomial:
        ring = ring or self.field
        n = len(self.coeffs)
        return Polynomial(ring, n, {_unit(n, k): ring.from_base(a) for k, a in enumerate(self.coeffs) if a})

    def pair(self, y: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for a, b in zip(self.coeffs, y):
            acc = F.add(acc, F.mul(a, b))
        return acc


# ---------------------------------------------------------------------------
# operations


def partial_derivative(f: Polynomial, j: int) -> Polynomial:
    """d/dx_j (0-based j), exponent factors reduced mod p."""
    R = f.ring
    F = base_field(R)
    out = {}
    for e, v in f.terms.items():
        a = e[j] % F.p
        if a:
            e2 = e[:j] + (e[j] - 1,) + e[j + 1 :]
            out[e2] = R.scale(v, F.from_int(a))
    return f._like(out)


def linear_substitute(f: Polynomial, M: Sequence[Sequence[int]]) -> Polynomial:
    """Substitute x_j -> sum_i M[i][j] x_i (M over the base field, codes)."""
    n = f.nvars
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError(f"substitution matrix must be {n}x{n}")
    R = f.ring
    images = [Polynomial(R, n, {_unit(n, i): R.from_base(M[i][j]) for i in range(n) if M[i][j]}) for j in range(n)]
    powers: dict[tuple[int, int], Polynomial] = {}
    one = Polynomial.monomial(R, (0,) * n)
    out = Polynomial.zero(R, n)
    for e, v in f.terms.items():
        term = one
        for j, a in enumerate(e):
            if a:
                if (j, a) not in powers:
                    powers[(j, a)] = images[j] ** a
                term = term * powers[(j, a)]
        out = out + term.times(v)
    return out


def divide_exact(f: Polynomial, alpha: LinearForm) -> Polynomial:
    """g with alpha*g = f; raises NotDivisibleError carrying the remainder.

    Division is with respect to the leading variable x_l of alpha: writing
    f = sum_k x_l^k f_k and alpha = a x_l + beta, the quotient pieces satisfy
    g_{k-1} = (f_k - beta g_k) / a from the top down, and the leftover
    f_0 - beta g_0 is the remainder.
    """
    if alpha.is_zero():
        raise ZeroDivisionError("division by the zero linear form")
    R = f.ring
    F = alpha.field
    n = f.nvars
    l = alpha.leading_index()
    inv_a = F.inv(alpha.coeffs[l])
    beta = [(k, c) for k, c in enumerate(alpha.coeffs) if c and k != l]
    slices: dict[int, dict[Exponent, object]] = {}
    for e, v in f.terms.items():
        slices.setdefault(e[l], {})[e[:l] + (0,) + e[l + 1 :]] = v
    top = max(slices, default=0)
    quotient: dict[Exponent, object] = {}
    g_k: dict[Exponent, object] = {}
    for k in range(top, 0, -1):
        cur = dict(slices.get(k, {}))
        for e, v in g_k.items():
            for idx, c in beta:
                t = e[:idx] + (e[idx] + 1,) + e[idx + 1 :]
                sub = R.scale(v, c)
                cur[t] = R.sub(cur[t], sub) if t in cur else R.neg(sub)
        g_next = {e: R.scale(v, inv_a) for e, v in cur.items() if not R.is_zero(v)}
        for e, v in g_next.items():
            quotient[e[:l] + (k - 1,) + e[l + 1 :]] = v
        g_k = g_next
    rem = dict(slices.get(0, {}))
    for e, v in g_k.items():
        for idx, c in beta:
            t = e[:idx] + (e[idx] + 1,) + e[idx + 1 :]
            sub = R.scale(v, c)
            rem[t] = R.sub(rem[t], sub) if t in rem else R.neg(sub)
    remainder = Polynomial(R, n, rem)
    if not remainder.is_zero():
        raise NotDivisibleError(f"not divisible; remainder {remainder}", remainder)
    return Polynomial(R, n, quotient)


def divide_exact_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact lex division of f by g over a field."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    R = f.ring
    lead_e = max(g.terms)
    inv_lead = R.inv(g.terms[lead_e])
    rem = dict(f.terms)
    quot = {}
    while rem:
        e = max(rem)
        shift = tuple(a - b for a, b in zip(e, lead_e))
        if min(shift) < 0:
            raise NotDivisibleError("polynomial not divisible", Polynomial(R, f.nvars, rem))
        coef = R.mul(rem[e], inv_lead)
        quot[shift] = coef
        for e2, v2 in g.terms.items():
            t = _add_exp(shift, e2)
            nv = R.sub(rem.get(t, 0), R.mul(coef, v2))
            if nv:
                rem[t] = nv
            else:
                rem.pop(t, None)
    return Polynomial(R, f.nvars, quot)


def param_evaluate(P: ParamScalar, assignment: Sequence[FieldElement]) -> FieldElement:
    if len(assignment) != P.nvars:
        raise ValueError(f"assignment has length {len(assignment)}, expected {P.nvars}")
    F = assignment[0].field if assignment else P.field
    if any(x.field != F for x in assignment):
        raise ValueError("assignment mixes fields")
    return F.element(P.evaluate([x.value for x in assignment], F))


def proportionality_test(entries: Sequence[ParamScalar]) -> bool:
    """True iff all entries are constant multiples of one polynomial.

    Checked by cross-multiplying leading coefficients: lc(b)*a == lc(a)*b.
    """
    if not entries:
        raise ValueError("empty list")
    nonzero = [e for e in entries if not e.is_zero()]
    for a, b in itertools.combinations(nonzero, 2):
        if a.scale(b.leading()[1]) != b.scale(a.leading()[1]):
            return False
    return True


def divisibility_test(ell: ParamScalar, P: ParamScalar) -> bool:
    """True iff the degree-one form ell divides P (substitute the solved variable)."""
    if ell.degree() != 1:
        raise ValueError("divisor must have total degree 1")
    F = ell.field
    m = ell.nvars
    k = next(j for j in range(m) if ell.terms.get(_unit(m, j), 0))
    a = ell.terms[_unit(m, k)]
    # c_k = -(ell - a c_k) / a
    rest = ell - ParamScalar(F, m, {_unit(m, k): a})
    solved = (-rest).scale(F.inv(a))
    images = [solved if j == k else ParamScalar.variable(F, m, j) for j in range(m)]
    return P.substitute(images).is_zero()


def multiplicity(ell: ParamScalar, P: ParamScalar) -> int:
    """Largest k with ell^k | P (P nonzero)."""
    if P.is_zero():
        raise ValueError("zero has unbounded multiplicity")
    k = 0
    while divisibility_test(ell, P):
        P = P.divide_exact(ell)
        k += 1
    return k
