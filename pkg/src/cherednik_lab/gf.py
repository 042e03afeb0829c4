"""Finite fields F_p and F_{p^r}.

Elements are encoded as integers 0..q-1: the base-p digits of the code are
the coefficients (low to high) of the element written in the power basis of
the modulus root.  Multiplication goes through log/exp tables, addition in
extension fields through Zech logarithms.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

import numpy as np


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over F_p; coefficient lists low to high."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - db
            for k, bk in enumerate(b):
                a[shift + k] = (a[shift + k] - lead * bk) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    r = len(poly) - 1
    for d in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(list(poly), list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r (low-to-high coefficients)."""
    if r == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=r):
        cand = tuple(low) + (1,)
        if low[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {r} over F_{p}")


class Field:
    """The field F_q, q = p^r, with integer-encoded elements."""

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = tuple(modulus)
        self.id = f"GF({p}^{r})" if r > 1 else f"GF({p})"
        self._build_tables()

    # construction ---------------------------------------------------------
    def _mul_slow(self, a: int, b: int) -> int:
        p, r = self.p, self.r
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_rem(prod, list(self.modulus), p)
        return self.from_digits(rem + [0] * (r - len(rem)))

    def _mul_matrix(self, y: int) -> np.ndarray:
        """F_p-matrix of x -> y * x on digit vectors."""
        cols = [self.digits(self._mul_slow(y, self.p**j)) for j in range(self.r)]
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self) -> None:
        q, p, r = self.q, self.p, self.r
        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        gen = None
        for g in range(1, q):
            if all(self._pow_slow(g, order // f) != 1 for f in factors):
                gen = g
                break
        assert gen is not None
        self.primitive = gen
        weights = p ** np.arange(r, dtype=np.int64)
        # exp table by doubling: block [k, 2k) is block [0, k) times gen^k
        digits = np.zeros((1, r), dtype=np.int64)
        digits[0, 0] = 1
        step = gen
        while digits.shape[0] < order:
            M = self._mul_matrix(step)
            digits = np.vstack([digits, (digits @ M.T) % p])
            step = self._mul_slow(step, step)
        digits = digits[: max(order, 1)]
        exp_np = digits @ weights
        log_np = np.zeros(q, dtype=np.int64)
        log_np[exp_np] = np.arange(exp_np.size)
        plus_one = digits.copy()
        plus_one[:, 0] = (plus_one[:, 0] + 1) % p
        s = plus_one @ weights
        zech_np = np.where(s == 0, -1, log_np[s])
        all_digits = (np.arange(q, dtype=np.int64)[:, None] // weights) % p
        neg_np = ((-all_digits) % p) @ weights
        self._exp_np, self._log_np, self._zech_np, self._neg_np = exp_np, log_np, zech_np, neg_np
        self._exp = exp_np.tolist()
        self._log = log_np.tolist()
        self._zech = zech_np.tolist()
        self._neg = neg_np.tolist()
        self._all_digits = all_digits

    def _pow_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return result

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.r):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _neg_digits(self, a: int) -> int:
        p = self.p
        out, mult = 0, 1
        for _ in range(self.r):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    # identity -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus))

    def __repr__(self) -> str:
        return f"Field({self.id}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (field_create, (self.p, self.r))

    def descriptor(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    # encoding -------------------------------------------------------------
    def digits(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.r):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_digits(self, ds) -> int:
        out, mult = 0, 1
        for d in ds:
            out += (int(d) % self.p) * mult
            mult *= self.p
        return out

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def in_prime_subfield(self, a: int) -> bool:
        return a < self.p

    # scalar arithmetic ------------------------------------------------------
    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        return 0 if z < 0 else self._exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def is_zero(self, a: int) -> bool:
        return a == 0

    def scale(self, a: int, b: int) -> int:
        return self.mul(a, b)

    def from_base(self, a: int) -> int:
        return a

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.p == 2 or self._log[a] % 2 == 0

    # vectorized arithmetic on numpy arrays of codes -------------------------
    def vadd(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (A + B) % self.p
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        A, B = np.broadcast_arrays(A, B)
        out = np.where(A == 0, B, A).copy()
        both = (A != 0) & (B != 0)
        if both.any():
            la = self._log_np[A[both]]
            d = (self._log_np[B[both]] - la) % (self.q - 1)
            z = self._zech_np[d]
            val = self._exp_np[(la + z) % (self.q - 1)]
            out[both] = np.where(z < 0, 0, val)
        return out

    def vneg(self, A: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (-A) % self.p
        return self._neg_np[A]

    def vmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.r == 1:
            return (A * B) % self.p
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        A, B = np.broadcast_arrays(A, B)
        idx = (self._log_np[A] + self._log_np[B]) % (self.q - 1)
        return np.where((A == 0) | (B == 0), 0, self._exp_np[idx])

    # linear structure over F_p ------------------------------------------------
    @functools.cached_property
    def regular_rep(self) -> np.ndarray:
        """Array (q, r, r): column k of entry a holds the digits of a * omega^k."""
        table = np.zeros((self.q, self.r, self.r), dtype=np.int64)
        for k in range(self.r):
            M = self._mul_matrix(self.p**k)
            table[:, :, k] = (self._all_digits @ M.T) % self.p
        return table

    @functools.cached_property
    def digit_table(self) -> np.ndarray:
        return self._all_digits

    @functools.cached_property
    def digit_weights(self) -> np.ndarray:
        return np.array([self.p**k for k in range(self.r)], dtype=np.int64)

    # elements -------------------------------------------------------------
    def element(self, a: int) -> "FieldElement":
        if not 0 <= a < self.q:
            raise FieldError(f"code {a} outside {self.id}")
        return FieldElement(self, a)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, a) for a in range(self.q)]

    def format(self, a: int) -> str:
        """Canonical string: an integer for prime fields, a polynomial in `a` otherwise."""
        if self.r == 1 or a < self.p:
            return str(a)
        parts = []
        for k, d in reversed(list(enumerate(self.digits(a)))):
            if d == 0:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if not mono:
                parts.append(str(d))
            elif d == 1:
                parts.append(mono)
            else:
                parts.append(f"{d}*{mono}")
        return "+".join(parts)

    def parse(self, text: str) -> int:
        """Inverse of `format`; also accepts plain integers (reduced mod p)."""
        text = text.strip().replace(" ", "")
        if text.lstrip("-").isdigit():
            return self.from_int(int(text))
        ds = [0] * self.r
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("-")
            coef, _, mono = term.rpartition("*") if "*" in term else ("", "", term)
            if "a" not in mono:
                coef, mono = mono, ""
            k = 0 if not mono else (int(mono.split("^")[1]) if "^" in mono else 1)
            if k >= self.r:
                raise FieldError(f"cannot parse {text!r} in {self.id}")
            ds[k] = (ds[k] + sign * (int(coef) if coef else 1)) % self.p
        return self.from_digits(ds)

    # embeddings -------------------------------------------------------------
    def embedding_into(self, big: "Field") -> np.ndarray:
        return _embedding(self, big)


@functools.lru_cache(maxsize=None)
def _embedding(small: Field, big: Field) -> np.ndarray:
    if small.p != big.p or big.r % small.r:
        raise FieldError(f"{small.id} does not embed into {big.id}")
    if small == big:
        return np.arange(small.q, dtype=np.int64)
    # smallest root of the small modulus inside the big field
    root = None
    for x in range(big.q):
        acc = 0
        for coef in reversed(small.modulus):
            acc = big.add(big.mul(acc, x), big.from_int(coef))
        if acc == 0:
            root = x
            break
    assert root is not None
    powers = [big.pow(root, k) for k in range(small.r)]
    table = np.zeros(small.q, dtype=np.int64)
    for a in range(small.q):
        acc = 0
        for d, w in zip(small.digits(a), powers):
            if d:
                acc = big.add(acc, big.mul(big.from_int(d), w))
        table[a] = acc
    return table


@functools.lru_cache(maxsize=None)
def field_create(p: int, r: int = 1) -> Field:
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(r, int) or r < 1:
        raise FieldError(f"extension degree must be >= 1, got {r}")
    return Field(p, r, smallest_irreducible(p, r))


def field_of_order(q: int) -> Field:
    """F_q for a prime power q."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    else:
        raise FieldError(f"{q} is not a prime power")
    r, m = 0, q
    while m % p == 0:
        m //= p
        r += 1
    if m != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return field_create(p, r)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("arithmetic across different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.value, other.value))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.div(self.value, other.value))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return FieldElement(self.field, self.field.pow(self.field.inv(self.value), -e))
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def multiplicative_order(self) -> int:
        if self.value == 0:
            raise FieldError("zero has no multiplicative order")
        k, x = 1, self.value
        while x != 1:
            x = self.field.mul(x, self.value)
            k += 1
        return k

    def __str__(self) -> str:
        return self.field.format(self.value)

    def __repr__(self) -> str:
        return f"{self.field.id}:{self}"


@dataclass(frozen=True)
class ResiduePartition:
    Q: frozenset[int]
    R: frozenset[int]


def squares_partition(F: Field) -> ResiduePartition:
    squares = frozenset(F.mul(a, a) for a in range(1, F.q))
    rest = frozenset(range(1, F.q)) - squares
    return ResiduePartition(squares, rest)


class PowerSumDomain(enum.Enum):
    ALL = "ALL"
    Q = "Q"
    R = "R"


def power_sum(F: Field, d: int, domain: PowerSumDomain | str) -> FieldElement:
    """Sum of i^d over the domain (0^0 = 1), from the closed forms."""
    domain = PowerSumDomain(domain)
    if d < 0:
        raise FieldError("exponent must be nonnegative")
    q = F.q
    if domain is PowerSumDomain.ALL:
        value = F.neg(1) if d > 0 and d % (q - 1) == 0 else 0
        return F.element(value)
    if F.p == 2:
        raise FieldError("Q/R power sums need odd q")
    half = F.from_int((q - 1) // 2)
    if d % (q - 1) == 0:
        return F.element(half)
    if d % (q - 1) == (q - 1) // 2:
        return F.element(half if domain is PowerSumDomain.Q else F.neg(half))
    return F.element(0)


def power_sum_bruteforce(F: Field, d: int, domain: PowerSumDomain | str) -> FieldElement:
    domain = PowerSumDomain(domain)
    part = squares_partition(F)
    members = {PowerSumDomain.ALL: range(F.q), PowerSumDomain.Q: sorted(part.Q), PowerSumDomain.R: sorted(part.R)}[domain]
    acc = 0
    for i in members:
        acc = F.add(acc, 1 if d == 0 else F.pow(i, d))
    return F.element(acc)
