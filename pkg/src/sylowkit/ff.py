"""Exact arithmetic in small finite fields F_{p^r}.

Fields are table-driven: elements are integer codes 0..q-1 (the base-p
digits of the coefficient vector of the residue polynomial), and all
arithmetic goes through precomputed (q, q) operation tables.  That keeps
the matrix kernels in :mod:`sylowkit.backends` pure integer gathers.

Also home to the elementary number-theoretic helpers (v_l, the order
parameters d, s, n0) that parameterize the cross-characteristic models.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import Inapplicable, SylowkitError

FIELD_MAX = 4096  # largest q for which the (q, q) tables are built


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def v_l(l: int, n: int) -> int:
    """Largest i with l^i dividing n."""
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    i = 0
    while n % l == 0:
        n //= l
        i += 1
    return i


@dataclass(frozen=True)
class ArithParams:
    """Order parameters of q modulo l: the multiplicative order d, the
    valuation s = v_l(q^d - 1), and n0 = floor(n / d)."""

    l: int
    q: int
    d: int
    s: int
    n0: int


def arith_params(l: int, q: int, n: int) -> ArithParams:
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    if q % l == 0:
        raise Inapplicable(f"l = {l} divides q = {q}: no d with l | q^d - 1")
    d = None
    acc = 1
    for cand in range(1, l):  # d <= l - 1 by Fermat
        acc = (acc * q) % l
        if acc == 1:
            d = cand
            break
    if d is None:
        raise SylowkitError(f"no multiplicative order of {q} mod {l} found below {l}")
    return ArithParams(l=l, q=q, d=d, s=v_l(l, q**d - 1), n0=n // d)


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient tuples, lowest degree first)


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i, c in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    while len(a) < dm:
        a.append(0)
    return a


def _poly_mul_mod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _poly_mod(out, m, p)


def _divides(div: tuple[int, ...], poly: tuple[int, ...], p: int) -> bool:
    rem = _poly_mod(list(poly), div, p)
    return not any(rem)


def _irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Exhaustive trial division by all monic polynomials of degree <= r/2."""
    r = len(poly) - 1
    for deg in range(1, r // 2 + 1):
        for k in range(p**deg):
            div = _digits(k, p, deg) + [1]
            if _divides(tuple(div), poly, p):
                return False
    return True


def _digits(k: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(k % base)
        k //= base
    return out


class FiniteField:
    """F_{p^r} with a fixed irreducible modulus and full operation tables.

    Immutable after construction; instances are shared via :func:`ff_make`.
    Element codes are integers 0..q-1 (base-p digits = coefficients).
    """

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if r < 1:
            raise ValueError(f"r = {r} must be >= 1")
        q = p**r
        if q > FIELD_MAX:
            raise SylowkitError(f"field size {q} exceeds the table budget {FIELD_MAX}")
        self.p = p
        self.r = r
        self.q = q
        self.modulus = self._smallest_irreducible(p, r)
        self._build_tables()
        self.primitive = self._find_generator()

    @staticmethod
    def _smallest_irreducible(p: int, r: int) -> tuple[int, ...]:
        # smallest monic modulus in code order; for r = 1 this is just x
        for k in range(p**r):
            cand = tuple(_digits(k, p, r) + [1])
            if r == 1 or _irreducible(cand, p):
                return cand
        raise SylowkitError(f"no irreducible polynomial of degree {r} over F_{p}")

    def _build_tables(self):
        p, r, q, m = self.p, self.r, self.q, self.modulus
        polys = [_digits(k, p, r) for k in range(q)]

        def code(poly):
            return sum(c * p**i for i, c in enumerate(poly))

        dt = np.int8 if q <= 127 else np.int16
        add = np.empty((q, q), dtype=dt)
        mul = np.empty((q, q), dtype=dt)
        for a in range(q):
            for b in range(q):
                add[a, b] = code([(x + y) % p for x, y in zip(polys[a], polys[b])])
                mul[a, b] = code(_poly_mul_mod(polys[a], polys[b], m, p))
        self.add_t = add
        self.mul_t = mul
        self.neg_t = np.array(
            [code([(-c) % p for c in polys[a]]) for a in range(q)], dtype=dt
        )
        inv = np.zeros(q, dtype=dt)
        for a in range(1, q):
            row = np.nonzero(mul[a] == 1)[0]
            if row.size != 1:
                raise SylowkitError("modulus is not irreducible: zero divisors found")
            inv[a] = row[0]
        self.inv_t = inv
        if r % 2 == 0:
            e = p ** (r // 2)
            self.conj_t = np.array([self.pow_code(a, e) for a in range(q)], dtype=dt)
        else:
            self.conj_t = None

    def _find_generator(self) -> int:
        """Smallest code generating the (cyclic) multiplicative group."""
        target = self.q - 1
        for a in range(1, self.q):
            if self.code_order(a) == target:
                return a
        raise SylowkitError("multiplicative group has no generator (broken field)")

    # -- code-level arithmetic -------------------------------------------

    def pow_code(self, a: int, e: int) -> int:
        out, base = 1, a
        e = int(e)
        while e:
            if e & 1:
                out = int(self.mul_t[out, base])
            base = int(self.mul_t[base, base])
            e >>= 1
        return out

    def code_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = int(self.mul_t[x, a])
            k += 1
        return k

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(_digits(a, self.p, self.r))

    def code_str(self, a: int) -> str:
        if self.r == 1:
            return str(a)
        terms = []
        for i, c in enumerate(self.coeffs(a)):
            if not c:
                continue
            unit = "1" if i == 0 else ("w" if i == 1 else f"w^{i}")
            terms.append(unit if (c == 1 and i > 0) else (str(c) if i == 0 else f"{c}{unit}"))
        return "+".join(reversed(terms)) if terms else "0"

    # -- element interface -----------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            v = int(value)
            if self.r == 1:
                v %= self.p
            if not 0 <= v < self.q:
                raise ValueError(f"code {v} out of range for {self}")
            return FieldElement(self, v)
        # coefficient vector
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.r:
            raise ValueError("too many coefficients")
        coeffs += [0] * (self.r - len(coeffs))
        return FieldElement(self, sum(c * self.p**i for i, c in enumerate(coeffs)))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def minus_one(self):
        return FieldElement(self, int(self.neg_t[1]))

    def __iter__(self):
        return (FieldElement(self, a) for a in range(self.q))

    def __len__(self):
        return self.q

    def __repr__(self):
        return f"F_{self.q}"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self):
        return hash((self.p, self.r))


class FieldElement:
    """A field element: an owning field plus a code (reduced coefficients)."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = int(code)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other
        return self.field.element(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, int(self.field.add_t[self.code, o.code]))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_t[self.code]))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, int(self.field.mul_t[self.code, o.code]))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.code == 0:
            raise ZeroDivisionError
        return FieldElement(self.field, int(self.field.mul_t[self.code, self.field.inv_t[o.code]]))

    def __pow__(self, e: int):
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError
            return FieldElement(self.field, 0 if e else 1)
        if e < 0:
            inv = int(self.field.inv_t[self.code])
            return FieldElement(self.field, self.field.pow_code(inv, -e))
        return FieldElement(self.field, self.field.pow_code(self.code, e))

    def conj(self) -> "FieldElement":
        return FieldElement(self.field, conj_code(self.field, self.code))

    @property
    def coeffs(self):
        return self.field.coeffs(self.code)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.code))

    def __repr__(self):
        return f"{self.field.code_str(self.code)} in {self.field}"

    def __str__(self):
        return self.field.code_str(self.code)


def conj_code(field: FiniteField, code: int) -> int:
    if field.conj_t is None:
        raise Inapplicable(
            f"{field} has odd extension degree {field.r}: conjugation undefined"
        )
    return int(field.conj_t[code])


def conj(x: FieldElement) -> FieldElement:
    """The order-2 automorphism x -> x^(p^(r/2)) of a field of even degree."""
    return x.conj()


@lru_cache(maxsize=None)
def ff_make(p: int, r: int) -> FiniteField:
    """Construct (and cache) F_{p^r} with the canonical smallest modulus."""
    return FiniteField(p, r)


@lru_cache(maxsize=None)
def ff_from_size(q: int) -> FiniteField:
    """F_q from the prime power q (factored deterministically)."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if not is_prime(p):
            continue
        if q % p == 0:
            r = 0
            m = q
            while m % p == 0:
                m //= p
                r += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return ff_make(p, r)
    raise ValueError(f"{q} is not a prime power")
