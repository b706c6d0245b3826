"""Finite fields F_q for q = p^n (n <= 3) with discrete logs and characters.

Elements are coefficient vectors in the polynomial basis 1, x, ..., x^{n-1}
modulo a deterministic irreducible polynomial.  The field fixes a generator
of F_q* and a full discrete-log table, so multiplicative characters evaluate
in O(1) as exponents of zeta_{q-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InternalError, InvalidPrime, OrderUnavailable


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond desk scale."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs here stay below ~10^7."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class FieldElement:
    """Element of F_q as a reduced coefficient tuple over Z/pZ."""

    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


class Field:
    """A concrete model of F_q with generator and discrete-log table.

    The modulus is the lexicographically least monic irreducible polynomial
    of degree n over F_p (coefficients compared constant term first); the
    generator is the least primitive root in coordinate-lex order.  Both
    choices are deterministic so reports are reproducible across runs.
    Instances are immutable after construction.
    """

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise InvalidPrime(f"{p} is not prime")
        if n not in (1, 2, 3):
            raise InvalidPrime(f"extension degree {n} unsupported (need 1..3)")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = self._find_modulus()
        # reduction rule: x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1})
        self._red = tuple((-c) % p for c in self.modulus[:n])
        self.zero = FieldElement((0,) * n)
        self.one = self.element_from_int(1)
        self._qm1_factors = factorize(self.q - 1)
        self.generator = self._find_generator()
        self._build_dlog()
        self._trace_basis = tuple(
            self._trace_direct(self.element_from_code(self.p**i)) for i in range(n)
        )

    # -- construction helpers -------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        p, n = self.p, self.n
        if n == 1:
            return (0, 1)
        # degree 2 or 3: irreducible iff no roots in F_p
        for code in range(p**n):
            coeffs = [(code // p**i) % p for i in range(n)]
            if not any(
                (sum(c * pow(r, i, p) for i, c in enumerate(coeffs)) + pow(r, n, p)) % p == 0
                for r in range(p)
            ):
                return tuple(coeffs) + (1,)
        raise InternalError(f"no irreducible modulus of degree {n} over F_{p}")

    def _find_generator(self) -> FieldElement:
        cofactors = [(self.q - 1) // ell for ell in self._qm1_factors]
        for code in self._codes_coordinate_lex():
            g = self.element_from_code(code)
            if g.is_zero():
                continue
            if all(not self.pow(g, c) == self.one for c in cofactors):
                return g
        raise InternalError("no primitive root found")

    def _codes_coordinate_lex(self):
        # iterate elements ordered lexicographically on (c_0, ..., c_{n-1})
        p, n = self.p, self.n

        def rec(prefix):
            if len(prefix) == n:
                yield sum(c * p**i for i, c in enumerate(prefix))
                return
            for c in range(p):
                yield from rec(prefix + (c,))

        yield from rec(())

    def _build_dlog(self):
        q = self.q
        self.dlog: list[int | None] = [None] * q
        self.pow_g: list[FieldElement] = [self.one] * (q - 1)
        acc = self.one
        for s in range(q - 1):
            code = self.encode(acc)
            if self.dlog[code] is not None:
                raise InternalError("generator is not primitive")
            self.dlog[code] = s
            self.pow_g[s] = acc
            acc = self.mul(acc, self.generator)
        if acc != self.one:
            raise InternalError("generator order mismatch")

    # -- encoding -------------------------------------------------------------

    def encode(self, x: FieldElement) -> int:
        code = 0
        for i in reversed(range(self.n)):
            code = code * self.p + x.coords[i]
        return code

    def element_from_code(self, code: int) -> FieldElement:
        coords = []
        for _ in range(self.n):
            coords.append(code % self.p)
            code //= self.p
        return FieldElement(tuple(coords))

    def element_from_int(self, a: int) -> FieldElement:
        """Embed an integer via the prime subfield."""
        return FieldElement((a % self.p,) + (0,) * (self.n - 1))

    def element_from_rational(self, num: int, den: int = 1) -> FieldElement:
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} not invertible mod {self.p}")
        return self.element_from_int(num * pow(den, -1, self.p))

    def elements(self):
        for code in range(self.q):
            yield self.element_from_code(code)

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement(tuple((x + y) % p for x, y in zip(a.coords, b.coords)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement(tuple((x - y) % p for x, y in zip(a.coords, b.coords)))

    def neg(self, a: FieldElement) -> FieldElement:
        p = self.p
        return FieldElement(tuple((-x) % p for x in a.coords))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        p, n = self.p, self.n
        if n == 1:
            return FieldElement(((a.coords[0] * b.coords[0]) % p,))
        conv = [0] * (2 * n - 1)
        for i, ai in enumerate(a.coords):
            if ai:
                for j, bj in enumerate(b.coords):
                    conv[i + j] += ai * bj
        red = self._red
        for d in range(2 * n - 2, n - 1, -1):
            c = conv[d] % p
            if c:
                conv[d] = 0
                for i, r in enumerate(red):
                    conv[d - n + i] += c * r
        return FieldElement(tuple(c % p for c in conv[:n]))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: FieldElement) -> FieldElement:
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        s = self.dlog[self.encode(a)]
        return self.pow_g[(self.q - 1 - s) % (self.q - 1)]

    def dlog_of(self, x: FieldElement) -> int:
        s = self.dlog[self.encode(x)]
        if s is None:
            raise ZeroDivisionError("dlog of zero")
        return s

    # -- trace ----------------------------------------------------------------

    def _trace_direct(self, x: FieldElement) -> int:
        acc = x
        total = x
        for _ in range(self.n - 1):
            acc = self.pow(acc, self.p)
            total = self.add(total, acc)
        if any(total.coords[1:]):
            raise InternalError("trace left the prime field")
        return total.coords[0]

    def trace(self, x: FieldElement) -> int:
        """Absolute trace Tr(x) = x + x^p + ... + x^{p^{n-1}} in F_p."""
        return sum(c * t for c, t in zip(x.coords, self._trace_basis)) % self.p

    def __repr__(self):
        return f"Field(p={self.p}, n={self.n})"


@lru_cache(maxsize=None)
def make_field(p: int, n: int = 1) -> Field:
    """Construct (and cache) the deterministic model of F_{p^n}."""
    return Field(p, n)


def trace_to_prime(fld: Field, x: FieldElement) -> int:
    return fld.trace(x)


@dataclass(frozen=True)
class MultChar:
    """Multiplicative character chi(g^t) = zeta_{q-1}^{index * t}, chi(0) = 0.

    The zero convention applies to every character including the trivial one.
    """

    field: Field
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", self.index % (self.field.q - 1))

    @property
    def order(self) -> int:
        from math import gcd

        q1 = self.field.q - 1
        return q1 // gcd(self.index, q1)

    def is_trivial(self) -> bool:
        return self.index == 0

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.field is not self.field:
            raise ValueError("characters live on different fields")
        return MultChar(self.field, self.index + other.index)

    def __pow__(self, e: int) -> "MultChar":
        return MultChar(self.field, self.index * e)

    def conj(self) -> "MultChar":
        return MultChar(self.field, -self.index)


def trivial_char(fld: Field) -> MultChar:
    return MultChar(fld, 0)


def canonical_char(fld: Field, k: int) -> MultChar:
    """The canonical character chi_k of exact order k on the fixed generator."""
    if k <= 0 or (fld.q - 1) % k != 0:
        raise OrderUnavailable(f"no character of order {k} on F_{fld.q}*")
    return MultChar(fld, (fld.q - 1) // k)


def quadratic_char(fld: Field) -> MultChar:
    return canonical_char(fld, 2)


def char_eval(chi: MultChar, x: FieldElement) -> int | None:
    """Value of chi at x, as an exponent of zeta_{q-1}; None encodes zero.

    chi(0) = 0 for every character, including the trivial one.
    """
    fld = chi.field
    if x.is_zero():
        return None
    return (chi.index * fld.dlog_of(x)) % (fld.q - 1)
