"""Exact arithmetic in Z[zeta_m] and error-tracked complex arithmetic.

CyclotomicInteger holds exact coordinates over the power basis of Z[zeta_m]
(reduced by the m-th cyclotomic polynomial).  ComplexValue carries a pair of
high-precision reals together with an upper bound on the absolute error
accumulated so far; the bound is coarse by design, a valid certificate
matters more than tightness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpf

from .errors import ConductorMismatch, RoundingUncertain

_GUARD_BITS = 12


def _inflate(x: float) -> float:
    """Round a float error bound upward a hair."""
    return math.nextafter(x * (1.0 + 1e-12), math.inf)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, constant term first."""
    if m == 1:
        return (-1, 1)
    # (x^m - 1) / prod_{d | m, d < m} Phi_d, by exact long division
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            den = list(cyclotomic_polynomial(d))
            num = _polydiv_exact(num, den)
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c % den[dn] != 0:
            raise ArithmeticError("non-exact polynomial division")
        f = c // den[dn]
        out[i - dn] = f
        for j, dj in enumerate(den):
            num[i - dn + j] -= f * dj
    if any(num):
        raise ArithmeticError("non-exact polynomial division (remainder)")
    return out


def _phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce_mod_phi(coeffs: list[int], m: int) -> tuple[int, ...]:
    """Reduce an exponent-coefficient list of any length to the power basis."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    work = list(coeffs) + [0] * max(0, deg - len(coeffs))
    for i in range(len(work) - 1, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = 0
            for j in range(deg):
                work[i - deg + j] -= c * phi[j]
    return tuple(work[:deg])


@dataclass(frozen=True)
class CyclotomicInteger:
    """Exact element of Z[zeta_m] on the power basis 1, zeta, ..., zeta^{phi(m)-1}."""

    m: int
    coords: tuple[int, ...]

    @staticmethod
    def from_int(n: int, m: int = 1) -> "CyclotomicInteger":
        return CyclotomicInteger(m, _reduce_mod_phi([n], m))

    @staticmethod
    def root_power(m: int, j: int) -> "CyclotomicInteger":
        """zeta_m^j as an exact element."""
        j %= m
        return CyclotomicInteger(m, _reduce_mod_phi([0] * j + [1], m))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational_integer(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __add__(self, other):
        a, b = _common(self, other)
        return CyclotomicInteger(a.m, tuple(x + y for x, y in zip(a.coords, b.coords)))

    def __sub__(self, other):
        a, b = _common(self, other)
        return CyclotomicInteger(a.m, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __neg__(self):
        return CyclotomicInteger(self.m, tuple(-c for c in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m, tuple(c * other for c in self.coords))
        a, b = _common(self, other)
        conv = [0] * (2 * len(a.coords) - 1)
        for i, ai in enumerate(a.coords):
            if ai:
                for j, bj in enumerate(b.coords):
                    conv[i + j] += ai * bj
        return CyclotomicInteger(a.m, _reduce_mod_phi(conv, a.m))

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicInteger":
        """Complex conjugate (zeta -> zeta^{-1})."""
        out = [0] * self.m
        for j, c in enumerate(self.coords):
            out[(-j) % self.m] += c
        return CyclotomicInteger(self.m, _reduce_mod_phi(out, self.m))

    def lift(self, big_m: int) -> "CyclotomicInteger":
        """Re-express in Z[zeta_M] for m | M."""
        if big_m % self.m != 0:
            raise ConductorMismatch(f"cannot lift conductor {self.m} into {big_m}")
        k = big_m // self.m
        out = [0] * (big_m * 1)
        for j, c in enumerate(self.coords):
            out[(j * k) % big_m] += c
        return CyclotomicInteger(big_m, _reduce_mod_phi(out, big_m))


def _common(a: CyclotomicInteger, b: CyclotomicInteger):
    if a.m == b.m:
        return a, b
    raise ConductorMismatch(f"conductor mismatch: {a.m} vs {b.m} (lift first)")


def cyc_mul(a: CyclotomicInteger, b: CyclotomicInteger) -> CyclotomicInteger:
    return a * b


def cyc_lift_pair(a: CyclotomicInteger, b: CyclotomicInteger):
    m = math.lcm(a.m, b.m)
    return a.lift(m), b.lift(m)


# ---------------------------------------------------------------------------
# error-tracked complex values
# ---------------------------------------------------------------------------


class ComplexValue:
    """A complex number known to absolute accuracy `err`.

    re and im are mpmath reals at the precision active when the value was
    produced.  Error propagation is interval-coarse: sums add errors, products
    use |a| err_b + |b| err_a + err_a err_b, and every operation charges a
    small multiple of the result magnitude for rounding.
    """

    __slots__ = ("re", "im", "err", "prec")

    def __init__(self, re, im, err: float, prec: int):
        self.re = re
        self.im = im
        self.err = err
        self.prec = prec

    # magnitude helpers (float upper bounds)
    def abs_upper(self) -> float:
        a = abs(float(self.re)) + abs(float(self.im))
        return _inflate(a * 1.0000000001 + self.err)

    def abs_approx(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def _eps(self) -> float:
        return 2.0 ** (2 - self.prec)

    @staticmethod
    def exact(value, prec: int) -> "ComplexValue":
        """From an int or Fraction, with only representation rounding."""
        with mp.workprec(prec + _GUARD_BITS):
            if isinstance(value, Fraction):
                re = mpf(value.numerator) / value.denominator
                err = abs(float(re)) * 2.0 ** (2 - prec)
            else:
                re = mpf(value)
                err = 0.0
            return ComplexValue(re, mpf(0), err, prec)

    def __add__(self, other: "ComplexValue") -> "ComplexValue":
        with mp.workprec(self.prec + _GUARD_BITS):
            re = self.re + other.re
            im = self.im + other.im
            rnd = (abs(float(re)) + abs(float(im)) + 1e-300) * self._eps()
            return ComplexValue(re, im, _inflate(self.err + other.err + rnd), self.prec)

    def __sub__(self, other: "ComplexValue") -> "ComplexValue":
        return self + (-other)

    def __neg__(self) -> "ComplexValue":
        return ComplexValue(-self.re, -self.im, self.err, self.prec)

    def conj(self) -> "ComplexValue":
        return ComplexValue(self.re, -self.im, self.err, self.prec)

    def __mul__(self, other) -> "ComplexValue":
        if isinstance(other, int):
            return ComplexValue(
                self.re * other, self.im * other, _inflate(self.err * abs(other)), self.prec
            )
        with mp.workprec(self.prec + _GUARD_BITS):
            re = self.re * other.re - self.im * other.im
            im = self.re * other.im + self.im * other.re
            a, b = self.abs_upper(), other.abs_upper()
            err = a * other.err + b * self.err + self.err * other.err
            err += 8.0 * (a * b + 1e-300) * self._eps()
            return ComplexValue(re, im, _inflate(err), self.prec)

    __rmul__ = __mul__

    def recip(self) -> "ComplexValue":
        mag2_low = self.abs_approx() ** 2 * 0.999999999
        if self.err >= math.sqrt(mag2_low):
            raise RoundingUncertain("reciprocal of a value indistinguishable from zero")
        with mp.workprec(self.prec + _GUARD_BITS):
            d = self.re * self.re + self.im * self.im
            re = self.re / d
            im = -self.im / d
            mag = math.sqrt(mag2_low)
            err = self.err / (mag * (mag - self.err))
            err += 8.0 * (1.0 / mag + 1e-300) * self._eps()
            return ComplexValue(re, im, _inflate(err), self.prec)

    def __truediv__(self, other: "ComplexValue") -> "ComplexValue":
        return self * other.recip()

    def __repr__(self):
        return f"ComplexValue({float(self.re):.6g}{float(self.im):+.6g}i, err<{self.err:.2g})"


def complex_zero(prec: int) -> ComplexValue:
    return ComplexValue(mpf(0), mpf(0), 0.0, prec)


def root_of_unity(k: int, n: int, prec: int) -> ComplexValue:
    """e^{2 pi i k / n} with a generous rounding certificate."""
    k %= n
    with mp.workprec(prec + _GUARD_BITS):
        t = mpf(2 * k) / n
        return ComplexValue(mp.cospi(t), mp.sinpi(t), 2.0 ** (4 - prec), prec)


def embed_complex(a: CyclotomicInteger, precision: int = 128) -> ComplexValue:
    """Numerical embedding zeta_m -> e^{2 pi i / m}."""
    out = complex_zero(precision)
    for j, c in enumerate(a.coords):
        if c:
            out = out + root_of_unity(j, a.m, precision) * c
    # the stated contract: err bounded by (sum |coords|) * 2^{1-precision};
    # the op-level bound above is tighter than needed, keep the larger of both
    cert = sum(abs(c) for c in a.coords) * 2.0 ** (1 - precision)
    out.err = _inflate(max(out.err, cert))
    return out


def round_to_integer(z: ComplexValue) -> int:
    """Certified nearest integer; raises RoundingUncertain outside the 1/4 box."""
    with mp.workprec(z.prec + _GUARD_BITS):
        nearest = int(mp.nint(z.re))
        off = abs(float(z.re - nearest))
        imag = abs(float(z.im))
    if imag + z.err >= 0.25 or off + z.err >= 0.25:
        raise RoundingUncertain(
            f"value {float(z.re):.6g}{float(z.im):+.6g}i (err {z.err:.2g}) is not certifiably integral"
        )
    return nearest
