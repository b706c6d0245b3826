"""Elliptic curve point counts over F_q and j-invariants.

The count uses the quadratic-character identity #E(F_q) = q + 1 + sum over x
of phi(f(x)) with phi(0) = 0, so a single O(q) pass with the discrete-log
table gives the trace of Frobenius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularReduction
from .fields import Field, FieldElement


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + a x + b over Q, or the Legendre model when lam is set."""

    a: int = 0
    b: int = 0
    lam: Fraction | None = None

    def describe(self) -> str:
        if self.lam is not None:
            return f"y^2 = x(x-1)(x-{self.lam})"
        return f"y^2 = x^3 + {self.a}x + {self.b}"


def _cubic(E: EllipticCurve, fld: Field):
    """Return f as a callable x -> f(x) in fld, plus a good-reduction flag."""
    if E.lam is not None:
        lam = fld.element_from_rational(E.lam.numerator, E.lam.denominator)
        one = fld.one
        if lam.is_zero() or lam == one:
            return None, False

        def f(x, lam=lam, one=one):
            return fld.mul(fld.mul(x, fld.sub(x, one)), fld.sub(x, lam))

        return f, True
    a = fld.element_from_int(E.a)
    b = fld.element_from_int(E.b)
    disc = (-16 * (4 * E.a**3 + 27 * E.b**2)) % fld.p
    if disc == 0:
        return None, False

    def f(x, a=a, b=b):
        return fld.add(fld.add(fld.mul(fld.mul(x, x), x), fld.mul(a, x)), b)

    return f, True


def ec_ap(E: EllipticCurve, fld: Field) -> int:
    """Trace of Frobenius a = q + 1 - #E(F_q); requires good reduction."""
    f, good = _cubic(E, fld)
    if not good:
        raise SingularReduction(f"{E.describe()} has bad reduction over F_{fld.q}")
    q1 = fld.q - 1
    total = 0
    for x in fld.elements():
        y = f(x)
        if y.is_zero():
            continue
        # phi(y) = +1 iff dlog(y) even
        total += 1 if fld.dlog_of(y) % 2 == 0 else -1
    return -total


def j_invariant(E: EllipticCurve, fld: Field) -> FieldElement:
    """j = 1728 * 4a^3 / (4a^3 + 27b^2) in fld."""
    if E.lam is not None:
        lam = fld.element_from_rational(E.lam.numerator, E.lam.denominator)
        one = fld.one
        if lam.is_zero() or lam == one:
            raise SingularReduction("Legendre parameter degenerates")
        # j = 256 (lam^2 - lam + 1)^3 / (lam^2 (lam - 1)^2)
        l2 = fld.mul(lam, lam)
        num = fld.sub(fld.add(l2, one), lam)
        num = fld.mul(fld.mul(num, num), num)
        num = fld.mul(num, fld.element_from_int(256))
        den = fld.mul(l2, fld.pow(fld.sub(lam, one), 2))
        return fld.mul(num, fld.inv(den))
    f, good = _cubic(E, fld)
    if not good:
        raise SingularReduction(f"{E.describe()} has bad reduction over F_{fld.q}")
    a3 = 4 * E.a**3
    num = fld.element_from_int(1728 * a3)
    den = fld.element_from_int(a3 + 27 * E.b**2)
    return fld.mul(num, fld.inv(den))
