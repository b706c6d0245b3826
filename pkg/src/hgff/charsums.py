"""Gauss sums (certified numerics) and Jacobi sums (exact cyclotomic).

The additive character is theta(x) = e^{2 pi i Tr(x) / p}.  Hypergeometric
values are independent of this choice because they only involve ratios
g(A chi)/g(A); fixing it makes the Gauss-sum regression values reproducible.
An optional scale c != 0 replaces theta by theta_c(x) = e^{2 pi i c Tr(x)/p},
which the property suite uses to confirm that independence numerically.

Gauss sums are kept numeric with a propagated error bound; Jacobi sums live
in small cyclotomic rings and are computed exactly.  Tables are cached per
(p, n, precision, scale) since every hypergeometric evaluation reuses all
q - 1 sums.
"""

from __future__ import annotations

import math
from functools import lru_cache

from mpmath import mp, mpf

from .cyclotomic import (
    ComplexValue,
    CyclotomicInteger,
    _inflate,
    _reduce_mod_phi,
    root_of_unity,
)
from .fields import Field, MultChar, make_field

_GUARD_BITS = 12


class GaussTable:
    """All Gauss sums of F_q at a fixed working precision.

    values[t] approximates g(chi_t) where chi_t(g^s) = zeta_{q-1}^{t s}.
    Every entry shares the same absolute error bound `err`.
    """

    def __init__(self, field: Field, precision: int, scale: int = 1):
        self.field = field
        self.precision = precision
        self.scale = scale % field.p
        if self.scale == 0:
            raise ValueError("additive character scale must be nonzero mod p")
        self._roots_re, self._roots_im, self._root_err = _unit_roots(field.q - 1, precision)
        self._build()

    def _build(self):
        fld = self.field
        q1 = fld.q - 1
        p = fld.p
        prec = self.precision
        with mp.workprec(prec + _GUARD_BITS):
            th = [root_of_unity(self.scale * c, p, prec) for c in range(p)]
            tr = [fld.trace(fld.pow_g[s]) for s in range(q1)]
            # pretabulate zeta_{q-1}^r * theta(c) so the O(q^2) pass is pure adds
            prod_re = [mpf(0)] * (q1 * p)
            prod_im = [mpf(0)] * (q1 * p)
            rr, ri = self._roots_re, self._roots_im
            for r in range(q1):
                a, b = rr[r], ri[r]
                base = r * p
                for c in range(p):
                    t = th[c]
                    prod_re[base + c] = a * t.re - b * t.im
                    prod_im[base + c] = a * t.im + b * t.re
            vals_re = [mpf(0)] * q1
            vals_im = [mpf(0)] * q1
            for t in range(q1):
                sr = mpf(0)
                si = mpf(0)
                r = 0
                for s in range(q1):
                    k = r * p + tr[s]
                    sr += prod_re[k]
                    si += prod_im[k]
                    r += t
                    if r >= q1:
                        r -= q1
                vals_re[t] = sr
                vals_im[t] = si
        eps = 2.0 ** (2 - prec)
        per_term = 2.0 * self._root_err + 2.0 * (2.0 ** (4 - prec)) + 16.0 * eps
        accum = 0.5 * (q1 + 1) * (q1 + 2) * eps
        self.err = _inflate(q1 * per_term + accum)
        self._vals_re = vals_re
        self._vals_im = vals_im

    def value(self, index: int) -> ComplexValue:
        t = index % (self.field.q - 1)
        return ComplexValue(self._vals_re[t], self._vals_im[t], self.err, self.precision)

    def gauss(self, chi: MultChar) -> ComplexValue:
        return self.value(chi.index)

    def unit_root(self, k: int) -> ComplexValue:
        """zeta_{q-1}^k as a table lookup."""
        r = k % (self.field.q - 1)
        return ComplexValue(self._roots_re[r], self._roots_im[r], self._root_err, self.precision)


def _unit_roots(n: int, prec: int):
    with mp.workprec(prec + _GUARD_BITS):
        re = [mpf(0)] * n
        im = [mpf(0)] * n
        for k in range(n):
            t = mpf(2 * k) / n
            re[k] = mp.cospi(t)
            im[k] = mp.sinpi(t)
    return re, im, 2.0 ** (4 - prec)


@lru_cache(maxsize=64)
def _gauss_table_cached(p: int, n: int, precision: int, scale: int) -> GaussTable:
    return GaussTable(make_field(p, n), precision, scale)


def gauss_table(fld: Field, precision: int = 128, scale: int = 1) -> GaussTable:
    """Cached table of all q - 1 Gauss sums of fld."""
    return _gauss_table_cached(fld.p, fld.n, precision, scale % fld.p)


def jacobi_sum(chi: MultChar, psi: MultChar) -> CyclotomicInteger:
    """J(chi, psi) = sum over x in F_q of chi(x) psi(1-x), exactly.

    The result lives in Z[zeta_m] with m = lcm(ord chi, ord psi); the chi(0)=0
    convention removes x = 0 and x = 1 from the sum.
    """
    if psi.field is not chi.field:
        raise ValueError("characters live on different fields")
    fld = chi.field
    q1 = fld.q - 1
    m = math.lcm(chi.order, psi.order)
    e1 = chi.index * m // q1
    e2 = psi.index * m // q1
    counts = [0] * m
    one = fld.one
    for s in range(q1):
        x = fld.pow_g[s]
        omx = fld.sub(one, x)
        if omx.is_zero():
            continue
        expo = (e1 * s + e2 * fld.dlog_of(omx)) % m
        counts[expo] += 1
    return CyclotomicInteger(m, _reduce_mod_phi(counts, m))
