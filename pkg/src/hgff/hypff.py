"""The normalized finite-field hypergeometric function over F_q.

For characters A_1..A_m, B_1..B_m and x in F_q the value is

    F(A; B | x)_q = (-1/(q-1)) * sum over all chi of
        prod_i [ g(A_i chi)/g(A_i) * g(conj(B_i chi))/g(conj(B_i)) ]
        * chi(-1)^m * chi(x)

with chi(0) = 0 applied verbatim for every character, so x = 0 yields an
exact zero rather than an error.  When B_1 is trivial this is the usual
mF_{m-1} convention; with all B_i trivial it equals (-q)^{m-1} times
Greene's function with the same parameters.

Parameters are usually entered by rational label: the fraction t/k denotes
the canonical character of order k raised to the t-th power.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charsums import GaussTable, gauss_table
from .cyclotomic import ComplexValue, complex_zero, round_to_integer
from .errors import PrecisionExhausted, RoundingUncertain
from .fields import Field, FieldElement, MultChar, canonical_char

PRECISION_LADDER = (128, 256, 512)


@dataclass(frozen=True)
class HypParams:
    """Parameter block (A_1..A_m; B_1..B_m | x) on one field."""

    upper: tuple[MultChar, ...]
    lower: tuple[MultChar, ...]
    x: FieldElement

    def __post_init__(self):
        if len(self.upper) != len(self.lower) or not self.upper:
            raise ValueError("upper and lower parameter lists must have equal length m >= 1")
        fld = self.upper[0].field
        if any(c.field is not fld for c in self.upper + self.lower):
            raise ValueError("all characters must live on one field")

    @property
    def field(self) -> Field:
        return self.upper[0].field

    @property
    def m(self) -> int:
        return len(self.upper)

    def conjugated(self) -> "HypParams":
        """Replace every parameter character by its inverse."""
        return HypParams(
            tuple(c.conj() for c in self.upper),
            tuple(c.conj() for c in self.lower),
            self.x,
        )


def params_from_labels(
    fld: Field,
    upper: list[Fraction],
    lower: list[Fraction],
    x: FieldElement,
    conjugate: bool = False,
) -> HypParams:
    """Build HypParams from rational labels t/k -> chi_k^t."""

    def to_char(label: Fraction) -> MultChar:
        k, t = label.denominator, label.numerator
        return canonical_char(fld, k) ** t

    params = HypParams(
        tuple(to_char(a) for a in upper), tuple(to_char(b) for b in lower), x
    )
    return params.conjugated() if conjugate else params


def _char_coefficients(params: HypParams, gt: GaussTable) -> list[ComplexValue]:
    """coeff[t] = prefactor * prod_i g(A_i chi_t) g(conj(B_i) conj(chi_t)) * chi_t(-1)^m."""
    fld = params.field
    q1 = fld.q - 1
    m = params.m
    denom = None
    for a in params.upper:
        denom = gt.value(a.index) if denom is None else denom * gt.value(a.index)
    for b in params.lower:
        denom = denom * gt.value(-b.index)
    prefactor = denom.recip()
    half = q1 // 2  # dlog(-1) for odd q
    coeffs = []
    for t in range(q1):
        acc = prefactor
        for a in params.upper:
            acc = acc * gt.value(a.index + t)
        for b in params.lower:
            acc = acc * gt.value(-b.index - t)
        if (t * m * half) % q1:  # chi_t(-1)^m = (-1)^{t m}
            acc = -acc
        coeffs.append(acc)
    return coeffs


def eval_F(params: HypParams, gt: GaussTable) -> ComplexValue:
    """The full (q-1)-term character sum with propagated error."""
    fld = params.field
    prec = gt.precision
    if params.x.is_zero():
        return complex_zero(prec)
    q1 = fld.q - 1
    sx = fld.dlog_of(params.x)
    coeffs = _char_coefficients(params, gt)
    total = complex_zero(prec)
    for t in range(q1):
        total = total + coeffs[t] * gt.unit_root(t * sx)
    scale = ComplexValue.exact(Fraction(-1, q1), prec)
    return total * scale


def sweep_F(params_at_one: HypParams, gt: GaussTable) -> dict[int, ComplexValue]:
    """Evaluate F at every nonzero argument of F_q in one pass.

    The character coefficients do not depend on x, so a full sweep costs one
    coefficient pass plus q-1 inner products; this is what makes the O(q^2)
    trace-formula sums affordable.  Returns {code of x: value}.
    """
    fld = params_at_one.field
    prec = gt.precision
    q1 = fld.q - 1
    coeffs = _char_coefficients(params_at_one, gt)
    cmax = max(c.abs_upper() for c in coeffs)
    cerr = max(c.err for c in coeffs)
    eps = 2.0 ** (2 - prec)
    err_sum = q1 * (cerr + cmax * gt._root_err + 16.0 * cmax * eps) + q1 * q1 * cmax * eps
    out: dict[int, ComplexValue] = {}
    rr, ri = gt._roots_re, gt._roots_im
    with gt_workprec(prec):
        inv = Fraction(-1, q1)
        for sx in range(q1):
            sr = ri[0] * 0
            si = ri[0] * 0
            r = 0
            for t in range(q1):
                c = coeffs[t]
                a, b = rr[r], ri[r]
                sr += c.re * a - c.im * b
                si += c.re * b + c.im * a
                r += sx
                if r >= q1:
                    r -= q1
            val = ComplexValue(sr, si, err_sum, prec) * ComplexValue.exact(inv, prec)
            out[fld.encode(fld.pow_g[sx])] = val
    return out


def gt_workprec(prec: int):
    from mpmath import mp

    return mp.workprec(prec + 12)


def eval_F_integer(params: HypParams, gt: GaussTable) -> int:
    """Certified integer value of eval_F, retrying at escalating precision."""
    table = gt
    for prec in PRECISION_LADDER:
        if table.precision < prec:
            table = gauss_table(params.field, prec, gt.scale)
        try:
            return round_to_integer(eval_F(params, table))
        except RoundingUncertain:
            continue
    raise PrecisionExhausted(
        f"value not certifiably integral at {PRECISION_LADDER[-1]} bits"
    )


def greene_conversion_factor(m: int, q: int) -> int:
    """Multiplier taking Greene's function to mF_{m-1} when all B_i are trivial."""
    return (-q) ** (m - 1)
