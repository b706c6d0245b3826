"""Integer q-expansions of Dedekind eta products.

eta(z) = q^{1/24} prod (1 - q^n); a product prod_i eta(delta_i z)^{r_i} has
leading exponent sum(delta_i r_i)/24, which must be integral for the forms
used here.  Expansion uses the pentagonal-number series for each Euler
factor, so all arithmetic is exact and sparse.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAnIntegralForm


@dataclass(frozen=True)
class EtaProduct:
    """factors: tuple of (multiplier delta, exponent r)."""

    factors: tuple[tuple[int, int], ...]

    @property
    def weight(self):
        tw = sum(r for _, r in self.factors)
        if tw % 2:
            raise NotAnIntegralForm("odd total eta exponent")
        return tw // 2

    @property
    def offset(self) -> int:
        s = sum(d * r for d, r in self.factors)
        if s % 24:
            raise NotAnIntegralForm(f"leading exponent {s}/24 is not integral")
        return s // 24

    def describe(self) -> str:
        return "*".join(
            f"eta({d}z)^{r}" if r != 1 else f"eta({d}z)" for d, r in self.factors
        )


def _euler_sparse(delta: int, length: int) -> list[tuple[int, int]]:
    """Nonzero terms of prod (1 - q^{delta n}) up to q^length, as (exp, coeff)."""
    out = [(0, 1)]
    k = 1
    while True:
        hit = False
        for e in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if delta * e <= length:
                out.append((delta * e, -1 if k % 2 else 1))
                hit = True
        if not hit:
            break
        k += 1
    return sorted(out)


def _mul_sparse(dense: list[int], sparse: list[tuple[int, int]], length: int) -> list[int]:
    out = [0] * (length + 1)
    for e, c in sparse:
        if c == 1:
            for i in range(length - e + 1):
                if dense[i]:
                    out[i + e] += dense[i]
        else:
            for i in range(length - e + 1):
                if dense[i]:
                    out[i + e] -= dense[i]
    return out


def _invert(series: list[int], length: int) -> list[int]:
    if series[0] != 1:
        raise NotAnIntegralForm("series inversion needs unit constant term")
    inv = [0] * (length + 1)
    inv[0] = 1
    for n in range(1, length + 1):
        s = 0
        for i in range(1, n + 1):
            if series[i] and inv[n - i]:
                s += series[i] * inv[n - i]
        inv[n] = -s
    return inv


def eta_expansion(prod: EtaProduct, N: int) -> list[int]:
    """Exact coefficients a(1..N) of the product, as a list indexed by n.

    Entry [0] is unused (kept 0) so that result[n] = a(n).
    """
    offset = prod.offset
    if offset < 0:
        raise NotAnIntegralForm("negative leading exponent")
    length = N - offset
    if length < 0:
        return [0] * (N + 1)
    series = [0] * (length + 1)
    series[0] = 1
    for delta, r in prod.factors:
        e = _euler_sparse(delta, length)
        if r >= 0:
            for _ in range(r):
                series = _mul_sparse(series, e, length)
        else:
            dense = [0] * (length + 1)
            for idx, c in e:
                dense[idx] = c
            inv = _invert(dense, length)
            for _ in range(-r):
                series = _mul_dense(series, inv, length)
    out = [0] * (N + 1)
    for i, c in enumerate(series):
        if 0 <= i + offset <= N:
            out[i + offset] = c
    return out


def _mul_dense(a: list[int], b: list[int], length: int) -> list[int]:
    out = [0] * (length + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(length - i + 1):
                if b[j]:
                    out[i + j] += ai * b[j]
    return out
