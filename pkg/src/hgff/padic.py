"""Exact p-adic backend: Teichmuller lifts, Morita's gamma, and the G-function.

Everything is residue arithmetic mod p^k.  The G-function sum needs Morita's
gamma at ~4(p-1) rational arguments per evaluation; two evaluation strategies
are provided:

* walk: the defining product Gamma_p(n) = (-1)^n prod_{0<j<n, p | j absent} j
  taken at the integer representative of the argument mod p^k.  Exact and
  simple, cost O(p^k) amortized over ascending requests.

* series: Gamma_p restricted to a residue disc y + pZ_p is given by a single
  convergent power series.  Writing log Gamma_p(z) = sum over odd n of
  lam_n z^n / n! on pZ_p (even coefficients vanish by the reflection
  symmetry Gamma_p(z) Gamma_p(-z) = 1 there), the constants lam_1, lam_3,
  lam_5 are recovered from Gamma_p(p), Gamma_p(2p), Gamma_p(3p), and the
  log-derivatives at every residue follow from the functional equation
  Gamma_p(x+1) = -x Gamma_p(x).  Cost O(p) setup, O(k) per argument.

The two paths cross-validate each other in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LiftOutOfRange, NotPadicInteger, PrecisionExhausted

_WALK_LIMIT = 60_000_000  # refuse singly-stepped products beyond this


@dataclass(frozen=True)
class PadicResidue:
    """An element of Z/p^k Z standing for a p-adic integer known mod p^k."""

    p: int
    k: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.k)

    @property
    def modulus(self) -> int:
        return self.p**self.k


def teichmuller(p: int, x: int, k: int):
    """The (p-1)-th root of unity in Z/p^kZ congruent to x mod p.

    Computed by iterating t <- t^p to its fixed point.  x divisible by p is
    the caller's zero convention; None marks it.
    """
    if x % p == 0:
        return None
    mod = p**k
    t = x % mod
    while True:
        t2 = pow(t, p, mod)
        if t2 == t:
            return PadicResidue(p, k, t)
        t = t2


def lift_symmetric(r: PadicResidue, bound: int) -> int:
    """The unique integer in [-bound, bound] congruent to r, if any."""
    mod = r.modulus
    if mod <= 2 * bound:
        raise LiftOutOfRange(f"p^k = {mod} too small for symmetric bound {bound}")
    v = r.value if r.value <= mod // 2 else r.value - mod
    if abs(v) > bound:
        raise LiftOutOfRange(f"no representative of {r.value} mod {mod} within [-{bound}, {bound}]")
    return v


def _frac_residue(x: Fraction, p: int, mod: int) -> int:
    if x.denominator % p == 0:
        raise NotPadicInteger(f"{x} is not a p-adic integer for p={p}")
    return x.numerator * pow(x.denominator, -1, mod) % mod


def _log1p(w: int, p: int, K: int) -> int:
    """p-adic log of 1 + w for p | w, valid for K < p."""
    mod = p**K
    acc = 0
    term = 1
    for i in range(1, K):
        term = term * w % mod
        c = term * pow(i, -1, mod) % mod
        acc = (acc - c) if i % 2 == 0 else (acc + c)
    return acc % mod


def _exp(u: int, p: int, K: int) -> int:
    """p-adic exp of u for p | u, valid for K < p."""
    mod = p**K
    acc = 1
    term = 1
    fact = 1
    for i in range(1, K):
        term = term * u % mod
        fact = fact * i
        acc = (acc + term * pow(fact, -1, mod)) % mod
    return acc


class PadicGammaCache:
    """Morita gamma values mod p^K, memoized per rational argument."""

    def __init__(self, p: int, K: int, method: str = "auto"):
        if p < 3:
            raise NotPadicInteger("p must be an odd prime")
        self.p = p
        self.K = K
        self.mod = p**K
        if method == "auto":
            method = "series" if (p >= 17 and K <= 6) else "walk"
        self.method = method
        self._memo: dict[int, int] = {}
        if method == "series":
            self._setup_series()
        else:
            if self.mod > _WALK_LIMIT:
                raise PrecisionExhausted(
                    f"direct gamma walk at p^K = {self.mod} is out of budget"
                )
            self._walk_j = 1
            self._walk_prod = 1

    # -- direct product ------------------------------------------------------

    def _gamma_residue_walk(self, r: int) -> int:
        # Gamma_p(r) = (-1)^r prod_{0<j<r, p not dividing j} j  (mod p^K)
        if r < self._walk_j:
            self._walk_j, self._walk_prod = 1, 1
        j, prod, mod, p = self._walk_j, self._walk_prod, self.mod, self.p
        while j < r:
            if j % p:
                prod = prod * j % mod
            j += 1
        self._walk_j, self._walk_prod = j, prod
        return (-prod if r % 2 else prod) % mod

    # -- locally analytic series ----------------------------------------------

    def _small_gamma_product(self, n: int) -> int:
        prod = 1
        for j in range(1, n):
            if j % self.p:
                prod = prod * j % self.mod
        return (-prod if n % 2 else prod) % self.mod

    def _setup_series(self):
        p, K, mod = self.p, self.K, self.mod
        if K > 6 or p <= 2 * K + 3:
            raise PrecisionExhausted(f"series gamma unsupported at p={p}, K={K}")
        # odd log coefficients lam_1, lam_3, lam_5 from Gamma_p(cp), c = 1..3
        logs = []
        for c in (1, 2, 3):
            v = self._small_gamma_product(c * p)
            logs.append(_log1p((v - 1) % mod, p, K))
        # l_c = c*u1 + (c^3/6) u3 + (c^5/120) u5 with u_n = lam_n p^n
        rows = [
            [Fraction(c), Fraction(c**3, 6), Fraction(c**5, 120)] for c in (1, 2, 3)
        ]
        us = _solve_mod(rows, logs, mod)
        lam = {}
        for n, u in zip((1, 3, 5), us):
            pn = p**n
            if n >= K:
                lam[n] = 0
                continue
            if u % pn:
                raise PrecisionExhausted("gamma series constants failed divisibility")
            lam[n] = (u // pn) % (mod // pn)
        # log-derivative prefix tables L_n(y) for y = 0..p-1
        nmax = min(5, K - 1)
        L = {n: [0] * p for n in range(1, nmax + 1)}
        gam = [0] * p
        gam[0] = 1
        base = {1: lam[1], 2: 0, 3: lam.get(3, 0), 4: 0, 5: lam.get(5, 0)}
        cur = {n: base[n] for n in range(1, nmax + 1)}
        sign_fact = {1: 1, 2: -1, 3: 2, 4: -6, 5: 24}
        g = 1
        for y in range(p):
            for n in range(1, nmax + 1):
                L[n][y] = cur[n] % mod
            gam[y] = g
            if y + 1 < p:
                # step y -> y + 1; y = 0 is the p | x branch
                g = (-g if y == 0 else -y * g) % mod
                if y:
                    inv = pow(y, -1, mod)
                    ip = 1
                    for n in range(1, nmax + 1):
                        ip = ip * inv % mod
                        cur[n] = (cur[n] + sign_fact[n] * ip) % mod
        self._L = L
        self._gam_int = gam
        self._nmax = nmax
        self._inv_fact = {n: pow(_fact(n), -1, mod) for n in range(1, nmax + 1)}

    def _gamma_residue_series(self, r: int) -> int:
        p, mod = self.p, self.mod
        y = r % p
        z = (r - y) % mod
        u = 0
        zn = 1
        for n in range(1, self._nmax + 1):
            zn = zn * z % mod
            u = (u + self._L[n][y] * zn % mod * self._inv_fact[n]) % mod
        return self._gam_int[y] * _exp(u, p, self.K) % mod

    # -- public ----------------------------------------------------------------

    def gamma_residue(self, r: int) -> int:
        r %= self.mod
        hit = self._memo.get(r)
        if hit is not None:
            return hit
        if self.method == "series":
            v = self._gamma_residue_series(r)
        else:
            v = self._gamma_residue_walk(r)
        self._memo[r] = v
        return v

    def gamma(self, x: Fraction) -> int:
        return self.gamma_residue(_frac_residue(x, self.p, self.mod))


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _solve_mod(rows: list[list[Fraction]], rhs: list[int], mod: int) -> list[int]:
    """Solve a small exact rational linear system for residues mod `mod`."""
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        v = aug[i][n]
        out.append(v.numerator * pow(v.denominator, -1, mod) % mod)
    return out


_gamma_caches: dict[tuple[int, int, str], PadicGammaCache] = {}


def gamma_cache(p: int, K: int, method: str = "auto") -> PadicGammaCache:
    key = (p, K, method)
    if key not in _gamma_caches:
        _gamma_caches[key] = PadicGammaCache(p, K, method)
    return _gamma_caches[key]


def padic_gamma(p: int, x: Fraction | int, k: int) -> PadicResidue:
    """Morita's Gamma_p at a rational p-adic integer, mod p^k."""
    x = Fraction(x)
    return PadicResidue(p, k, gamma_cache(p, k).gamma(x))


# ---------------------------------------------------------------------------
# the p-adic hypergeometric function
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GParams:
    """Parameter block [a_1..a_m; b_1..b_m | x] with a_i, b_i in Q intersect Z_p."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    x: Fraction

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise ValueError("a and b must have equal length m >= 1")
        # fractional-part semantics: only a_i mod 1 and b_i mod 1 enter the sum
        object.__setattr__(self, "a", tuple(v - (v.numerator // v.denominator) for v in self.a))
        object.__setattr__(self, "b", tuple(v - (v.numerator // v.denominator) for v in self.b))

    @property
    def m(self) -> int:
        return len(self.a)


def eval_G(
    p: int, params: GParams, k: int, scale_pow: int = 0, gamma_method: str = "auto"
) -> PadicResidue:
    """p^{scale_pow} times the m-term p-adic hypergeometric sum, mod p^k.

    Each j-term is a p-adic unit times (-p)^{e_j} with e_j an explicit integer
    from the floor bookkeeping; terms with negative e_j are handled by summing
    p^{v} times the whole series exactly and dividing at the end, so nothing
    is silently truncated.  The value itself can have negative valuation
    (bounded by the e_j); callers checking relations of the form
    a(p) = u * p * G[...] pass scale_pow=1 and lift the result.
    """
    if p < 3:
        raise NotPadicInteger("p must be an odd prime")
    m = params.m
    for v in params.a + params.b:
        if v.denominator % p == 0:
            raise NotPadicInteger(f"parameter {v} not in Z_p")
    if params.x.denominator % p == 0 or params.x.numerator % p == 0:
        raise NotPadicInteger(f"argument {params.x} must be a nonzero unit mod p")

    q1 = p - 1
    # per-term (-p) exponents, exact
    exps = []
    for j in range(q1):
        jj = Fraction(j, q1)
        e = 0
        for i in range(m):
            e -= _floor(params.a[i] - jj)
            e -= _floor((-params.b[i]) % 1 + jj)
        exps.append(e)
    v_neg = max(0, -min(exps))
    K = k + v_neg
    mod = p**K
    cache = gamma_cache(p, K, gamma_method)

    inv_const = 1
    for i in range(m):
        inv_const = inv_const * cache.gamma(params.a[i] % 1) % mod
        inv_const = inv_const * cache.gamma((-params.b[i]) % 1) % mod
    inv_const = pow(inv_const, -1, mod)

    x_res = _frac_residue(params.x, p, mod)
    om = teichmuller(p, x_res, K)
    om_bar = pow(om.value, -1, mod)

    total = 0
    om_pow = 1  # omega-bar^j (x)
    for j in range(q1):
        jj = Fraction(j, q1)
        unit = om_pow
        for i in range(m):
            unit = unit * cache.gamma((params.a[i] - jj) % 1) % mod
            unit = unit * cache.gamma(((-params.b[i]) % 1 + jj) % 1) % mod
        unit = unit * inv_const % mod
        e = exps[j]
        sign = -1 if ((j * m) + e) % 2 else 1
        total = (total + sign * unit * p ** (e + v_neg)) % mod
        om_pow = om_pow * om_bar % mod
    # total = p^{v_neg} * sum_j (-1)^{jm} unit_j (-p)^{e_j}
    shift = v_neg - scale_pow
    if shift > 0:
        if total % p**shift:
            raise PrecisionExhausted(
                f"p^{scale_pow} * G has negative valuation; scale up or check parameters"
            )
        total //= p**shift
    elif shift < 0:
        total *= p ** (-shift)
    modk = p**k
    g = (-total) * pow(q1, -1, modk) % modk
    return PadicResidue(p, k, g)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def precision_for_weight(p: int, weight: int) -> int:
    """Smallest k with p^k > 2 B, B = 4 p^{(w-1)/2} (1 + p); at least 3.

    B is a Weil-type bound with slack for the subtracted multiples of p, so
    the symmetric lift of any relation value of this weight is unique.
    """
    from math import isqrt

    bound = 4 * (1 + p) * (isqrt(p ** (weight - 1)) + 1)
    k = 3
    while p**k <= 2 * bound:
        k += 1
    return k
