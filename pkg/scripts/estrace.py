"""Trace-formula engine used only by the data-snapshot generator.

Computes Tr T_n on S_k(Gamma_0(N), chi) for gcd(n, N) = 1 via the classical
Eichler-Selberg formula (identity, elliptic, hyperbolic, and weight-2
correction terms).  Characters are restricted to the ones the snapshot needs:
trivial, quadratic (Kronecker symbols), and the order-4 character mod 25;
values live in Z[i], represented exactly.

The elliptic local factor at composite level follows Hijikata's solution
count: for each conductor f, solutions x of x^2 - t x + n mod N*gcd(N, f),
chi-weighted, scaled by psi(N)/psi(N/gcd(N, f)).  Everything here is pinned
by the validation battery in build_data.py (dimension identities plus
eta-product eigenforms across levels and weights) before any unknown
coefficient is trusted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class GInt:
    """Exact Gaussian rationals a + b i, enough for order-4 characters."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _g(o)
        return GInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _g(o)
        return GInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _g(o) - self

    def __mul__(self, o):
        o = _g(o)
        return GInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = _g(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GInt({self.re}, {self.im})"

    def as_int(self) -> int:
        if self.im != 0 or self.re.denominator != 1:
            raise ValueError(f"{self!r} is not a rational integer")
        return int(self.re)

    def as_pair(self) -> tuple[Fraction, Fraction]:
        return self.re, self.im


def _g(v) -> GInt:
    return v if isinstance(v, GInt) else GInt(v)


I = GInt(0, 1)


class Character:
    """A Dirichlet character mod N with exact values in Z[i]."""

    def __init__(self, modulus: int, fn, name: str, order: int):
        self.modulus = modulus
        self.fn = fn
        self.name = name
        self.order = order
        self._cache: dict[int, GInt] = {}

    def __call__(self, x: int) -> GInt:
        x %= self.modulus if self.modulus else 0
        if x not in self._cache:
            self._cache[x] = _g(self.fn(x))
        return self._cache[x]

    def is_trivial(self) -> bool:
        return self.order == 1


def trivial_character(N: int) -> Character:
    return Character(N, lambda x: 1 if gcd(x, N) == 1 else 0, "trivial", 1)


def kronecker_character(D: int, N: int) -> Character:
    from hgff.signs import kronecker

    return Character(N, lambda x: kronecker(D, x) if x else 0, f"kronecker:{D}", 2)


def conductor5_character(N: int, conj: bool = False) -> Character:
    """The order-4 character of conductor 5 with 2 -> i (or -i when conj)."""
    table = {1: GInt(1), 2: GInt(0, -1 if conj else 1), 3: GInt(0, 1 if conj else -1), 4: GInt(-1)}

    def fn(x):
        if gcd(x, 5) != 1 or gcd(x, N) != 1:
            return GInt(0)
        return table[x % 5]

    return Character(N, fn, f"conductor5:2->{'-i' if conj else 'i'}", 4)


def psi(N: int) -> int:
    """Dedekind psi: N * prod over p | N of (1 + 1/p)."""
    out = N
    m = N
    p = 2
    while p * p <= m:
        if m % p == 0:
            out = out // p * (p + 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out = out // m * (m + 1)
    return out


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    """h(d): primitive reduced binary quadratic forms of discriminant d < 0."""
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {d}")
    count = 0
    b = d % 2
    while b * b <= -d // 3:
        ac4 = b * b - d
        if ac4 % 4 == 0:
            ac = ac4 // 4
            a = max(b, 1)
            while a * a <= ac:
                if a and ac % a == 0:
                    c = ac // a
                    if gcd(gcd(a, b), c) == 1:
                        count += 1 if (b == 0 or a == b or a == c) else 2
                a += 1
        b += 2
    return count


def h_weighted(d: int) -> Fraction:
    """Class number weighted by half the unit count."""
    if d == -3:
        return Fraction(1, 3)
    if d == -4:
        return Fraction(1, 2)
    return Fraction(class_number(d))


def gegenbauer(k: int, t: int, n: int) -> int:
    """P_k(t, n): (rho^{k-1} - rhobar^{k-1})/(rho - rhobar) for x^2 - tx + n."""
    u_prev, u = 0, 1  # U_{-1}, U_0
    for _ in range(k - 2):
        u_prev, u = u, t * u - n * u_prev
    return u


def _quad_roots_prime_power(t: int, n: int, p: int, e: int) -> list[int]:
    """Roots of x^2 - t x + n mod p^e by iterative lifting."""
    roots = [x for x in range(p) if (x * x - t * x + n) % p == 0]
    mod = p
    for _ in range(e - 1):
        nxt = []
        step = mod
        mod *= p
        for r in roots:
            for s in range(p):
                x = r + s * step
                if (x * x - t * x + n) % mod == 0:
                    nxt.append(x)
        roots = nxt
    return roots


@lru_cache(maxsize=None)
def _sols_cached(t: int, n: int, modulus: int) -> tuple[int, ...]:
    if modulus == 1:
        return (0,)
    parts = []
    for p, e in _factor(modulus).items():
        parts.append((p**e, _quad_roots_prime_power(t, n, p, e)))
    # CRT-combine
    combined = [(0, 1)]
    for pe, roots in parts:
        new = []
        for x0, m0 in combined:
            for r in roots:
                new.append((_crt(x0, m0, r, pe), m0 * pe))
        combined = new
    return tuple(sorted(x for x, _ in combined))


def _elliptic_local(t: int, n: int, f: int, N: int, chi: Character) -> GInt:
    """Hijikata-style chi-weighted solution count for conductor f at level N."""
    nf = gcd(N, f)
    modulus = N * nf
    scale = Fraction(psi(N), psi(N // nf))
    total = GInt(0)
    for x in _sols_cached(t, n, modulus):
        total = total + chi(x % N)
    # each residue mod N is hit nf times by lifts; normalize to keep the
    # f-coprime case equal to the plain solution count mod N
    return GInt(scale / nf) * total


def trace_tn(N: int, k: int, chi: Character, n: int) -> GInt:
    """Tr T_n on S_k(Gamma_0(N), chi) for gcd(n, N) = 1."""
    if gcd(n, N) != 1:
        raise ValueError("trace formula used only for n coprime to the level")
    if (k % 2 == 0) != (chi(N - 1) == 1):
        # chi(-1) must equal (-1)^k, else the space is empty
        return GInt(0)
    rt = isqrt(n)
    is_square = rt * rt == n

    a1 = GInt(0)
    if is_square:
        a1 = chi(rt) * GInt(Fraction(k - 1, 12) * psi(N) * rt ** (k - 2))

    a2 = _elliptic_sum(N, k, chi, n)

    a3 = GInt(0)
    d = 1
    while d * d <= n:
        if n % d == 0:
            dp = n // d
            weight = Fraction(1, 2) if d == dp else Fraction(1)
            cs = GInt(0)
            for c in _divisors(N):
                g = gcd(c, N // c)
                if (d - dp) % g == 0:
                    # chi has modulus N but the CRT class is only defined mod
                    # lcm(c, N/c); average chi over its g lifts
                    x = _crt(d, c, dp, N // c)
                    lcm = N // g
                    lift_sum = GInt(0)
                    for j in range(g):
                        lift_sum = lift_sum + chi((x + j * lcm) % N)
                    cs = cs + GInt(Fraction(_euler_phi(g), g)) * lift_sum
            a3 = a3 + GInt(weight * min(d, dp) ** (k - 1)) * cs
        d += 1

    a4 = GInt(0)
    if k == 2 and chi.is_trivial():
        a4 = GInt(sum(c for c in _divisors(n) if gcd(c, N) == 1))

    return a1 - a2 - a3 + a4


def _elliptic_sum(N: int, k: int, chi: Character, n: int) -> GInt:
    total = GInt(0)
    t = -isqrt(4 * n)
    while t * t <= 4 * n:
        disc = t * t - 4 * n
        if disc < 0:
            body = GInt(0)
            f = 1
            while f * f <= -disc:
                if disc % (f * f) == 0 and (disc // (f * f)) % 4 in (0, 1):
                    body = body + GInt(h_weighted(disc // (f * f))) * _elliptic_local(
                        t, n, f, N, chi
                    )
                f += 1
            total = total + GInt(gegenbauer(k, t, n)) * body
        t += 1
    return GInt(Fraction(1, 2)) * total


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


@lru_cache(maxsize=None)
def _euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out = out // p * (p - 1)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out = out // m * (m - 1)
    return out


def _crt(a: int, m: int, b: int, n: int) -> int:
    if m == 1:
        return b % max(n, 1)
    if n == 1:
        return a % m
    g = gcd(m, n)
    lcm = m // g * n
    diff = (b - a) // g
    inv = pow(m // g, -1, n // g)
    return (a + (diff * inv % (n // g)) * m) % lcm


def dim_sk(N: int, k: int, chi: Character) -> int:
    """dim S_k(Gamma_0(N), chi) = Tr T_1."""
    return trace_tn(N, k, chi, 1).as_int()


def dim_sk_trivial_formula(N: int, k: int) -> int:
    """Independent dimension formula for trivial character, k >= 4 even.

    Used to validate the trace engine's T_1 values.
    """
    if k % 2 or k < 4:
        raise ValueError("k must be even and >= 4")
    mu = psi(N)
    # elliptic point counts
    if N % 4 == 0:
        e2 = 0
    else:
        e2 = 1
        for p, v in _factor(N).items():
            e2 *= 1 + _kron4(p) if p != 2 else 1
        e2 = _count_points(N, -4)
    e3 = _count_points(N, -3)
    einf = sum(_euler_phi(gcd(d, N // d)) for d in _divisors(N))
    dim = Fraction(k - 1, 12) * mu - Fraction(einf, 2)
    dim += e2 * (k // 4 - Fraction(k - 1, 4))
    dim += e3 * (k // 3 - Fraction(k - 1, 3))
    if dim.denominator != 1:
        raise ArithmeticError("dimension formula not integral")
    return int(dim)


def _kron4(p):
    return {1: 1, 3: -1}.get(p % 4, 0)


def _factor(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _count_points(N: int, disc: int) -> int:
    """Number of elliptic points: solutions of x^2 + 1 or x^2 + x + 1 mod N."""
    if disc == -4:
        if N % 4 == 0:
            return 0
        count = 1
        for p, v in _factor(N).items():
            if p == 2:
                count *= 1
            elif p % 4 == 1:
                count *= 2
            else:
                count *= 0
        return count
    if N % 9 == 0:
        return 0
    count = 1
    for p, v in _factor(N).items():
        if p == 3:
            count *= 1
        elif p % 3 == 1:
            count *= 2
        else:
            count *= 0
    return count
