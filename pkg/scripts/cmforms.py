"""CM newform construction for the data-snapshot generator.

Weight-3 CM newforms are theta series of Hecke characters with infinity type
z^2 on imaginary quadratic fields: for an ideal character xi with
xi((alpha)) = eps(alpha) alpha^2, the series sum over ideals xi(a) q^{N(a)}
is a newform of level |D| N(f) whose nebentypus is chi_K * eps restricted to
the integers.  Class numbers 1 and 2 cover every field needed here; for
h = 2 the non-principal ideals are parametrized through a fixed auxiliary
prime ideal, whose xi-value is a square root adjoined exactly as a root of
unity times the generator of its square.

All coefficient arithmetic is exact in Z[zeta_L]; candidates are filtered by
primitivity of eps and target nebentypus, and the battery in build_data.py
checks the known eta-product CM forms come out identical before any unknown
label is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from hgff.cyclotomic import CyclotomicInteger, _reduce_mod_phi
from hgff.signs import kronecker

# fields used here: discriminant -> (h, unit count w)
FIELDS = {-3: (1, 6), -4: (1, 4), -7: (1, 2), -8: (1, 2), -20: (2, 2), -24: (2, 2)}


def _omega_trace_norm(D: int) -> tuple[int, int]:
    """Z_K = Z[w] with w^2 - t w + n = 0: returns (t, n)."""
    if D % 4 == 0:
        return 0, -D // 4
    return 1, (1 - D) // 4


@dataclass(frozen=True)
class Elt:
    """x + y w, exact."""

    x: int
    y: int


class QuadOrder:
    """Arithmetic of the maximal order of Q(sqrt(D)), D < 0 fundamental."""

    def __init__(self, D: int):
        self.D = D
        self.h, self.w_units = FIELDS[D]
        self.wt, self.wn = _omega_trace_norm(D)

    def mul(self, a: Elt, b: Elt) -> Elt:
        # (x1 + y1 w)(x2 + y2 w) with w^2 = wt*w - wn
        x = a.x * b.x - self.wn * a.y * b.y
        y = a.x * b.y + a.y * b.x + self.wt * a.y * b.y
        return Elt(x, y)

    def norm(self, a: Elt) -> int:
        return a.x * a.x + self.wt * a.x * a.y + self.wn * a.y * a.y

    def conj(self, a: Elt) -> Elt:
        # conjugate of x + y w is (x + wt*y) - y w
        return Elt(a.x + self.wt * a.y, -a.y)

    def units(self) -> list[Elt]:
        if self.D == -4:
            return [Elt(1, 0), Elt(-1, 0), Elt(0, 1), Elt(0, -1)]
        if self.D == -3:
            out = [Elt(1, 0)]
            for _ in range(5):
                out.append(self.mul(out[-1], Elt(0, 1)))  # w is a 6th root
            return out
        return [Elt(1, 0), Elt(-1, 0)]

    def elements_of_norm(self, n: int) -> list[Elt]:
        """All alpha with N(alpha) = n."""
        if n <= 0:
            return [Elt(0, 0)] if n == 0 else []
        out = []
        # N = (x + wt*y/2)^2 + |D| y^2 / 4
        ymax = isqrt(4 * n // (-self.D)) + 1
        for y in range(-ymax, ymax + 1):
            # x^2 + wt*x*y + wn*y^2 = n
            a, b, c = 1, self.wt * y, self.wn * y * y - n
            disc = b * b - 4 * a * c
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for sgn in (1, -1) if r else (1,):
                num = -b + sgn * r
                if num % 2 == 0:
                    out.append(Elt(num // 2, y))
        return out


class ResidueRing:
    """Z_K / f for an ideal f in HNF [a, b + w; 0, c] (so N(f) = a c)."""

    def __init__(self, order: QuadOrder, a: int, b: int, c: int):
        self.K = order
        self.a, self.b, self.c = a, b, c
        self.nf = a * c

    def reduce(self, e: Elt) -> Elt:
        # reduce modulo the lattice spanned by (a, 0) and (b, c)
        q = e.y // self.c
        x = e.x - q * self.b
        y = e.y - q * self.c
        return Elt(x % self.a, y)

    def key(self, e: Elt) -> tuple[int, int]:
        r = self.reduce(e)
        return r.x, r.y

    def contains(self, e: Elt) -> bool:
        """Is e in the ideal f?"""
        if e.y % self.c:
            return False
        return (e.x - (e.y // self.c) * self.b) % self.a == 0

    def unit_group(self):
        """Elements of (Z_K/f)^* with multiplication table support."""
        units = []
        for x in range(self.a):
            for y in range(self.c):
                e = Elt(x, y)
                if gcd(self.K.norm(e), self.nf) == 1:
                    units.append(e)
        return units


def ideal_hnf(order: QuadOrder, gens: list[Elt]) -> tuple[int, int, int]:
    """HNF [a, b+w; 0, c] of the ideal generated by gens (as Z_K-module)."""
    rows = []
    for g in gens:
        rows.append((g.x, g.y))
        gw = order.mul(g, Elt(0, 1))
        rows.append((gw.x, gw.y))
    # integer row reduction to HNF on 2 columns (x, y)
    rows = [r for r in rows if r != (0, 0)]
    while True:
        nz = [r for r in rows if r[1] != 0]
        if not nz:
            raise ValueError("rank-deficient ideal")
        piv = min(nz, key=lambda r: abs(r[1]))
        new_rows = []
        done = True
        for r in rows:
            if r is piv:
                continue
            if r[1] != 0:
                q = r[1] // piv[1]
                rr = (r[0] - q * piv[0], r[1] - q * piv[1])
                if rr[1] != 0:
                    done = False
                if rr != (0, 0):
                    new_rows.append(rr)
            else:
                new_rows.append(r)
        rows = new_rows + [piv]
        if done:
            break
    c_row = min((r for r in rows if r[1] != 0), key=lambda r: abs(r[1]))
    if c_row[1] < 0:
        c_row = (-c_row[0], -c_row[1])
    xs = [r[0] for r in rows if r[1] == 0]
    a = 0
    for v in xs:
        a = gcd(a, abs(v))
    if a == 0:
        raise ValueError("not a full-rank lattice")
    b = c_row[0] % a
    return a, b, c_row[1]


def ideals_of_norm(order: QuadOrder, n: int) -> list[tuple[int, int, int]]:
    """All integral ideals of norm n, as HNF triples (a, b, c) with ac = n."""
    out = []
    for c in range(1, n + 1):
        if n % c:
            continue
        a = n // c
        for b in range(a):
            # the module Z*a + Z*(b + w)*... is an ideal iff stable under w
            # w * a = a*w: need a*w in module: a*w = stable iff c | a and ...
            # use generic stability test
            if _is_ideal(order, a, b, c):
                out.append((a, b, c))
    return out


def _is_ideal(order: QuadOrder, a: int, b: int, c: int) -> bool:
    # module M = Z<(a,0), (b,c)>; check w*(a,0) and w*(b,c) stay in M
    ring = ResidueRing(order, a, b, c)
    for gen in (Elt(a, 0), Elt(b, c)):
        gw = order.mul(gen, Elt(0, 1))
        if gw.y % c:
            return False
        if (gw.x - (gw.y // c) * b) % a:
            return False
    return True


class AbelianDual:
    """All characters of a finite abelian group given by its elements + op."""

    def __init__(self, elements, op, identity):
        self.elements = list(elements)
        self.op = op
        self.identity = identity
        self.n = len(self.elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._build_basis()

    def _order_of(self, e):
        k, acc = 1, e
        while acc != self.identity:
            acc = self.op(acc, e)
            k += 1
        return k

    def _build_basis(self):
        remaining = {e for e in self.elements}
        basis = []
        span = {self.identity}
        while len(span) < self.n:
            cand = max(remaining - span, key=self._order_of)
            # find the smallest power of cand inside current span
            k, acc = 1, cand
            while acc not in span:
                acc = self.op(acc, cand)
                k += 1
            basis.append((cand, k, acc))  # cand^k = acc in span
            new_span = set(span)
            powers = [self.identity]
            acc2 = cand
            for _ in range(k - 1):
                powers.append(acc2)
                acc2 = self.op(acc2, cand)
            for s in span:
                for p in powers:
                    new_span.add(self.op(s, p))
            span = new_span
        self.basis = basis

    def characters(self):
        """Yield characters as dicts element -> exponent of zeta_M, with M."""
        M = 1
        for _, k, _ in self.basis:
            M = lcm(M, k)
        # express each element over the basis by BFS
        coords = {self.identity: tuple(0 for _ in self.basis)}
        frontier = [self.identity]
        while frontier:
            new_frontier = []
            for e in frontier:
                for i, (g, k, _) in enumerate(self.basis):
                    ne = self.op(e, g)
                    if ne not in coords:
                        vec = list(coords[e])
                        vec[i] += 1
                        coords[ne] = tuple(vec)
                        new_frontier.append(ne)
            frontier = new_frontier
        # character values on basis generators must respect cand^k = acc
        import itertools

        ranges = []
        for g, k, acc in self.basis:
            ranges.append(range(M))
        for choice in itertools.product(*ranges):
            ok = True
            for i, (g, k, acc) in enumerate(self.basis):
                # chi(g)^k must equal chi(acc)
                lhs = choice[i] * k % M
                rhs = sum(choice[j] * coords[acc][j] for j in range(len(self.basis))) % M
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                continue
            table = {}
            for e, vec in coords.items():
                table[e] = sum(choice[j] * vec[j] for j in range(len(self.basis))) % M
            yield table, M


@dataclass
class CMForm:
    level: int
    weight: int
    nebentypus: int  # kronecker discriminant; 1 means trivial
    field_disc: int
    cond_norm: int
    zeta_order: int  # coefficients live in Z[zeta_L] scaled by 1/den
    an: list  # CyclotomicInteger numerators, index n, 1..nmax
    den: int
    tag: str

    def coeff(self, n: int) -> CyclotomicInteger:
        num = self.an[n]
        if any(c % self.den for c in num.coords):
            raise ValueError("non-integral CM coefficient")
        return CyclotomicInteger(num.m, tuple(c // self.den for c in num.coords))


def _cyc_mono(L: int, e: int, scale: int = 1) -> CyclotomicInteger:
    coeffs = [0] * L
    coeffs[e % L] = scale
    return CyclotomicInteger(L, _reduce_mod_phi(coeffs, L))


def _sqrtD_in_zetaL(D: int, L: int) -> CyclotomicInteger:
    """sqrt(D) inside Q(zeta_L) via Gauss sums: sqrt(D) = sum chi_D(a) zeta^a-ish."""
    m = abs(D)
    assert L % m == 0
    total = [0] * L
    step = L // m
    for a in range(m):
        s = kronecker(D, a) if a else 0
        if s:
            total[(a * step) % L] += s
    return CyclotomicInteger(L, _reduce_mod_phi(total, L))


def cm_newforms(
    D: int, cond_norm: int, weight: int = 3, nmax: int = 210
) -> list[CMForm]:
    """All CM newform candidates at level |D| * cond_norm for field disc D."""
    order = QuadOrder(D)
    h, w_units = order.h, order.w_units
    out = []
    for a, b, c in ideals_of_norm(order, cond_norm):
        ring = ResidueRing(order, a, b, c)
        units = ring.unit_group()
        keyed = {ring.key(u) for u in units}

        def op(k1, k2):
            e = order.mul(Elt(*k1), Elt(*k2))
            return ring.key(e)

        dual = AbelianDual(sorted(keyed), op, ring.key(Elt(1, 0)))
        for table, M in dual.characters():
            form = _build_theta(order, ring, table, M, weight, nmax, D, cond_norm)
            if form is not None:
                out.extend(form)
    return out


def _eps_consistent(order, ring, table, M, weight):
    """eps(u) u^{w-1} must be 1 for every unit of Z_K inside the ring."""
    L = lcm(M, _zeta_need(order.D))
    for u in order.units():
        if gcd(order.norm(u), ring.nf) != 1:
            return None
        e = table[ring.key(u)] * (L // M)
        val = _cyc_mono(L, e) * _elt_power_cyc(order, u, weight - 1, L)
        if val != CyclotomicInteger.from_int(1, L):
            return None
    return L


def _zeta_need(D: int) -> int:
    """zeta order needed to express Z_K inside a cyclotomic field."""
    return {-3: 3, -4: 4, -7: 7, -8: 8, -20: 20, -24: 24}[D]


def _elt_to_cyc(order: QuadOrder, e: Elt, L: int) -> CyclotomicInteger:
    # x + y*w with w = (wt + sqrt(D))/2; 2w = wt + sqrt(D)
    s = _sqrtD_in_zetaL(order.D, L)
    two_val = CyclotomicInteger.from_int(2 * e.x + e.y * order.wt, L) + e.y * s
    return two_val  # this is 2 * element; callers track the factor 2

def _elt_power_cyc(order: QuadOrder, e: Elt, k: int, L: int) -> CyclotomicInteger:
    """element^k as exact cyclotomic, requires 2^k | result (unit powers only)."""
    acc = Elt(1, 0)
    for _ in range(k):
        acc = order.mul(acc, e)
    two_acc = _elt_to_cyc(order, acc, L)  # = 2 * e^k
    # e^k for a unit has integral coordinates; divide the doubled value by 2
    coords = two_acc.coords
    if any(v % 2 for v in coords):
        raise ValueError("unit power not divisible by 2")
    return CyclotomicInteger(two_acc.m, tuple(v // 2 for v in coords))


def _build_theta(order, ring, table, M, weight, nmax, D, cond_norm):
    L = _eps_consistent(order, ring, table, M, weight)
    if L is None:
        return []
    if not _eps_primitive(order, ring, table):
        return []
    w = order.w_units
    power = weight - 1  # infinity type
    scale = 2**power
    step = L // M

    def eps(e: Elt):
        return table[ring.key(e)] * step  # exponent of zeta_L

    # principal part: sum over alpha of eps(alpha) alpha^{weight-1}, times w
    princ = [CyclotomicInteger.from_int(0, L) for _ in range(nmax + 1)]
    for n in range(1, nmax + 1):
        if gcd(n, ring.nf) != 1:
            continue
        acc = CyclotomicInteger.from_int(0, L)
        for alpha in order.elements_of_norm(n):
            if gcd(order.norm(alpha), ring.nf) != 1:
                continue
            sq = _elt_pow_scaled(order, alpha, power, L)  # 2^power * alpha^power
            acc = acc + _cyc_mono(L, eps(alpha)) * sq
        princ[n] = acc  # equals 2^power * w * a_princ(n)
    forms = []
    if order.h == 1:
        an = princ
        den = scale * w
        forms.append(
            CMForm(abs(D) * cond_norm, weight, _neb_disc(order, ring, table, M, D),
                   D, cond_norm, L, an, den, f"D{D}_f{cond_norm}_M{M}_t{_tag(table)}")
        )
        return forms
    # h = 2: auxiliary non-principal prime q coprime to f, with q^2 = (gamma2)
    aux = _nonprincipal_aux(order, ring)
    if aux is None:
        return []
    (ca, cb, cc_), qnorm, gamma2 = aux
    cring = ResidueRing(order, ca, cb, cc_)
    # xi(q)^2 = eps(gamma2) gamma2^{weight-1}; adjoin its root of unity part
    L2 = lcm(L, 2 * M)
    e_g2 = eps(gamma2) * (L2 // L)
    if e_g2 % 2:
        L2 *= 2
        e_g2 = eps(gamma2) * (L2 // L)
    half = e_g2 // 2
    two_g2_conj = _elt_to_cyc(order, order.conj(gamma2), L).lift(L2)
    for sign in (0, 1):
        root_e = (half + sign * (L2 // 2)) % L2
        # xi(q) = zeta_{L2}^{root_e} * gamma2; non-principal a of norm n are
        # (gamma) q^{-1} for gamma in q with N(gamma) = n * qnorm
        an = []
        den = scale * w
        for n in range(nmax + 1):
            an.append(princ[n].lift(L2) * 1)
        for n in range(1, nmax + 1):
            if gcd(n, ring.nf) != 1:
                continue
            acc = CyclotomicInteger.from_int(0, L2)
            for gamma in order.elements_of_norm(qnorm * n):
                if not cring.contains(gamma):
                    continue
                if gcd(order.norm(gamma), ring.nf) != 1:
                    continue
                sq = _elt_pow_scaled(order, gamma, power, L).lift(L2)
                acc = acc + _cyc_mono(L2, eps(gamma) * (L2 // L)) * sq
            # divide by xi(q): multiply by zeta^{-root_e} * conj(gamma2)/qnorm^2
            acc = acc * _cyc_mono(L2, -root_e) * two_g2_conj
            an[n] = an[n] + _scale_exact(acc, Fraction(1, 2 * qnorm * qnorm))
        forms.append(
            CMForm(abs(D) * cond_norm, weight, _neb_disc(order, ring, table, M, D),
                   D, cond_norm, L2, an, den,
                   f"D{D}_f{cond_norm}_M{M}_s{sign}_t{_tag(table)}")
        )
    return forms


def _tag(table) -> str:
    return "".join(str(v) for _, v in sorted(table.items()))[:16]


def _scale_exact(c: CyclotomicInteger, fr: Fraction) -> CyclotomicInteger:
    coords = [v * fr.numerator for v in c.coords]
    if any(v % fr.denominator for v in coords):
        raise ValueError("non-exact cyclotomic scaling")
    return CyclotomicInteger(c.m, tuple(v // fr.denominator for v in coords))


def _elt_pow_scaled(order: QuadOrder, e: Elt, power: int, L: int) -> CyclotomicInteger:
    """2^power * e^power, exactly (2e is integral over the zeta basis)."""
    two_e = _elt_to_cyc(order, e, L)
    out = CyclotomicInteger.from_int(1, L)
    for _ in range(power):
        out = out * two_e
    return out


def _eps_primitive(order, ring, table) -> bool:
    """eps does not factor through any proper quotient conductor."""
    # for each prime ideal q dividing f, eps must be nontrivial on the kernel
    # of (Z_K/f)* -> (Z_K/(f/q))*; test via all ideal divisors of index prime
    nf = ring.nf
    for qa, qb, qc in _prime_ideal_divisors(order, ring):
        sub = ResidueRing(order, qa, qb, qc)
        nontrivial = False
        for x in range(ring.a):
            for y in range(ring.c):
                e = Elt(x, y)
                if gcd(order.norm(e), nf) != 1:
                    continue
                em1 = Elt(e.x - 1, e.y)
                if sub.contains(em1):  # e = 1 mod f/q
                    if table[ring.key(e)] != 0:
                        nontrivial = True
                        break
            if nontrivial:
                break
        if not nontrivial:
            return False
    return True


def _prime_ideal_divisors(order, ring):
    """HNF triples of f/q for prime ideals q | f (as containing lattices)."""
    out = []
    nf = ring.nf
    for p in range(2, nf + 1):
        if nf % p:
            continue
        target = nf // p
        for a, b, c in ideals_of_norm(order, target):
            cand = ResidueRing(order, a, b, c)
            # f/q contains f: check lattice containment
            if cand.contains(Elt(ring.a, 0)) and cand.contains(Elt(ring.b, ring.c)):
                out.append((a, b, c))
    return out


def _nonprincipal_aux(order, ring):
    """A non-principal prime ideal q coprime to the conductor, plus a
    generator gamma2 of q^2; returns ((hnf of q), N(q), gamma2)."""
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53):
        if ring.nf % q == 0 or abs(order.D) % q == 0 and ring.nf % q == 0:
            continue
        if gcd(q, ring.nf) != 1:
            continue
        if kronecker(order.D, q) == -1:
            continue  # inert: the prime ideal has norm q^2 and is principal
        if order.elements_of_norm(q):
            continue  # norm-q ideals are principal
        cands = ideals_of_norm(order, q)
        if not cands:
            continue
        a, b, c = cands[0]
        # q^2 as an ideal, then a generator among elements of norm q^2
        sq_hnf = ideal_hnf(
            order,
            [
                order.mul(Elt(a, 0), Elt(a, 0)),
                order.mul(Elt(a, 0), Elt(b, c)),
                order.mul(Elt(b, c), Elt(b, c)),
            ],
        )
        sq_ring = ResidueRing(order, *sq_hnf)
        for gamma2 in order.elements_of_norm(q * q):
            if sq_ring.contains(gamma2):
                return (a, b, c), q, gamma2
    return None


def _neb_disc(order, ring, table, M, D) -> int:
    """Identify the nebentypus as a Kronecker discriminant, empirically."""
    level = abs(D) * ring.nf
    L = lcm(M, _zeta_need(order.D))
    step = L // M
    # neb(m) = chi_K(m) * eps(m) for integers m coprime to the level
    cands = [1, -3, -4, 5, -7, -8, 8, 12, -20, -24, 24, 21, 28, 33]
    ok = []
    for cand in cands:
        good = True
        for m in range(2, 60):
            if gcd(m, level) != 1:
                continue
            e = table[ring.key(Elt(m, 0))] * step
            lhs = _cyc_mono(L, e) * kronecker(D, m)
            if lhs != CyclotomicInteger.from_int(kronecker(cand, m), L):
                good = False
                break
        if good:
            ok.append(cand)
    if len(ok) == 1:
        return ok[0]
    return 0  # non-quadratic or unidentified; caller filters
