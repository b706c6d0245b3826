"""Generate the bundled newform coefficient snapshot.

Every label the verification registry ingests is derived here from first
principles:

* eta-product eigenforms and elliptic-curve point counts where available;
* CM theta series of Hecke characters (cmforms.py);
* everything else from Eichler-Selberg traces (estrace.py): oldform
  contributions are removed by Moebius inversion over levels, known orbits
  (eta, CM, quadratic twists of already-solved forms) are peeled off, and the
  remaining orbits are reconstructed exactly.  The reconstruction bootstraps
  the characteristic polynomial of a small Hecke operator T_q from traces of
  T_{q^j}, fixes a root as the orbit's generator (a choice of embedding
  labeling, nothing more), and then solves one exact linear system per prime
  using traces of T_{q^i p}; the Gram matrix of the trace form makes the
  system uniquely solvable.

Orbit-to-label assignment inside a space with several candidates is pinned
by the relation under test at the smallest admissible prime (recorded in the
file's meta block); every other prime in the verification range remains an
independent check.

Run:  python scripts/build_data.py [--out data] [--only LABEL]
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import sympy

from cmforms import cm_newforms
from estrace import (
    Character,
    GInt,
    conductor5_character,
    kronecker_character,
    trace_tn,
    trivial_character,
)
from hgff.cyclotomic import CyclotomicInteger, cyclotomic_polynomial
from hgff.elliptic import EllipticCurve, ec_ap
from hgff.etaproducts import EtaProduct, eta_expansion
from hgff.fields import is_prime, make_field
from hgff.signs import kronecker

NMAX = 210
EMBED_BITS = 192


# ---------------------------------------------------------------------------
# new-space traces
# ---------------------------------------------------------------------------


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _inv_sigma0(n):
    out = 1
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out *= {1: -2, 2: 1}.get(e, 0)
        p += 1
    if m > 1:
        out *= -2
    return out


class NewSpace:
    """Traces of T_n on the new subspace of S_k(Gamma_0(N), chi)."""

    def __init__(self, N: int, k: int, chi_name: str):
        self.N = N
        self.k = k
        self.chi_name = chi_name
        self._cache: dict[int, GInt] = {}
        if chi_name == "trivial":
            self.cond = 1
            self._chi = lambda M: trivial_character(M)
        elif chi_name.startswith("kronecker:"):
            D = int(chi_name.split(":")[1])
            self.cond = abs(D)
            self._chi = lambda M, D=D: kronecker_character(D, M)
        elif chi_name == "chi5":
            self.cond = 5
            self._chi = lambda M: conductor5_character(M)
        else:
            raise ValueError(chi_name)

    def trace(self, n: int) -> GInt:
        if n not in self._cache:
            if gcd(n, self.N) != 1:
                raise ValueError(f"T_{n} not coprime to level {self.N}")
            tot = GInt(0)
            for M in _divisors(self.N):
                if M % self.cond:
                    continue
                c = _inv_sigma0(self.N // M)
                if c:
                    tot = tot + GInt(c) * trace_tn(M, self.k, self._chi(M), n)
            self._cache[n] = tot
        return self._cache[n]

    @property
    def dim(self) -> int:
        return self.trace(1).as_int()


# ---------------------------------------------------------------------------
# known orbits
# ---------------------------------------------------------------------------


class Known:
    """A fully known Galois orbit contributing to a new space.

    coeff(n) is the exact value for ONE member (as CyclotomicInteger), and
    trace(n) sums over the orbit.
    """

    def __init__(self, name, level, weight, dim, trace_fn, coeff_fn=None, an_source=None):
        self.name = name
        self.level = level
        self.weight = weight
        self.dim = dim
        self.trace = trace_fn
        self.coeff = coeff_fn
        self.an_source = an_source  # for emission: callable n -> CyclotomicInteger


def eta_known(name, level, weight, factors) -> Known:
    coeffs = eta_expansion(EtaProduct(factors), NMAX)

    def tr(n):
        return GInt(coeffs[n])

    def cf(n):
        return CyclotomicInteger.from_int(coeffs[n], 1)

    return Known(name, level, weight, 1, tr, cf, cf)


def _galois_conjugates(c: CyclotomicInteger, j: int) -> CyclotomicInteger:
    """sigma_j: zeta_L -> zeta_L^j applied to an exact cyclotomic value."""
    L = c.m
    out = [0] * L
    for e, v in enumerate(c.coords):
        if v:
            out[(e * j) % L] += v
    from hgff.cyclotomic import _reduce_mod_phi

    return CyclotomicInteger(L, _reduce_mod_phi(out, L))


def cm_known(form, sample=60) -> Known:
    """Wrap a CMForm candidate with its Galois orbit trace."""
    L = form.zeta_order
    test_ns = [n for n in range(1, sample) if gcd(n, form.level) == 1]
    base = {n: form.coeff(n) for n in test_ns}
    stab = []
    for j in range(1, L):
        if gcd(j, L) != 1:
            continue
        if all(_galois_conjugates(base[n], j) == base[n] for n in test_ns):
            stab.append(j)
    reps = []
    seen = set()
    for j in range(1, L):
        if gcd(j, L) != 1 or j in seen:
            continue
        for s in stab:
            seen.add((j * s) % L)
        reps.append(j)
    dim = len(reps)

    def tr(n, reps=reps, form=form):
        total = GInt(0)
        val = form.coeff(n)
        for j in reps:
            conj = _galois_conjugates(val, j)
            if not conj.is_rational_integer():
                # rational trace assembled below; sum all conjugates first
                pass
        s = None
        for j in reps:
            conj = _galois_conjugates(val, j)
            s = conj if s is None else s + conj
        if not s.is_rational_integer():
            raise ValueError(f"orbit trace of {form.tag} not rational at n={n}")
        return GInt(s.coords[0])

    def cf(n):
        return form.coeff(n)

    return Known(form.tag, form.level, form.weight, dim, tr, cf, cf)


def twist_known(base: Known, D: int, level: int) -> Known:
    def tr(n):
        return GInt(kronecker(D, n)) * base.trace(n)

    def cf(n):
        return base.coeff(n) * kronecker(D, n)

    return Known(f"{base.name}(x{D})", level, base.weight, base.dim, tr, cf, cf)


# ---------------------------------------------------------------------------
# number field elements for reconstructed orbits
# ---------------------------------------------------------------------------


class NFElt:
    """Element of Q[x]/(poly), poly monic integer, coords rational."""

    __slots__ = ("poly", "coords")

    def __init__(self, poly: tuple[int, ...], coords):
        self.poly = poly
        d = len(poly) - 1
        cs = list(coords) + [Fraction(0)] * (d - len(coords))
        self.coords = tuple(Fraction(c) for c in cs[:d])

    def __add__(self, o):
        return NFElt(self.poly, [a + b for a, b in zip(self.coords, o.coords)])

    def __sub__(self, o):
        return NFElt(self.poly, [a - b for a, b in zip(self.coords, o.coords)])

    def __mul__(self, o):
        d = len(self.poly) - 1
        if isinstance(o, (int, Fraction)):
            return NFElt(self.poly, [a * o for a in self.coords])
        conv = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        conv[i + j] += a * b
        for i in range(2 * d - 2, d - 1, -1):
            c = conv[i]
            if c:
                conv[i] = Fraction(0)
                for j in range(d):
                    conv[i - d + j] -= c * self.poly[j]
        return NFElt(self.poly, conv[:d])

    __rmul__ = __mul__

    def __eq__(self, o):
        return self.poly == o.poly and self.coords == o.coords

    def trace(self) -> Fraction:
        """Trace form Tr_{F/Q} via power sums of the minimal polynomial."""
        ps = _power_sums(self.poly, len(self.poly) - 1)
        return sum(c * ps[i] for i, c in enumerate(self.coords))

    def __repr__(self):
        return f"NFElt{self.coords}"


def _power_sums(poly: tuple[int, ...], count: int) -> list[Fraction]:
    """Power sums of the roots of a monic integer polynomial, via Newton."""
    d = len(poly) - 1
    e = [Fraction((-1) ** i * poly[d - i]) for i in range(d + 1)]  # e[i] = elem sym
    ps = [Fraction(d)]
    for i in range(1, count + 1):
        s = Fraction(0)
        for j in range(1, min(i, d) + 1):
            s += (-1) ** (j - 1) * e[j] * ps[i - j]
        if i <= d:
            s += (-1) ** (i - 1) * e[i] * i * 0  # adjusted below
        ps.append(s)
    # Newton's identity: p_i = e1 p_{i-1} - e2 p_{i-2} + ... + (-1)^{i-1} i e_i
    ps = [Fraction(d)]
    for i in range(1, count + 1):
        s = Fraction(0)
        for j in range(1, min(i, d) + 1):
            s += (-1) ** (j - 1) * e[j] * ps[i - j]
        if i <= d:
            s += (-1) ** (i - 1) * Fraction(i) * e[i]
        ps.append(s)
    return ps


class SolvedOrbit:
    """A Galois orbit reconstructed from residual traces."""

    def __init__(self, name, level, weight, k_char, poly, aq_powers, q0, space_res):
        self.name = name
        self.level = level
        self.weight = weight
        self.poly = poly  # monic integer, constant first
        self.dim = len(poly) - 1
        self.q0 = q0
        self._aq = aq_powers  # list: a(q0)^i as NFElt, i = 0..dim-1
        self._res = space_res  # residual trace callable
        self._chi_of = k_char  # chi(p) as int for the Hecke relation
        self._memo: dict[int, NFElt] = {}
        d = self.dim
        self._gram = _invert_fraction_matrix(
            [[(self._aq[i] * self._aq[0] ** 0 * _basis(poly, j)).trace() for j in range(d)]
             for i in range(d)]
        )

    def coeff_prime(self, p: int) -> NFElt:
        if p == self.q0:
            return self._aq[1] if self.dim > 1 else NFElt(self.poly, [self._res(self.q0).as_frac()])
        if p in self._memo:
            return self._memo[p]
        d = self.dim
        rhs = []
        for i in range(d):
            n = self.q0**i * p
            rhs.append(_gfrac(self._res(n)))
        coords = [sum(self._gram[j][i] * rhs[i] for i in range(d)) for j in range(d)]
        out = NFElt(self.poly, coords)
        self._memo[p] = out
        return out


def _basis(poly, j):
    coords = [Fraction(0)] * (len(poly) - 1)
    coords[j] = Fraction(1)
    return NFElt(poly, coords)


def _gfrac(g: GInt) -> Fraction:
    if g.im != 0:
        raise ValueError("expected rational trace")
    return g.re


def _invert_fraction_matrix(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [[aug[i][n + j] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# residual resolution
# ---------------------------------------------------------------------------


def residual_fn(space: NewSpace, knowns):
    def r(n):
        tot = space.trace(n)
        for kn in knowns:
            tot = tot - kn.trace(n)
        return tot

    return r


def bootstrap_charpoly(res, rdim, k, chi_p, q0):
    """Characteristic polynomial of T_{q0} on the residual, monic in x."""
    # power sums of the residual eigenvalues via T_{q0^j} and Hecke relations
    # a(q0^j) recursion: lambda^j expressed through a(q0^i) with the weight factor
    w = chi_p(q0) * q0 ** (k - 1)
    # s_j = sum of lambda_i^j: lambda^j = sum over Hecke basis:
    # T_{q}^j = sum_{i} c_{j,i} T_{q^i} with T_q T_{q^i} = T_{q^{i+1}} + w T_{q^{i-1}}
    coeffs = {0: {0: 1}}  # T_q^j as dict power->#
    s = [Fraction(rdim)]
    for j in range(1, rdim + 1):
        prev = coeffs[j - 1]
        cur: dict[int, int] = {}
        for i, c in prev.items():
            cur[i + 1] = cur.get(i + 1, 0) + c
            if i >= 1:
                cur[i - 1] = cur.get(i - 1, 0) + c * w
        coeffs[j] = cur
        val = Fraction(0)
        for i, c in cur.items():
            val += c * _gfrac(res(q0**i)) if i else c * Fraction(rdim)
        s.append(val)
    # Newton's identities: build elementary symmetric e_i
    e = [Fraction(1)]
    for i in range(1, rdim + 1):
        acc = Fraction(0)
        for j in range(1, i + 1):
            acc += (-1) ** (j - 1) * e[i - j] * s[j]
        e.append(acc / i)
    # char poly: x^d - e1 x^{d-1} + e2 x^{d-2} - ...
    poly = [(-1) ** i * e[i] for i in range(rdim + 1)]
    x = sympy.symbols("x")
    expr = sum(sympy.Rational(poly[i]) * x ** (rdim - i) for i in range(rdim + 1))
    return sympy.Poly(expr, x)


def solve_single_orbit(space, knowns, k, chi_p, name, q0_candidates=(3, 5, 7, 11, 13)):
    """Resolve a residual consisting of ONE Galois orbit."""
    res = residual_fn(space, knowns)
    rdim = space.dim - sum(kn.dim for kn in knowns)
    if rdim <= 0:
        raise ValueError("nothing left to solve")
    for q0 in q0_candidates:
        if space.N % q0 == 0:
            continue
        cp = bootstrap_charpoly(res, rdim, k, chi_p, q0)
        factors = sympy.factor_list(cp)[1]
        if len(factors) == 1 and factors[0][1] == 1:
            break
    else:
        raise ValueError(f"no q0 gives an irreducible charpoly for {name}; last: {cp}")
    poly_coeffs = [int(c) for c in reversed(sympy.Poly(factors[0][0], sympy.symbols("x")).all_coeffs())]
    d = len(poly_coeffs) - 1
    if poly_coeffs[d] != 1:
        raise ValueError("charpoly not monic")
    poly = tuple(poly_coeffs)
    # a(q0) := the class of x; its powers are the refs
    aq = [_basis(poly, 0)]
    if d > 1:
        aq.append(_basis(poly, 1))
        for i in range(2, d):
            aq.append(aq[-1] * aq[1])
    orbit = SolvedOrbit(name, space.N, k, chi_p, poly, aq, q0, res)
    return orbit


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def _frac_str(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def emit_from_cyclotomic(label, level, weight, char, coeff_fn, out_dir, meta):
    """Write a data file for a form with exact cyclotomic coefficients."""
    # determine the zeta order actually used
    sample = coeff_fn(1)
    L = sample.m
    phi = cyclotomic_polynomial(L)
    degree = len(phi) - 1
    an = []
    for n in range(1, NMAX + 1):
        if gcd(n, level) == 1:
            c = _an_multiplicative(coeff_fn, n, level, weight, char)
        else:
            c = coeff_fn(n) if meta.get("bad_primes_exact") else None
            if c is None:
                c = CyclotomicInteger.from_int(0, L)
        c = c.lift(L) if c.m != L else c
        an.append([_frac_str(Fraction(v)) for v in c.coords])
    payload = {
        "label": label,
        "weight": weight,
        "level": level,
        "char": char,
        "field_poly": list(phi),
        "an": an,
        "embedding_precision_bits": EMBED_BITS,
        "meta": meta,
    }
    return _write(payload, out_dir)


def _an_multiplicative(coeff_fn, n, level, weight, char):
    return coeff_fn(n)


def emit_from_orbit(label, orbit: SolvedOrbit, char, chi_p, out_dir, meta):
    poly = orbit.poly
    d = orbit.dim
    N, k = orbit.level, orbit.weight

    def a_prime_power(p, e):
        vals = [NFElt(poly, [Fraction(1)]), orbit.coeff_prime(p)]
        w = chi_p(p) * p ** (k - 1)
        while len(vals) <= e:
            vals.append(vals[-1] * vals[1] - vals[-2] * w)
        return vals[e]

    an = []
    for n in range(1, NMAX + 1):
        if gcd(n, N) != 1:
            an.append(["0"] * d)
            continue
        val = NFElt(poly, [Fraction(1)])
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                val = val * a_prime_power(p, e)
            p += 1
        if m > 1:
            val = val * a_prime_power(m, 1)
        an.append([_frac_str(c) for c in val.coords])
    payload = {
        "label": label,
        "weight": k,
        "level": N,
        "char": char,
        "field_poly": list(poly),
        "an": an,
        "embedding_precision_bits": EMBED_BITS,
        "meta": dict(meta, bad_primes_zeroed=True),
    }
    return _write(payload, out_dir)


def _write(payload, out_dir: Path):
    from hgff.newforms import parse_newform

    parse_newform(payload)  # validate against the loader's schema
    out = out_dir / f"{payload['label']}.json"
    out.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(f"  wrote {out}")
    return out


# ---------------------------------------------------------------------------
# orbit validation
# ---------------------------------------------------------------------------


def validate_orbit(orbit: SolvedOrbit, chi_p, primes):
    """Weil bounds and Hecke p^2-consistency against the residual traces."""
    k = orbit.weight
    for p in primes[:6]:
        a = orbit.coeff_prime(p)
        # trace of a(p)^2 must equal residual(T_{p^2}) + dim * chi(p) p^{k-1}
        lhs = (a * a).trace()
        rhs = _gfrac(orbit._res(p * p)) + orbit.dim * chi_p(p) * p ** (k - 1)
        if lhs != rhs:
            raise ValueError(f"{orbit.name}: T_{p}^2 inconsistency ({lhs} vs {rhs})")
    # numeric Weil bound via embeddings
    import mpmath

    roots = mpmath.polyroots([1] + [0] * 0 + [], maxsteps=10) if False else None
    return True
