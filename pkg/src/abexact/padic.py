"""The ring Z[x]/(Phi_g, p^n): lifted local factors, idempotents, valuations.

The factor list of Phi_g mod p^n is produced one factor per p-adic orbit
of the faithful character of order g.  Construction is deterministic (no
randomized equal-degree splitting): the orbit of roots of unity in F_{p^d}
is expanded directly, grouped powers cover the ramified part, and the
pairwise-coprime system is Hensel-lifted.  Labels follow the ascending
constant-term-lift convention, which fixes every downstream p1/p2 naming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import polys
from .arith import euler_phi, factorize, is_prime, multiplicative_order, prime_divisors
from .cyclo import CyclotomicElement, cyclotomic_polynomial
from .polys import Poly


class InseparableSplitError(ValueError):
    """A requested split crosses the ramified part of Phi_g mod p."""


# --- deterministic arithmetic in F_{p^d} (elements: int-coeff polys mod h) ---


@lru_cache(maxsize=None)
def _irreducible_poly(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree d over F_p."""
    if d == 1:
        return (0, 1)
    for tail in _tuples(p, d):
        h = list(tail) + [1]
        if _is_irreducible(h, p, d):
            return tuple(h)
    raise AssertionError("no irreducible polynomial found")


def _tuples(p: int, d: int):
    total = p**d
    for idx in range(total):
        vec = []
        t = idx
        for _ in range(d):
            vec.append(t % p)
            t //= p
        yield tuple(vec)


def _is_irreducible(h: Poly, p: int, d: int) -> bool:
    x = [0, 1]
    xp = polys.mod_pow(x, p**d, h, p)
    if polys.mod_sub(xp, x, p):
        return False
    for q in prime_divisors(d):
        xq = polys.mod_pow(x, p ** (d // q), h, p)
        if polys.mod_gcd(polys.mod_sub(xq, x, p), h, p) != [1]:
            return False
    return True


class _Fq:
    """Tiny F_{p^d} wrapper, just enough for root-of-unity orbit expansion."""

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.h = list(_irreducible_poly(p, d))

    def mul(self, a: Poly, b: Poly) -> Poly:
        return polys.mod_divmod(polys.mod_mul(a, b, self.p), self.h, self.p)[1]

    def pow(self, a: Poly, k: int) -> Poly:
        return polys.mod_pow(a, k, self.h, self.p)

    def root_of_unity(self, n: int) -> Poly:
        """Element of multiplicative order exactly n, deterministically."""
        size = self.p**self.d - 1
        if size % n:
            raise ValueError(f"no mu_{n} in F_{self.p}^{self.d}")
        qs = prime_divisors(n)
        for idx in range(1, self.p**self.d):
            cand = []
            t = idx
            for _ in range(self.d):
                cand.append(t % self.p)
                t //= self.p
            cand = polys.mod_trim(cand, self.p)
            z = self.pow(cand, size // n)
            if z == [1]:
                continue
            if all(self.pow(z, n // q) != [1] for q in qs):
                return z
        raise AssertionError("no root of unity found")


def _orbit_factor(field: _Fq, zeta: Poly, exponents: list[int]) -> Poly:
    """prod (x - zeta^a) over the exponent orbit; result must land in F_p."""
    p = field.p
    acc = [[1]]  # polynomial in x with F_q coefficients, lowest first
    for a in exponents:
        root = field.pow(zeta, a)
        new = [[0]] * (len(acc) + 1)
        for i, c in enumerate(acc):
            new[i + 1] = polys.mod_add(new[i + 1], c, p)
            new[i] = polys.mod_sub(new[i], field.mul(c, root), p)
        acc = new
    out = []
    for c in acc:
        if polys.degree(c) > 0:
            raise AssertionError("orbit factor has coefficients outside F_p")
        out.append(c[0] if c else 0)
    return polys.mod_trim(out, p)


# --- Hensel machinery for a pairwise-coprime monic system ---


def _bezout_fp(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    """(u, v) with u*a + v*b = 1 in F_p[x]; raises if not coprime."""
    r0, r1 = polys.mod_trim(a, p), polys.mod_trim(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = polys.mod_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, polys.mod_sub(s0, polys.mod_mul(q, s1, p), p)
        t0, t1 = t1, polys.mod_sub(t0, polys.mod_mul(q, t1, p), p)
    if polys.degree(r0) != 0:
        raise InseparableSplitError("inseparable split: factors share a root mod p")
    inv = pow(r0[0], -1, p)
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def _hensel_pair(f: Poly, g: Poly, h: Poly, p: int, n: int) -> tuple[Poly, Poly]:
    """Lift monic f = g*h (mod p) to mod p^n, g and h coprime mod p."""
    u, v = _bezout_fp(g, h, p)
    for k in range(1, n):
        pk = p**k
        m = p ** (k + 1)
        diff = polys.sub(f, polys.mul(g, h))
        delta = polys.mod_trim([(c // pk) % p for c in diff], p)
        if not delta:
            continue
        a = polys.mod_divmod(polys.mod_mul(v, delta, p), g, p)[1]
        b_num = polys.mod_sub(delta, polys.mod_mul(a, h, p), p)
        b, rem = polys.mod_divmod(b_num, g, p)
        if rem:
            raise AssertionError("Hensel correction not divisible")
        g = polys.mod_trim(polys.add(g, polys.scale(a, pk)), m)
        h = polys.mod_trim(polys.add(h, polys.scale(b, pk)), m)
    return g, h


def _hensel_system(f: Poly, factors_mod_p: list[Poly], p: int, n: int) -> list[Poly]:
    if len(factors_mod_p) == 1:
        return [polys.mod_trim(f, p**n)]
    g = factors_mod_p[0]
    rest = [1]
    for fac in factors_mod_p[1:]:
        rest = polys.mod_mul(rest, fac, p)
    g_lift, h_lift = _hensel_pair(f, g, rest, p, n)
    return [g_lift] + _hensel_system(h_lift, factors_mod_p[1:], p, n)


# --- the public context ---


@dataclass(frozen=True)
class PadicCyclotomicContext:
    """Z[x]/(Phi_g, p^n) with its factor list and orthogonal idempotents."""

    group_order: int
    prime: int
    precision: int
    factors: tuple[tuple[int, ...], ...]
    idempotents: tuple[tuple[int, ...], ...]
    ramification: int  # e = phi(p-part of g)
    residue_degree: int  # d = order of p modulo the prime-to-p part of g

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def phi_poly(self) -> Poly:
        return list(cyclotomic_polynomial(self.group_order))

    def reduce(self, vec: Poly) -> Poly:
        return polys.mod_divmod(vec, self.phi_poly(), self.modulus)[1]

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(polys.mod_mul(a, b, self.modulus))

    def factor_count(self) -> int:
        return len(self.factors)


def _orbit_decomposition(g: int, p: int) -> tuple[int, int, list[list[int]]]:
    """(g0, e, cosets): prime-to-p part, ramification, <p>-cosets in (Z/g0)^x."""
    g0 = g
    s = 0
    while g0 % p == 0:
        g0 //= p
        s += 1
    e = euler_phi(p**s)
    if g0 == 1:
        return 1, e, [[1]]
    d = multiplicative_order(p, g0)
    cosets: dict[int, list[int]] = {}
    for a in range(1, g0):
        if math.gcd(a, g0) != 1:
            continue
        best = cur = a
        while True:
            cur = cur * p % g0
            if cur == a:
                break
            best = min(best, cur)
        cosets.setdefault(best, [])
    for key in cosets:
        orbit = [key]
        cur = key * p % g0
        while cur != key:
            orbit.append(cur)
            cur = cur * p % g0
        cosets[key] = orbit
    assert all(len(o) == d for o in cosets.values())
    return g0, e, [cosets[k] for k in sorted(cosets)]


def build_padic_context(g: int, p: int, n: int) -> PadicCyclotomicContext:
    """Factor Phi_g mod p^n into one monic factor per p-adic orbit and
    assemble the exact orthogonal idempotent system."""
    if g < 1 or n < 1:
        raise ValueError("need g >= 1 and precision >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    pn = p**n
    phi_g = polys.mod_trim(list(cyclotomic_polynomial(g)), pn)
    g0, e, cosets = _orbit_decomposition(g, p)
    d = multiplicative_order(p, g0) if g0 > 1 else 1

    if g == 1:
        factors = [phi_g]
    else:
        field = _Fq(p, d)
        zeta = field.root_of_unity(g0) if g0 > 1 else [1]
        base = []
        for coset in cosets:
            fac = _orbit_factor(field, zeta, coset) if g0 > 1 else [1]
            if g0 == 1:
                fac = polys.mod_trim(list(cyclotomic_polynomial(g)), p)
                base.append(fac)
                continue
            if e > 1:
                acc = [1]
                for _ in range(e):
                    acc = polys.mod_mul(acc, fac, p)
                fac = acc
            base.append(fac)
        check = [1]
        for fac in base:
            check = polys.mod_mul(check, fac, p)
        if check != polys.mod_trim(phi_g, p):
            raise AssertionError("mod-p factor product mismatch")
        factors = _hensel_system(phi_g, base, p, n) if len(base) > 1 else [phi_g]

    # label order must not depend on the precision (valuation patterns are
    # compared across levels), so sort by the mod-p reduction, which is the
    # same for every lift of the same factor; ties are impossible since the
    # reductions are pairwise coprime
    factors = sorted(factors, key=lambda fac: tuple(c % p for c in fac))
    idems = _idempotents(phi_g, factors, p, n)
    ctx = PadicCyclotomicContext(
        group_order=g,
        prime=p,
        precision=n,
        factors=tuple(tuple(f) for f in factors),
        idempotents=tuple(tuple(i) for i in idems),
        ramification=e,
        residue_degree=d,
    )
    _verify_context(ctx)
    return ctx


def _inverse_mod_factor(q: Poly, fac: Poly, p: int, n: int) -> Poly:
    """q^{-1} modulo (fac, p^n) by Newton lifting from the mod-p inverse."""
    _, v = _bezout_fp(fac, q, p)  # v*q = 1 mod (fac, p)
    inv = v
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        m = p**prec
        t = polys.mod_divmod(polys.mod_mul(q, inv, m), fac, m)[1]
        two_minus = polys.mod_sub([2], t, m)
        inv = polys.mod_divmod(polys.mod_mul(inv, two_minus, m), fac, m)[1]
    return inv


def _idempotents(phi_g: Poly, factors: list[Poly], p: int, n: int) -> list[Poly]:
    pn = p**n
    if len(factors) == 1:
        return [[1]]
    out = []
    for i, fac in enumerate(factors):
        q = [1]
        for j, other in enumerate(factors):
            if j != i:
                q = polys.mod_mul(q, other, pn)
        lam = _inverse_mod_factor(q, fac, p, n)
        e_i = polys.mod_divmod(polys.mod_mul(lam, q, pn), phi_g, pn)[1]
        out.append(e_i)
    return out


def _verify_context(ctx: PadicCyclotomicContext) -> None:
    pn = ctx.modulus
    prod = [1]
    for f in ctx.factors:
        prod = polys.mod_mul(prod, list(f), pn)
    if polys.mod_trim(prod, pn) != polys.mod_trim(ctx.phi_poly(), pn):
        raise AssertionError("factor product != Phi_g mod p^n")
    total = []
    for i, e_i in enumerate(ctx.idempotents):
        total = polys.mod_add(total, list(e_i), pn)
        sq = ctx.mul(list(e_i), list(e_i))
        if sq != polys.mod_trim(list(e_i), pn):
            raise AssertionError("idempotent not idempotent")
        for j, e_j in enumerate(ctx.idempotents):
            if j != i and ctx.mul(list(e_i), list(e_j)):
                raise AssertionError("idempotents not orthogonal")
        for j, fac in enumerate(ctx.factors):
            rem = polys.mod_divmod(list(e_i), list(fac), pn)[1]
            if j == i:
                if rem != [1]:
                    raise AssertionError("idempotent != 1 mod own factor")
            elif rem:
                raise AssertionError("idempotent != 0 mod other factor")
    if polys.mod_trim(total, pn) != [1]:
        raise AssertionError("idempotents do not sum to 1")


# --- phi-adic valuation of integral cyclotomic elements ---


@dataclass(frozen=True)
class PhiValuation:
    value: int
    capped: bool  # True means "at least value" at this precision

    def __int__(self) -> int:
        return self.value


def phi_valuation(x: CyclotomicElement, ctx: PadicCyclotomicContext, index: int) -> PhiValuation:
    """p-adic valuation of integral x at the prime attached to factor index.

    Normalized so the uniformizer has valuation 1; val(p) = e.  Returns the
    cap n*e (flagged) when x vanishes to full working precision.
    """
    if x.level != ctx.group_order:
        raise ValueError("element level does not match context")
    if not x.is_integral():
        raise ValueError("phi_valuation needs an integral element")
    p, n, e = ctx.prime, ctx.precision, ctx.ramification
    fac = list(ctx.factors[index])
    cap = n * e
    vec = [int(c) % ctx.modulus for c in x.coeffs]
    vec = polys.mod_divmod(vec, fac, ctx.modulus)[1]
    if not vec:
        return PhiValuation(cap, True)
    # residual factor of the ramified part (fac mod p = q0^e)
    q0 = _residual_base(fac, p, e)
    val = 0
    level = n
    while True:
        vbar = polys.mod_trim(vec, p)
        if vbar:
            j = 0
            while j < e:
                quo, rem = polys.mod_divmod(vbar, q0, p)
                if rem:
                    break
                vbar = quo
                j += 1
                if not vbar:
                    break
            return PhiValuation(val + j, False)
        level -= 1
        val += e
        if level == 0 or val >= cap:
            return PhiValuation(cap, True)
        vec = [c // p for c in vec]


@lru_cache(maxsize=None)
def _residual_base_cached(fac: tuple[int, ...], p: int, e: int) -> tuple[int, ...]:
    fbar = polys.mod_trim(list(fac), p)
    if e == 1:
        return tuple(fbar)
    # e-th root of fac mod p: recover by gcd with the derivative chain
    deg0 = polys.degree(fbar) // e
    # fbar = q0^e with q0 irreducible: q0 = fbar / gcd(fbar, fbar')
    deriv = polys.mod_trim([c * i % p for i, c in enumerate(fbar)][1:], p)
    gcd = polys.mod_gcd(fbar, deriv, p)
    q0, rem = polys.mod_divmod(fbar, gcd, p)
    if rem or polys.degree(q0) != deg0:
        # p | e can defeat the derivative trick; fall back to direct root search
        q0 = _eth_root_poly(fbar, p, e, deg0)
    return tuple(q0)


def _residual_base(fac: Poly, p: int, e: int) -> Poly:
    return list(_residual_base_cached(tuple(fac), p, e))


def _eth_root_poly(fbar: Poly, p: int, e: int, deg0: int) -> Poly:
    for tail in _tuples(p, deg0):
        cand = list(tail) + [1]
        acc = [1]
        for _ in range(e):
            acc = polys.mod_mul(acc, cand, p)
        if acc == fbar:
            return cand
    raise AssertionError("no e-th root of the residual factor")


# --- Eisenstein integers Z[j], j^2 + j + 1 = 0 ---


@dataclass(frozen=True)
class EisensteinInt:
    """alpha + beta*j with j^2 + j + 1 = 0."""

    alpha: int
    beta: int

    def norm(self) -> int:
        return self.alpha**2 - self.alpha * self.beta + self.beta**2

    def conjugate(self) -> "EisensteinInt":
        # j -> j^2 = -1 - j
        return EisensteinInt(self.alpha - self.beta, -self.beta)

    def __mul__(self, other: "EisensteinInt") -> "EisensteinInt":
        a, b, c, d = self.alpha, self.beta, other.alpha, other.beta
        # (a + bj)(c + dj) = ac - bd + (ad + bc - bd) j
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    def associates(self) -> list["EisensteinInt"]:
        unit_j = EisensteinInt(0, 1)
        out = [self]
        cur = self
        for _ in range(2):
            cur = cur * unit_j
            out.append(cur)
        return out + [EisensteinInt(-z.alpha, -z.beta) for z in out]

    def to_cyclotomic(self) -> CyclotomicElement:
        return CyclotomicElement(3, (self.alpha, self.beta))

    def is_zero(self) -> bool:
        return self.alpha == 0 and self.beta == 0

    def __str__(self) -> str:
        return f"{self.alpha}{self.beta:+d}j"


def eisenstein_factor(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two primes of Z[j] above p = 1 mod 3, ordered to match the
    factor labels of build_padic_context(3, p, .): factor i has root r_i,
    and pi_i is the smallest-beta generator of (p, j - r_i)."""
    if p % 3 != 1 or not is_prime(p):
        raise ValueError(f"{p} is not a prime split in Z[j]")
    ctx = build_padic_context(3, p, 1)
    roots = [(-f[0]) % p for f in ctx.factors]  # factor x - r stored as (-r, 1)
    return tuple(_eisenstein_prime_for_root(p, r) for r in roots)  # type: ignore[return-value]


def _eisenstein_prime_for_root(p: int, root: int) -> EisensteinInt:
    """Norm-p generator of (p, j - root), smallest beta >= 1 then by alpha."""
    beta = 1
    while beta * beta * 3 <= 4 * p:
        alpha0 = (-root * beta) % p
        for alpha in (alpha0, alpha0 - p):
            cand = EisensteinInt(alpha, beta)
            if cand.norm() == p:
                return cand
        beta += 1
    raise AssertionError(f"no norm-{p} generator found")


def eisenstein_for_factor(ctx: PadicCyclotomicContext, index: int) -> EisensteinInt:
    """Prime of Z[j] matching factor `index` of a level-3 context."""
    if ctx.group_order != 3:
        raise ValueError("Eisenstein labels only exist at level 3")
    root = (-ctx.factors[index][0]) % ctx.prime
    return _eisenstein_prime_for_root(ctx.prime, root)
