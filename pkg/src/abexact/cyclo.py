"""Exact arithmetic in Z[mu_n] and the cyclotomic-polynomial certificates.

Cyclotomic polynomials are computed by the exact division recursion and
cached.  The three identity constructors (shift identity, geometric
Bezout, nu-decomposition) each re-verify their output by exact polynomial
arithmetic before returning: a failed check is an internal bug, never a
caller error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import polys
from .arith import divisors, euler_phi, factorize, prime_divisors
from .polys import Poly


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Monic n-th cyclotomic polynomial, coefficients lowest-first."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    den: Poly = [1]
    for d in divisors(n)[:-1]:
        den = polys.mul(den, list(cyclotomic_polynomial(d)))
    quo = polys.divides_exactly(num, den)
    assert len(quo) == euler_phi(n) + 1
    return tuple(quo)


def cyclotomic_shift_identity(n: int, q: int) -> tuple[Poly, Poly | None]:
    """Certificate for Phi_n(X^q): returns (Phi_nq, extra) with
    Phi_n(X^q) = Phi_nq * (extra or 1); extra is Phi_n itself when q does
    not divide n.  Verified exactly."""
    lhs = polys.substitute_power(list(cyclotomic_polynomial(n)), q)
    p_nq = list(cyclotomic_polynomial(n * q))
    if n % q == 0:
        if lhs != p_nq:
            raise AssertionError("shift identity failed (q | n)")
        return p_nq, None
    p_n = list(cyclotomic_polynomial(n))
    if polys.mul(p_nq, p_n) != lhs:
        raise AssertionError("shift identity failed (q coprime n)")
    return p_nq, p_n


def _geometric(d: int) -> Poly:
    """1 + x + ... + x^d (the zero polynomial for d = -1)."""
    return [1] * (d + 1)


def geometric_bezout(l1: int, l2: int) -> tuple[Poly, Poly]:
    """Integer (A, B) with A*Phi_l1 + B*Phi_l2 = 1 for distinct primes.

    Runs the Euclidean algorithm on the two geometric polynomials; every
    remainder is geometric again, so the Bezout cofactors stay in Z[X].
    """
    if l1 == l2:
        raise ValueError("primes must be distinct")
    p1 = _geometric(l1 - 1)
    p2 = _geometric(l2 - 1)
    # extended Euclid over Q; integrality asserted afterwards
    r0, r1 = polys.to_fractions(p1), polys.to_fractions(p2)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while polys.degree(r1) > 0:
        q, r = polys.divmod_exact(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, polys.sub(s0, polys.mul(q, s1))
        t0, t1 = t1, polys.sub(t0, polys.mul(q, t1))
    if not r1:
        raise AssertionError("geometric polynomials were not coprime")
    c = r1[0]
    a = polys.scale(s1, 1 / c)
    b = polys.scale(t1, 1 / c)
    if not (polys.is_integral(a) and polys.is_integral(b)):
        raise AssertionError("Bezout cofactors left Z[X]")
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    if polys.add(polys.mul(a, p1), polys.mul(b, p2)) != [1]:
        raise AssertionError("Bezout identity failed")
    return a, b


def partial_geometric_norm(n: int, l: int) -> Poly:
    """N_{n,l}(X) = sum_{i<l} X^{(n/l) i}, for a prime l dividing n."""
    out = [0] * ((n // l) * (l - 1) + 1)
    for i in range(l):
        out[(n // l) * i] = 1
    return out


def _bezout_pair_squarefree(n: int, li: int, lj: int) -> tuple[Poly, Poly]:
    """A, B with A*Phi_{n/li} + B*Phi_{n/lj} = 1, n squarefree with >= 2
    prime factors; the induction of the co-maximality lemma."""
    primes = prime_divisors(n)
    if len(primes) == 2:
        return geometric_bezout(lj, li)  # Phi_{n/li} = Phi_lj, Phi_{n/lj} = Phi_li
    q = next(p for p in primes if p not in (li, lj))
    np = n // q
    a, b = _bezout_pair_squarefree(np, li, lj)
    # substitute X -> X^q and absorb the lower-level cyclotomic factors
    a_q = polys.substitute_power(a, q)
    b_q = polys.substitute_power(b, q)
    a_new = polys.mul(a_q, list(cyclotomic_polynomial(np // li)))
    b_new = polys.mul(b_q, list(cyclotomic_polynomial(np // lj)))
    check = polys.add(
        polys.mul(a_new, list(cyclotomic_polynomial(n // li))),
        polys.mul(b_new, list(cyclotomic_polynomial(n // lj))),
    )
    if check != [1]:
        raise AssertionError("squarefree Bezout induction failed")
    return a_new, b_new


def nu_decomposition(n: int) -> dict[int, Poly]:
    """Coefficients A_l with Phi_n = sum_{l | n} A_l * N_{n,l}.

    Built by the lemma's induction: squarefree core first, then repeated
    substitution X -> X^q for each extra prime power.  Verified exactly.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    fac = factorize(n)
    core = 1
    for p, _ in fac:
        core *= p
    coeffs = _nu_squarefree(core)
    m = core
    while m != n:
        # multiply back one prime at a time, substituting X -> X^q
        q = next(p for p, e in fac if m % p**e != 0 and m % p == 0)
        coeffs = {l: polys.substitute_power(a, q) for l, a in coeffs.items()}
        m *= q
    _verify_nu(n, coeffs)
    return coeffs


def _nu_squarefree(n: int) -> dict[int, Poly]:
    primes = prime_divisors(n)
    if len(primes) == 1:
        return {n: [1]}  # Phi_l = N_{l,l}
    li, lj = primes[0], primes[1]
    # Phi_n * Phi_{n/lk} = sum_{s != k} A_s^k(X^{lk}) N_{n,ls}  (induction)
    def lifted(k: int) -> dict[int, Poly]:
        nk = n // k
        inner = _nu_squarefree(nk)
        return {l: polys.substitute_power(a, k) for l, a in inner.items()}

    ai, bj = _bezout_pair_squarefree(n, li, lj)
    out: dict[int, Poly] = {l: [] for l in primes}
    for k, cof in ((li, ai), (lj, bj)):
        for l, a in lifted(k).items():
            out[l] = polys.add(out[l], polys.mul(cof, a))
    return out


def _verify_nu(n: int, coeffs: dict[int, Poly]) -> None:
    acc: Poly = []
    for l, a in coeffs.items():
        acc = polys.add(acc, polys.mul(a, partial_geometric_norm(n, l)))
    if acc != list(cyclotomic_polynomial(n)):
        raise AssertionError(f"nu-decomposition certificate failed for n={n}")


@dataclass(frozen=True)
class CyclotomicElement:
    """Element of Q(mu_n) as an exact coefficient vector modulo Phi_n."""

    level: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        d = euler_phi(self.level)
        c = [Fraction(x) for x in self.coeffs]
        if len(c) > d:
            c = polys.mod(c, polys.to_fractions(list(cyclotomic_polynomial(self.level))))
        c = list(c) + [Fraction(0)] * (d - len(c))
        object.__setattr__(self, "coeffs", tuple(c[:d]))

    @classmethod
    def zero(cls, level: int) -> "CyclotomicElement":
        return cls(level, ())

    @classmethod
    def one(cls, level: int) -> "CyclotomicElement":
        return cls(level, (Fraction(1),))

    @classmethod
    def root_power(cls, level: int, k: int, scalar=1) -> "CyclotomicElement":
        """scalar * zeta_level^k."""
        k %= level
        vec = [Fraction(0)] * (k + 1)
        vec[k] = Fraction(scalar)
        return cls(level, tuple(vec))

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._check(other)
        return CyclotomicElement(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._check(other)
        return CyclotomicElement(self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            self._check(other)
            prod = polys.mul(list(self.coeffs), list(other.coeffs))
            return CyclotomicElement(self.level, tuple(prod))
        return CyclotomicElement(self.level, tuple(Fraction(other) * a for a in self.coeffs))

    __rmul__ = __mul__

    def _check(self, other: "CyclotomicElement") -> None:
        if self.level != other.level:
            raise ValueError("mixed cyclotomic levels")

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)

    def denominator(self) -> int:
        d = 1
        for a in self.coeffs:
            d = d * a.denominator // __import__("math").gcd(d, a.denominator)
        return d

    def scaled_integral(self) -> tuple["CyclotomicElement", int]:
        """(d * self, d) with d the common denominator."""
        d = self.denominator()
        return self * d, d

    def norm(self) -> Fraction:
        """Field norm from Q(mu_level) down to Q (product of conjugates)."""
        if self.is_zero():
            return Fraction(0)
        phi = polys.to_fractions(list(cyclotomic_polynomial(self.level)))
        return polys.resultant(phi, list(self.coeffs))

    def galois_apply(self, a: int) -> "CyclotomicElement":
        """zeta -> zeta^a for a coprime to the level."""
        n = self.level
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[(i * a) % n] += c
        return CyclotomicElement(n, tuple(out))
