"""Elementary integer arithmetic shared by every module.

Everything here is exact: Python ints, trial-division factoring (the
conductors we touch stay well below 10^8, so sqrt-bounded trial division
is fine) and gmpy2 primality for the larger prime searches.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2


def is_prime(n: int) -> bool:
    return n >= 2 and gmpy2.is_prime(int(n))


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...) with p ascending."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 2 if p % 3 == 2 else 4  # skip multiples of 3
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/mZ)^x; a must be coprime to m."""
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    order = group_exponent_bound = euler_phi(m)
    for p, _ in factorize(group_exponent_bound):
        while order % p == 0 and pow(a, order // p, m) == 1:
            order //= p
    return order


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    """Smallest primitive root modulo q, for q an odd prime power or 2 or 4."""
    if q in (2, 4):
        return q - 1
    fac = factorize(q)
    if len(fac) != 1 or fac[0][0] == 2:
        raise ValueError(f"(Z/{q})^x is not cyclic or q even")
    phi = euler_phi(q)
    qs = [p for p, _ in factorize(phi)]
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, phi // p, q) != 1 for p in qs):
            return g
    raise AssertionError(f"no primitive root found mod {q}")


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); moduli coprime."""
    inv = pow(m1 % m2, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def next_prime_in_class(residue: int, modulus: int, bound: int | None = None) -> int:
    """Smallest prime = residue (mod modulus); bound caps the search."""
    if math.gcd(residue, modulus) != 1:
        raise ValueError("residue not coprime to modulus")
    q = residue % modulus
    if q == 0:
        q = modulus
    while True:
        if q > 1 and gmpy2.is_prime(q):
            return q
        q += modulus
        if bound is not None and q > bound:
            raise RuntimeError(f"no prime = {residue} mod {modulus} below {bound}")
