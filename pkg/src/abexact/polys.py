"""Dense univariate polynomial helpers.

A polynomial is a list of exact coefficients (int or Fraction), lowest
degree first, with no trailing zero except for the zero polynomial [].
These are plain functions rather than a class: every caller knows which
coefficient domain it is working in, and the hot loops stay transparent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Poly = list  # list[int] or list[Fraction], lowest degree first


def trim(p: Sequence) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    """Degree, with the zero polynomial mapped to -1."""
    return len(p) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: Sequence, c) -> Poly:
    if c == 0:
        return []
    return trim([c * a for a in p])


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def mul_many(polys: Sequence[Sequence]) -> Poly:
    out = [1]
    for p in polys:
        out = mul(out, p)
    return out


def divmod_exact(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    """Division with remainder; quotient coefficients must stay exact.

    Works over Z only when q is monic (our cyclotomic divisors always are);
    over Fraction it is plain polynomial division.
    """
    p = list(p)
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    lead = q[-1]
    quot = [0] * max(0, len(p) - len(q) + 1)
    while len(trim(p)) >= len(q):
        p = trim(p)
        shift = len(p) - len(q)
        c = p[-1] / lead if isinstance(p[-1], Fraction) or isinstance(lead, Fraction) else p[-1] // lead
        if c * lead != p[-1]:
            c = Fraction(p[-1], lead)
        quot[shift] = quot[shift] + c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
    return trim(quot), trim(p)


def divides_exactly(p: Sequence, q: Sequence) -> Poly:
    quo, rem = divmod_exact(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


def mod(p: Sequence, q: Sequence) -> Poly:
    return divmod_exact(p, q)[1]


def evaluate(p: Sequence, x):
    acc = 0
    for a in reversed(list(p)):
        acc = acc * x + a
    return acc


def compose(p: Sequence, inner: Sequence) -> Poly:
    """p(inner(x)), exact."""
    acc: Poly = []
    for a in reversed(list(p)):
        acc = add(mul(acc, inner), [a] if a != 0 else [])
    return acc


def substitute_power(p: Sequence, k: int) -> Poly:
    """p(x^k)."""
    if not p:
        return []
    out = [0] * ((len(p) - 1) * k + 1)
    for i, a in enumerate(p):
        out[i * k] = a
    return trim(out)


def to_fractions(p: Sequence) -> Poly:
    return [Fraction(a) for a in p]


def is_integral(p: Sequence) -> bool:
    return all(Fraction(a).denominator == 1 for a in p)


def resultant(p: Sequence, q: Sequence) -> Fraction:
    """res(p, q) over Q via the Euclidean remainder sequence."""
    a = [Fraction(c) for c in trim(p)]
    b = [Fraction(c) for c in trim(q)]
    if not a or not b:
        return Fraction(0)
    res = Fraction(1)
    while True:
        da, db = degree(a), degree(b)
        if db == 0:
            return res * b[0] ** da
        _, r = divmod_exact(a, b)
        if not r:
            return Fraction(0)
        res *= Fraction((-1) ** (da * db)) * b[-1] ** (da - degree(r))
        a, b = b, r


# --- modular variants (coefficients in Z/m, m not necessarily prime) ---


def mod_trim(p: Sequence, m: int) -> Poly:
    p = [a % m for a in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def mod_add(p: Sequence, q: Sequence, m: int) -> Poly:
    return mod_trim(add(p, q), m)


def mod_sub(p: Sequence, q: Sequence, m: int) -> Poly:
    return mod_trim(sub(p, q), m)


def mod_mul(p: Sequence, q: Sequence, m: int) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = (out[i + j] + a * b) % m
    return mod_trim(out, m)


def mod_divmod(p: Sequence, q: Sequence, m: int) -> tuple[Poly, Poly]:
    """Division in (Z/m)[x]; the leading coefficient of q must be invertible."""
    p = [a % m for a in p]
    q = mod_trim(q, m)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(q[-1], -1, m)
    quot = [0] * max(0, len(p) - len(q) + 1)
    p = mod_trim(p, m)
    while len(p) >= len(q):
        shift = len(p) - len(q)
        c = p[-1] * inv_lead % m
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] = (p[shift + i] - c * b) % m
        p = mod_trim(p, m)
    return mod_trim(quot, m), p


def mod_pow(base: Sequence, exp: int, modulus_poly: Sequence, m: int) -> Poly:
    """base^exp in (Z/m)[x] / (modulus_poly)."""
    result = [1]
    base = mod_divmod(base, modulus_poly, m)[1]
    while exp:
        if exp & 1:
            result = mod_divmod(mod_mul(result, base, m), modulus_poly, m)[1]
        base = mod_divmod(mod_mul(base, base, m), modulus_poly, m)[1]
        exp >>= 1
    return result


def mod_gcd(p: Sequence, q: Sequence, m: int) -> Poly:
    """Monic gcd in F_m[x]; m must be prime here."""
    a, b = mod_trim(p, m), mod_trim(q, m)
    while b:
        a, b = b, mod_divmod(a, b, m)[1]
    if a:
        inv = pow(a[-1], -1, m)
        a = [c * inv % m for c in a]
    return a
