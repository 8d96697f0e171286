"""Characters of (Z/mZ)^x and their rational and p-adic conjugacy orbits.

A character is stored by its exponent vector on a fixed generating set of
(Z/mZ)^x; its value at a residue is kept as the exponent k with
psi(a) = zeta_g^k (g = order of psi).  No complex numbers anywhere.

Everything is immutable after construction.  The only shared mutable state
is the per-group discrete-log table, built lazily on first use; build the
structure eagerly (``unit_group_structure(m).dlog_table``) before fanning
out to worker threads if that matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import (
    crt_pair,
    divisors,
    euler_phi,
    factorize,
    moebius,
    primitive_root,
)


@dataclass(frozen=True)
class UnitGroupStructure:
    """(Z/mZ)^x as a product of cyclic groups on explicit generators."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    def __post_init__(self):
        if math.prod(self.orders, start=1) != euler_phi(self.modulus):
            raise ValueError("generator orders do not multiply to phi(m)")

    @property
    def exponent_lcm(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    def dlog_table(self) -> dict[int, tuple[int, ...]]:
        """residue -> exponent vector; built once, then cached."""
        cached = _DLOG_CACHE.get(self.modulus)
        if cached is not None:
            return cached
        m = self.modulus
        table = {1 % m: (0,) * len(self.generators)}
        for i, (g, order) in enumerate(zip(self.generators, self.orders)):
            new = {}
            for res, vec in table.items():
                acc = res
                for k in range(1, order):
                    acc = acc * g % m
                    v = list(vec)
                    v[i] = k
                    new[acc] = tuple(v)
            table.update(new)
        if len(table) != euler_phi(m):
            raise AssertionError("generators do not generate (Z/mZ)^x")
        _DLOG_CACHE[self.modulus] = table
        return table

    def dlog(self, a: int) -> tuple[int, ...]:
        a = a % self.modulus
        try:
            return self.dlog_table()[a]
        except KeyError:
            raise ValueError(f"{a} not invertible mod {self.modulus}") from None


_DLOG_CACHE: dict[int, dict[int, tuple[int, ...]]] = {}


@lru_cache(maxsize=None)
def unit_group_structure(m: int) -> UnitGroupStructure:
    """Deterministic generators of (Z/mZ)^x: 2-part first (-1 then 5 for
    8 | m), then the smallest primitive root of each odd prime power,
    each CRT-lifted to be 1 modulo the complementary factor."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m <= 2:
        return UnitGroupStructure(m, (), ())
    gens: list[int] = []
    orders: list[int] = []
    fac = factorize(m)
    for q, e in fac:
        qe = q**e
        rest = m // qe
        if q == 2:
            if e == 1:
                continue
            if e == 2:
                local = [(3, 2)]
            else:
                local = [(qe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(primitive_root(qe), euler_phi(qe))]
        for g, order in local:
            gens.append(crt_pair(g, qe, 1, rest) if rest > 1 else g)
            orders.append(order)
    return UnitGroupStructure(m, tuple(gens), tuple(orders))


def _tuple_order(exponents: tuple[int, ...], orders: tuple[int, ...]) -> int:
    return math.lcm(*(o // math.gcd(e, o) for e, o in zip(exponents, orders)), 1)


@dataclass(frozen=True)
class ResidueCharacter:
    """A degree-1 character psi of (Z/mZ)^x given by generator exponents."""

    group: UnitGroupStructure
    exponents: tuple[int, ...]
    order: int = field(init=False)
    conductor: int = field(init=False)

    def __post_init__(self):
        exps = tuple(e % o for e, o in zip(self.exponents, self.group.orders))
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "order", _tuple_order(exps, self.group.orders))
        object.__setattr__(self, "conductor", self._conductor())

    @property
    def modulus(self) -> int:
        return self.group.modulus

    def value_exponent(self, a: int) -> int:
        """k with psi(a) = zeta_order^k."""
        vec = self.group.dlog(a)
        g = self.order
        k = 0
        for x, e, o in zip(vec, self.exponents, self.group.orders):
            k += x * e * g // o
        return k % g

    def is_trivial_at(self, a: int) -> bool:
        return self.value_exponent(a) == 0

    @property
    def parity(self) -> str:
        if self.modulus <= 2:
            return "even"
        return "even" if self.is_trivial_at(self.modulus - 1) else "odd"

    @property
    def is_odd(self) -> bool:
        return self.parity == "odd"

    def power(self, a: int) -> "ResidueCharacter":
        return ResidueCharacter(self.group, tuple(e * a for e in self.exponents))

    def _conductor(self) -> int:
        m = self.modulus
        if m <= 2:
            return 1
        for f in divisors(m):
            if f == 2:
                continue  # no primitive character mod 2
            if all(
                self.is_trivial_at(x)
                for x in range(1 + f, m, f)
                if math.gcd(x, m) == 1
            ):
                return f
        return m


def enumerate_characters(m: int) -> list[ResidueCharacter]:
    """All phi(m) characters of (Z/mZ)^x, exponent-lexicographic order."""
    group = unit_group_structure(m)
    chars = [ResidueCharacter(group, ())]
    for vec in _exponent_vectors(group.orders):
        if any(vec):
            chars.append(ResidueCharacter(group, vec))
    return chars


def _exponent_vectors(orders: tuple[int, ...]):
    if not orders:
        yield ()
        return
    for head in range(orders[0]):
        for tail in _exponent_vectors(orders[1:]):
            yield (head,) + tail


@dataclass(frozen=True)
class RationalCharacter:
    """Galois orbit of a ResidueCharacter under psi -> psi^a, gcd(a, g)=1."""

    representative: ResidueCharacter
    orbit_exponents: frozenset[tuple[int, ...]]

    @property
    def order(self) -> int:
        return self.representative.order

    @property
    def conductor(self) -> int:
        return self.representative.conductor

    @property
    def parity(self) -> str:
        return self.representative.parity

    @property
    def is_odd(self) -> bool:
        return self.representative.is_odd

    @property
    def modulus(self) -> int:
        return self.representative.modulus

    def members(self) -> list[ResidueCharacter]:
        group = self.representative.group
        return [ResidueCharacter(group, e) for e in sorted(self.orbit_exponents)]

    def orbit_size(self) -> int:
        return len(self.orbit_exponents)


def rational_orbit_of(char: ResidueCharacter) -> RationalCharacter:
    g = char.order
    seen = {}
    for a in range(1, g + 1):
        if math.gcd(a, g) != 1:
            continue
        conj = char.power(a)
        seen[conj.exponents] = conj
    rep = seen[min(seen)]
    return RationalCharacter(rep, frozenset(seen))


def rational_orbits(m: int) -> list[RationalCharacter]:
    """Partition of all characters mod m into rational conjugacy orbits.

    Deterministic order: by orbit representative's exponent tuple."""
    remaining = {c.exponents: c for c in enumerate_characters(m)}
    orbits = []
    while remaining:
        char = remaining[min(remaining)]
        orb = rational_orbit_of(char)
        for e in orb.orbit_exponents:
            remaining.pop(e, None)
        orbits.append(orb)
    return orbits


@dataclass(frozen=True)
class PadicCharacter:
    """Orbit of psi under conjugation over Q_p, inside a rational orbit.

    multipliers holds the exponents a (acting as psi_rep^a) that make up
    this orbit; for p coprime to the order these are a coset of <p> in
    (Z/gZ)^x, and in general a coset of the decomposition subgroup
    {a : a = p^k mod g0}, g0 the prime-to-p part of g.
    """

    parent: RationalCharacter
    prime: int
    multipliers: frozenset[int]

    @property
    def degree(self) -> int:
        return len(self.multipliers)

    @property
    def parity(self) -> str:
        return self.parent.parity

    @property
    def is_odd(self) -> bool:
        return self.parent.is_odd

    def seed_multiplier(self) -> int:
        return min(self.multipliers)

    def members(self) -> list[ResidueCharacter]:
        rep = self.parent.representative
        return [rep.power(a) for a in sorted(self.multipliers)]


def padic_orbits(char_orbit: RationalCharacter, p: int) -> list[PadicCharacter]:
    """Partition the rational orbit of chi into p-adic orbits.

    Two multipliers a, b are conjugate over Q_p iff a = b * p^k modulo the
    prime-to-p part of g (the p-part is inertia, hence free); for p
    coprime to g this is the usual closure under a -> p*a mod g.
    """
    g = char_orbit.order
    g0 = g
    while g0 % p == 0:
        g0 //= p

    def coset_key(b: int) -> int:
        # canonical representative of b<p> in (Z/g0)^x; the p-part is free
        if g0 == 1:
            return 0
        best = cur = b % g0
        while True:
            cur = cur * p % g0
            if cur == b % g0:
                return best
            best = min(best, cur)

    classes: dict[int, set[int]] = {}
    for b in range(1, g + 1):
        if math.gcd(b, g) == 1:
            classes.setdefault(coset_key(b), set()).add(b)
    out = [
        PadicCharacter(char_orbit, p, frozenset(orbit))
        for _, orbit in sorted(classes.items())
    ]
    if sum(o.degree for o in out) != euler_phi(g):
        raise AssertionError("p-adic orbits do not partition the rational orbit")
    return out


def chi_deconvolution(values: dict[int, Fraction | int], additive: bool = False) -> dict:
    """Invert divisor-lattice products over a cyclic group.

    values[d] is the product (sum, if additive) of the per-character
    contributions A_chi over all chi of order dividing d; the keys must be
    the full divisor lattice of g := max key.  Returns {d: A_chi(order d)}
    by Moebius inversion; re-accumulating reproduces the input exactly.
    """
    if not values:
        raise ValueError("empty divisor lattice")
    g = max(values)
    lattice = divisors(g)
    if set(values) != set(lattice):
        missing = sorted(set(lattice) - set(values))
        raise ValueError(f"incomplete divisor lattice, missing {missing}")
    out = {}
    for d in lattice:
        if additive:
            acc = 0
            for e in divisors(d):
                acc += moebius(d // e) * values[e]
        else:
            acc = Fraction(1)
            for e in divisors(d):
                mu = moebius(d // e)
                if mu == 1:
                    acc *= Fraction(values[e])
                elif mu == -1:
                    acc /= Fraction(values[e])
        out[d] = acc
    return out


def chi_accumulate(per_chi: dict[int, Fraction | int], additive: bool = False) -> dict:
    """Forward map: per-order values -> divisor-lattice products."""
    g = max(per_chi)
    out = {}
    for d in divisors(g):
        if additive:
            out[d] = sum(per_chi[e] for e in divisors(d))
        else:
            acc = Fraction(1)
            for e in divisors(d):
                acc *= Fraction(per_chi[e])
            out[d] = acc
    return out
