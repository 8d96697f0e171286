import math
import random
from fractions import Fraction

import pytest

from abexact.arith import euler_phi
from abexact.characters import (
    chi_accumulate,
    chi_deconvolution,
    enumerate_characters,
    padic_orbits,
    rational_orbits,
    unit_group_structure,
)


def test_unit_group_structure_examples():
    assert unit_group_structure(1).orders == ()
    assert unit_group_structure(2).orders == ()
    u7 = unit_group_structure(7)
    assert u7.generators == (3,) and u7.orders == (6,)
    u8 = unit_group_structure(8)
    assert u8.generators == (7, 5) and u8.orders == (2, 2)


@pytest.mark.parametrize("m", list(range(1, 80)) + [97, 120, 128, 200])
def test_unit_group_structure_valid(m):
    u = unit_group_structure(m)
    assert math.prod(u.orders, start=1) == euler_phi(m)
    # the orders are exact and the table covers the group
    assert len(u.dlog_table()) == euler_phi(m)
    for g, o in zip(u.generators, u.orders):
        assert pow(g, o, m) == 1
        for q in {2, 3, 5, 7}:
            if o % q == 0:
                assert pow(g, o // q, m) != 1


def test_enumerate_characters_examples():
    orders5 = sorted(c.order for c in enumerate_characters(5))
    assert orders5 == [1, 2, 4, 4]
    only = enumerate_characters(1)
    assert len(only) == 1 and only[0].conductor == 1 and only[0].parity == "even"
    quad4 = [c for c in enumerate_characters(4) if c.order == 2][0]
    assert quad4.conductor == 4 and quad4.parity == "odd"


def test_rational_orbits_examples():
    shapes5 = sorted((o.order, o.orbit_size()) for o in rational_orbits(5))
    assert shapes5 == [(1, 1), (2, 1), (4, 2)]
    shapes7 = sorted((o.order, o.orbit_size()) for o in rational_orbits(7))
    assert shapes7 == [(1, 1), (2, 1), (3, 2), (6, 2)]
    assert len(rational_orbits(1)) == 1


def test_padic_orbit_examples():
    chi3 = [o for o in rational_orbits(7) if o.order == 3][0]
    assert [o.degree for o in padic_orbits(chi3, 7)] == [1, 1]
    chi9 = [o for o in rational_orbits(27) if o.order == 9][0]
    assert [o.degree for o in padic_orbits(chi9, 7)] == [3, 3]
    chi1 = [o for o in rational_orbits(4) if o.order == 1][0]
    assert [o.degree for o in padic_orbits(chi1, 13)] == [1]


@pytest.mark.parametrize("m", list(range(1, 101)) + [121, 144, 163, 200])
def test_partition_counts(m):
    orbits = rational_orbits(m)
    assert sum(euler_phi(o.order) for o in orbits) == euler_phi(m)
    seen = set()
    for o in orbits:
        for c in o.members():
            assert c.conductor == o.conductor and c.order == o.order
            assert c.parity == o.parity
            assert c.exponents not in seen
            seen.add(c.exponents)
    assert len(seen) == euler_phi(m)


@pytest.mark.parametrize("m", [5, 7, 16, 21, 36, 45])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_padic_partition_and_merge(m, p):
    for orbit in rational_orbits(m):
        parts = padic_orbits(orbit, p)
        assert sum(o.degree for o in parts) == euler_phi(orbit.order)
        union = set()
        for o in parts:
            assert not (union & o.multipliers)
            union |= o.multipliers
        g = orbit.order
        assert union == {a for a in range(1, g + 1) if math.gcd(a, g) == 1}


def test_chi_deconvolution_examples():
    assert chi_deconvolution({1: Fraction(5)}) == {1: Fraction(5)}
    flat = chi_deconvolution({d: Fraction(1) for d in (1, 2, 3, 6)})
    assert all(v == 1 for v in flat.values())
    assert chi_deconvolution({1: Fraction(1), 2: Fraction(3)})[2] == 3


def test_chi_deconvolution_errors():
    with pytest.raises(ValueError, match="incomplete"):
        chi_deconvolution({1: Fraction(1), 4: Fraction(2)})


def test_chi_deconvolution_round_trip():
    rng = random.Random(11)
    for g in (2, 6, 12, 24, 36, 48, 60):
        per_chi = {d: Fraction(rng.randrange(1, 50)) for d in _divisors(g)}
        folded = chi_accumulate(per_chi)
        assert chi_deconvolution(folded) == per_chi
        add = {d: rng.randrange(-9, 10) for d in _divisors(g)}
        folded_add = chi_accumulate(add, additive=True)
        assert chi_deconvolution(folded_add, additive=True) == add


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]
