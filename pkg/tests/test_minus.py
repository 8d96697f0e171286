from fractions import Fraction

import pytest

from abexact.characters import enumerate_characters, rational_orbits
from abexact.minus import (
    NonIntegralClassNumber,
    bernoulli_b1,
    minus_class_number,
    minus_component_consistency,
    minus_invariants,
)


def _orbit(f, order):
    return [o for o in rational_orbits(f) if o.order == order][0]


def test_b1_examples():
    quad4 = [c for c in enumerate_characters(4) if c.order == 2][0]
    assert bernoulli_b1(quad4).coeffs == (Fraction(-1, 2),)
    quad3 = [c for c in enumerate_characters(3) if c.order == 2][0]
    assert bernoulli_b1(quad3).coeffs == (Fraction(-1, 3),)
    with pytest.raises(ValueError):
        bernoulli_b1([c for c in enumerate_characters(5) if c.order == 1][0])


def test_minus_class_numbers_small_cyclotomic():
    assert minus_class_number(_orbit(3, 2)).class_number == 1
    assert minus_class_number(_orbit(4, 2)).class_number == 1
    assert minus_class_number(_orbit(5, 4)).class_number == 1
    rep5 = minus_class_number(_orbit(5, 4))
    assert (rep5.alpha, rep5.w, rep5.product) == (1, 5, Fraction(1, 10))


def test_minus_conductor_47():
    rep = minus_class_number(_orbit(47, 46))
    assert rep.class_number == 139
    assert rep.alpha == 0 and rep.w == 47


def test_minus_conductor_23():
    quad = minus_class_number(_orbit(23, 2))
    assert quad.class_number == 3
    full = minus_class_number(_orbit(23, 22))
    assert full.class_number == 1
    total = 1
    for o in rational_orbits(23):
        if o.is_odd:
            total *= minus_class_number(o).class_number
    assert total == 3


def test_rejects_even_and_trivial():
    with pytest.raises(ValueError):
        minus_class_number(_orbit(5, 2))  # even quadratic
    with pytest.raises(ValueError):
        minus_class_number(_orbit(5, 1))


def test_m_an_examples():
    # Q(mu_4) at p=2: the exceptional zero
    invs = minus_invariants(_orbit(4, 2), 2)
    assert len(invs) == 1 and invs[0].value == 0 and invs[0].exceptional == "q4"
    # f=47, p=139: one factor carries valuation 1
    invs = minus_invariants(_orbit(47, 46), 139)
    assert sorted(i.value for i in invs)[-1] == 1
    assert sum(i.degree * i.value for i in invs) == 1
    # class number prime to p: all zero
    invs = minus_invariants(_orbit(23, 22), 5)
    assert all(i.value == 0 for i in invs)


def test_teichmueller_exception():
    invs = minus_invariants(_orbit(9, 6), 3)
    assert any(i.exceptional == "teichmueller" and i.value == 0 for i in invs)


def test_conjugation_invariance_of_product():
    orbit = _orbit(13, 12)
    base = minus_class_number(orbit).product
    for member in orbit.members():
        prod = (Fraction(-1, 2) ** 4) * bernoulli_b1(member).norm()  # phi(12) = 4
        assert prod == base


@pytest.mark.parametrize("f", range(3, 61))
def test_component_consistency(f):
    for orbit in rational_orbits(f):
        if not orbit.is_odd or orbit.conductor != f:
            continue
        for p in (2, 3, 5, 7):
            assert minus_component_consistency(orbit, p), (f, orbit.order, p)


def test_integrality_enforced_up_to_120():
    for f in range(3, 121):
        for orbit in rational_orbits(f):
            if orbit.is_odd and orbit.conductor == f:
                assert minus_class_number(orbit).class_number >= 1
