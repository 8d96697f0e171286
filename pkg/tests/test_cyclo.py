from fractions import Fraction

import pytest

from abexact import polys
from abexact.arith import euler_phi, factorize, is_prime
from abexact.cyclo import (
    CyclotomicElement,
    cyclotomic_polynomial,
    cyclotomic_shift_identity,
    geometric_bezout,
    nu_decomposition,
)


def test_cyclotomic_examples():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("n", range(1, 121))
def test_degree_and_value_at_one(n):
    phi = cyclotomic_polynomial(n)
    assert len(phi) == euler_phi(n) + 1
    if n > 1:
        value = sum(phi)
        fac = factorize(n)
        assert value == (fac[0][0] if len(fac) == 1 else 1)


def test_shift_identity_cases():
    full, extra = cyclotomic_shift_identity(3, 3)
    assert extra is None and tuple(full) == cyclotomic_polynomial(9)
    full, extra = cyclotomic_shift_identity(2, 3)
    assert tuple(full) == cyclotomic_polynomial(6)
    assert tuple(extra) == cyclotomic_polynomial(2)
    full, extra = cyclotomic_shift_identity(1, 2)
    assert tuple(full) == cyclotomic_polynomial(2) and tuple(extra) == cyclotomic_polynomial(1)


def test_bezout_examples():
    a, b = geometric_bezout(3, 2)
    assert a == [1] and b == [0, -1]
    a, b = geometric_bezout(5, 2)
    assert a == [1]  # constant side, Phi_5(-1) = 1
    a12, b12 = geometric_bezout(2, 3)
    assert polys.add(
        polys.mul(a12, [1, 1]), polys.mul(b12, [1, 1, 1])
    ) == [1]


def test_nu_examples():
    assert nu_decomposition(5) == {5: [1]}
    assert nu_decomposition(6) == {2: [0, -1], 3: [1]}
    assert nu_decomposition(12) == {2: [0, 0, -1], 3: [1]}


def test_cyclotomic_element_arithmetic():
    x = CyclotomicElement.root_power(5, 1)
    acc = CyclotomicElement.one(5)
    for _ in range(5):
        acc = acc * x
    assert acc == acc  # x^5 reduced
    total = CyclotomicElement.zero(5)
    for k in range(5):
        total = total + CyclotomicElement.root_power(5, k)
    assert total.is_zero()  # 1 + zeta + ... + zeta^4 = 0
    assert CyclotomicElement(3, (Fraction(-3), Fraction(-2))).norm() == 7
    assert CyclotomicElement(1, (Fraction(5),)).norm() == 5


def test_galois_apply_norm_invariance():
    elt = CyclotomicElement(7, (1, 2, 0, -1, 3, 1))
    for a in (2, 3, 5):
        assert elt.galois_apply(a).norm() == elt.norm()
