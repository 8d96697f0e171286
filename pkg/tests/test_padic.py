import random

import pytest

from abexact.characters import padic_orbits, rational_orbits
from abexact.cyclo import CyclotomicElement
from abexact.padic import (
    EisensteinInt,
    build_padic_context,
    eisenstein_factor,
    eisenstein_for_factor,
    phi_valuation,
)


def test_context_g3_p7_exact():
    ctx = build_padic_context(3, 7, 1)
    assert set(ctx.factors) == {(3, 1), (5, 1)}  # x - 4 and x - 2 mod 7
    ctx2 = build_padic_context(3, 7, 2)
    assert set(ctx2.factors) == {(19, 1), (31, 1)}  # x - 30 and x - 18 mod 49
    # the idempotent paired with the factor x - 30 is 45x + 23
    by_factor = dict(zip(ctx2.factors, ctx2.idempotents))
    assert by_factor[(19, 1)] == (23, 45)


def test_context_trivial_cases():
    ctx = build_padic_context(1, 5, 3)
    assert ctx.factor_count() == 1 and ctx.idempotents == ((1,),)
    ctx2 = build_padic_context(2, 2, 3)
    assert ctx2.factor_count() == 1


def test_non_semisimple_21_7():
    ctx = build_padic_context(21, 7, 3)
    assert ctx.factor_count() == 2
    assert all(len(f) - 1 == 6 for f in ctx.factors)
    chi = [o for o in rational_orbits(43) if o.order == 21][0]
    assert len(padic_orbits(chi, 7)) == 2


def test_random_contexts_idempotent_laws():
    # construction self-verifies: orthogonality, squares, sum, factor product
    rng = random.Random(20240901)
    seen = 0
    while seen < 50:
        g = rng.randrange(1, 41)
        p = rng.choice([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
        n = rng.randrange(1, 5)
        build_padic_context(g, p, n)
        seen += 1
    build_padic_context(21, 7, 3)


@pytest.mark.parametrize("g,p", [(5, 3), (8, 3), (12, 5), (21, 7), (9, 3)])
def test_factor_count_matches_orbits(g, p):
    ctx = build_padic_context(g, p, 2)
    for m in range(3, 400):
        cands = [o for o in rational_orbits(m) if o.order == g]
        if cands:
            assert ctx.factor_count() == len(padic_orbits(cands[0], p))
            return
    raise AssertionError("no character of the right order found")


def test_phi_valuation_examples():
    ctx = build_padic_context(3, 7, 3)
    x = CyclotomicElement(3, (-3, -2))
    vals = sorted(phi_valuation(x, ctx, i).value for i in range(2))
    assert vals == [0, 1]
    one = CyclotomicElement.one(3)
    assert [phi_valuation(one, ctx, i).value for i in range(2)] == [0, 0]
    seven = CyclotomicElement(3, (7,))
    assert [phi_valuation(seven, ctx, i).value for i in range(2)] == [1, 1]


def test_phi_valuation_additive_and_cap():
    ctx = build_padic_context(3, 13, 3)
    x = CyclotomicElement(3, (-3, 1))  # norm 13
    y = CyclotomicElement(3, (4, 1))
    for i in range(2):
        vx = phi_valuation(x, ctx, i).value
        vy = phi_valuation(y, ctx, i).value
        vxy = phi_valuation(x * y, ctx, i).value
        assert vxy == vx + vy
    capped = phi_valuation(CyclotomicElement(3, (13**3,)), ctx, 0)
    assert capped.capped and capped.value == 3  # n * e with e = 1


def test_phi_valuation_ramified():
    # g = 4, p = 2: e = 2, single factor; val(2) = 2, val(1 + i) = 1
    ctx = build_padic_context(4, 2, 4)
    assert ctx.ramification == 2 and ctx.factor_count() == 1
    two = CyclotomicElement(4, (2,))
    assert phi_valuation(two, ctx, 0).value == 2
    one_plus_i = CyclotomicElement(4, (1, 1))
    assert phi_valuation(one_plus_i, ctx, 0).value == 1


def test_eisenstein_factors():
    for p, expected in ((7, {"3+1j", "-2+1j"}), (13, {"-3+1j", "4+1j"}),
                        (19, {"5+2j", "-3+2j"}), (31, {"-5+1j", "6+1j"})):
        pair = eisenstein_factor(p)
        assert {str(z) for z in pair} == expected
        assert all(z.norm() == p for z in pair)
        prod = pair[0] * pair[1]
        assert prod.norm() == p * p
    with pytest.raises(ValueError):
        eisenstein_factor(3)
    with pytest.raises(ValueError):
        eisenstein_factor(11)


def test_eisenstein_label_consistency():
    ctx = build_padic_context(3, 7, 2)
    for i in range(2):
        pi = eisenstein_for_factor(ctx, i)
        v = phi_valuation(pi.to_cyclotomic(), ctx, i)
        assert v.value == 1  # its own factor
        other = phi_valuation(pi.to_cyclotomic(), ctx, 1 - i)
        assert other.value == 0
