import math
from fractions import Fraction

import pytest

from abexact.cubic import (
    ClassGroupFixture,
    ClassRecord,
    FixtureIntegrityError,
    class_phi_structure,
    cubic_conductor_poly,
    cubic_selector,
    enumerate_cubic_conductors,
    make_record,
    orient_records,
    recover_galois_map,
    unit_index_and_valuations,
    verify_class_fixture,
)
from abexact.padic import EisensteinInt, build_padic_context


def test_enumeration_examples():
    recs = enumerate_cubic_conductors(7, 7)
    assert len(recs) == 1 and recs[0].poly == (-1, -2, 1, 1)
    recs9 = enumerate_cubic_conductors(9, 9)
    assert recs9[0].poly == (1, -3, 0, 1)
    assert cubic_conductor_poly(313) == [(35, 1, (371, -104, 1, 1))]


def test_enumeration_range_shape():
    recs = enumerate_cubic_conductors(7, 70)
    fs = [r.conductor for r in recs]
    # 63 = 9 * 7 carries two distinct cubic fields
    assert fs == [7, 9, 13, 19, 31, 37, 43, 61, 63, 63, 67]
    for r in recs:
        disc = r.discriminant
        root = math.isqrt(disc)
        assert root * root == disc


def test_two_fields_at_composite_conductor():
    recs = enumerate_cubic_conductors(1261, 1261)
    assert len(recs) == 2  # 13 * 97 carries two cubic fields
    assert {r.poly for r in recs} == {
        (-2989, -420, 1, 1),
        (-1728, -420, 1, 1),
    }


def test_galois_map_examples():
    assert recover_galois_map((1, -3, 0, 1)) == (Fraction(-2), Fraction(0), Fraction(1))
    assert recover_galois_map((-1, -2, 1, 1)) == (Fraction(-2), Fraction(0), Fraction(1))


def test_frobenius_consistency():
    rec = make_record(313, 35, 1, (371, -104, 1, 1))
    sel = cubic_selector(rec)
    q = rec.frobenius
    assert sel.class_of(q) == 1
    assert sel.class_of(pow(q, 3, 313)) == 0  # sigma^3 = 1 on K


def test_selector_kernel_size():
    rec = make_record(313, 35, 1, (371, -104, 1, 1))
    sel = cubic_selector(rec)
    counts = [(sel.class_table == t).sum() for t in range(3)]
    assert counts == [104, 104, 104]


def test_class_fixture_integrity_negative():
    fix = ClassGroupFixture(
        conductor=313, cyc=(7,), prime=7, exponent=1,
        records=(ClassRecord((1,), (0,), 5),), sigma=4,
    )
    with pytest.raises(FixtureIntegrityError):
        verify_class_fixture(fix)  # sigma sends a generator to the identity


def test_rank1_class_structure_f7351():
    ctx = build_padic_context(3, 7, 4)
    fix = ClassGroupFixture(
        conductor=7351, cyc=(49,), prime=7, exponent=2,
        records=(ClassRecord((48,), (19,), 11),), sigma=4,
    )
    dec = class_phi_structure(fix, ctx)
    assert sorted(dec.totals()) == [0, 2]
    assert (2,) in dec.ladders


def test_rank2_class_structure_f10267():
    ctx = build_padic_context(3, 7, 3)
    fix = ClassGroupFixture(
        conductor=10267, cyc=(7, 7), prime=7, exponent=1,
        records=(ClassRecord((6, 0), (0, 6), 13), ClassRecord((0, 5), (2, 2), 43)), sigma=2,
    )
    dec = class_phi_structure(fix, ctx)
    assert dec.totals() == (1, 1)
    assert dec.ladders == ((1,), (1,))


def test_rank3_class_structure_f14376321():
    ctx = build_padic_context(3, 7, 3)
    fix = ClassGroupFixture(
        conductor=14376321, cyc=(21, 7, 7), prime=7, exponent=1,
        records=(
            ClassRecord((9, 0, 0), (3, 5, 0), 467),
            ClassRecord((0, 6, 0), (18, 6, 0), 773),
            ClassRecord((0, 0, 5), (9, 4, 3), 1871),
        ),
        sigma=5,
    )
    rec = make_record(14376321, -7554, 128, (4022175142, -4792107, 0, 1))
    sel = cubic_selector(rec)
    dec = class_phi_structure(orient_records(fix, sel), ctx)
    assert sorted(dec.totals()) == [1, 2]
    assert sorted(map(tuple, dec.ladders)) == [(1,), (1, 1)]


def test_orient_records_identity_when_sigma_matches():
    rec = make_record(10267, -1, 39, (-1521, -3422, 1, 1))
    sel = cubic_selector(rec)
    fix = ClassGroupFixture(
        conductor=10267, cyc=(7, 7), prime=7, exponent=1,
        records=(ClassRecord((6, 0), (0, 6), 13),), sigma=2,
    )
    oriented = orient_records(fix, sel)
    if sel.class_of(2) == 1:
        assert oriented is fix
    else:
        assert oriented.records[0].sh == ((-6 - 0) % 7, (0 - 6) % 7)


def test_unit_index_and_valuations():
    index, dec = unit_index_and_valuations(EisensteinInt(-3, -2), 7)
    assert index == 7 and sorted(dec.totals()) == [0, 1]
    index, dec = unit_index_and_valuations(EisensteinInt(5, 8), 7)
    assert index == 49 and sorted(dec.totals()) == [0, 2]
    index, dec = unit_index_and_valuations(EisensteinInt(1, 0), 7)
    assert index == 1 and dec.totals() == (0, 0)
    with pytest.raises(ValueError):
        unit_index_and_valuations(EisensteinInt(0, 0), 7)
