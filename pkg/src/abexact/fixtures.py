"""Fixture file I/O: one JSON document per cubic field, plus the
product-formula family files.

All integers are arbitrary precision; decimal data (the optional
regulator) stays a string and is parsed exactly into the working real
type by the consumer.  Loading validates the document against the field
parametrization before anything downstream runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cubic import (
    ClassGroupFixture,
    ClassRecord,
    CubicFieldRecord,
    FixtureIntegrityError,
    UnitFixture,
    cubic_conductor_poly,
    make_record,
    verify_class_fixture,
    verify_unit_fixture,
)


@dataclass(frozen=True)
class CubicFixture:
    record: CubicFieldRecord
    unit: UnitFixture
    classgroup: ClassGroupFixture | None


def load_cubic_fixture(path: str | Path, digits: int = 60) -> CubicFixture:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise FixtureIntegrityError(f"cannot read fixture {path}: {err}") from err
    try:
        fld = doc["field"]
        f, a, b = int(fld["f"]), int(fld["a"]), int(fld["b"])
        poly = tuple(int(c) for c in fld["P"])
        units = doc["units"]
        eps = tuple(int(c) for c in units["epsilon"])
        den = int(units.get("epsilon_den", 1))
        reg = units.get("regulator")
        prec = int(units.get("precision", 60))
    except (KeyError, TypeError, ValueError) as err:
        raise FixtureIntegrityError(f"malformed fixture {path}: {err}") from err
    if len(poly) != 4 or poly[3] != 1 or len(eps) != 3 or den < 1:
        raise FixtureIntegrityError("bad polynomial or epsilon shape")
    if (a, b, poly) not in cubic_conductor_poly(f):
        raise FixtureIntegrityError(
            f"(a, b, P) does not parametrize a cyclic cubic of conductor {f}"
        )
    record = make_record(f, a, b, poly, digits=digits)
    unit = UnitFixture(conductor=f, epsilon=eps, den=den, regulator=reg, precision=prec)
    verify_unit_fixture(record, unit)
    cg = None
    if doc.get("classgroup") is not None:
        c = doc["classgroup"]
        try:
            cg = ClassGroupFixture(
                conductor=f,
                cyc=tuple(int(d) for d in c["cyc"]),
                prime=int(c["p"]),
                exponent=int(c["exponent_e"]),
                sigma=int(c.get("sigma", 0)),
                records=tuple(
                    ClassRecord(
                        h=tuple(int(x) for x in r["h"]),
                        sh=tuple(int(x) for x in r["sh"]),
                        auxiliary_prime=int(r["q"]) if r.get("q") else None,
                    )
                    for r in c["records"]
                ),
            )
        except (KeyError, TypeError, ValueError) as err:
            raise FixtureIntegrityError(f"malformed classgroup in {path}: {err}") from err
        verify_class_fixture(cg)
    return CubicFixture(record=record, unit=unit, classgroup=cg)


@dataclass(frozen=True)
class ProductFamily:
    """#M_k for the full subfield lattice of one cyclic field."""

    degree: int
    subfield_orders: dict[int, Fraction]
    expected_components: dict[int, Fraction] | None = None


def load_product_family(path: str | Path) -> ProductFamily:
    try:
        doc = json.loads(Path(path).read_text())
        degree = int(doc["degree"])
        orders = {int(k): Fraction(v) for k, v in doc["subfield_orders"].items()}
        expected = doc.get("expected_components")
        if expected is not None:
            expected = {int(k): Fraction(v) for k, v in expected.items()}
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
        raise FixtureIntegrityError(f"cannot read family fixture {path}: {err}") from err
    return ProductFamily(degree=degree, subfield_orders=orders, expected_components=expected)
