"""Command-line surface.

Commands: minus, stickelberger, torsion, cubic-enumerate, cubic-verify,
product-check, selftest.  Structured output (--format json) is byte-stable
for identical inputs; every internal verification failure exits non-zero
(1 usage, 2 fixture integrity, 3 internal verification failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import euler_phi, factorize
from .characters import chi_accumulate, chi_deconvolution, rational_orbits
from .cubic import (
    FixtureIntegrityError,
    PrecisionError,
    enumerate_cubic_conductors,
    verify_main_conjecture_fixture,
)
from .fixtures import load_cubic_fixture, load_product_family
from .minus import NonIntegralClassNumber, minus_class_number
from .stickel import (
    PrecisionExhausted,
    ideal_A_generators,
    lambda_K,
    selector_from_orbit,
    stickelberger_element,
    torsion_valuations_for_orbit,
    twist_c,
)

USAGE_ERROR, FIXTURE_ERROR, INTERNAL_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _emit(payload: dict, fmt: str, human_lines) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in human_lines:
            print(line)


def cmd_minus(args) -> int:
    f = args.f
    if f <= 2:
        raise UsageError("minus parts need a conductor above 2")
    primes = tuple(args.p) if args.p else ()
    rows = []
    product = Fraction(1)
    for orbit in rational_orbits(f):
        if not orbit.is_odd:
            continue
        rep = minus_class_number(orbit, primes=primes)
        product *= rep.class_number
        row = {
            "conductor": orbit.conductor,
            "order": orbit.order,
            "alpha": rep.alpha,
            "w": rep.w,
            "product": str(rep.product),
            "class_number": rep.class_number,
        }
        if primes:
            row["per_phi"] = {
                str(p): [
                    {
                        "factor": inv.factor_index,
                        "degree": inv.degree,
                        "m_an": inv.value,
                        "raw": inv.raw_valuation,
                        "exceptional": inv.exceptional,
                    }
                    for inv in rep.per_phi[p]
                ]
                for p in primes
            }
        rows.append(row)
    if not rows:
        raise UsageError(f"no odd characters for conductor {f}")
    payload = {"command": "minus", "f": f, "components": rows, "minus_product": str(product)}
    lines = [f"minus components of Q(mu_{f}):"]
    for row in rows:
        lines.append(
            f"  chi of conductor {row['conductor']}, order {row['order']}: "
            f"#H_chi = 2^{row['alpha']} * {row['w']} * {row['product']} = {row['class_number']}"
        )
        for p, invs in row.get("per_phi", {}).items():
            pat = ", ".join(f"phi{v['factor']}(deg {v['degree']}): {v['m_an']}" for v in invs)
            lines.append(f"    m_an at p={p}: {pat}")
    lines.append(f"  product over X^-: {product}")
    _emit(payload, args.format, lines)
    return 0


def cmd_stickelberger(args) -> int:
    f, c = args.f, args.c
    orbits = [o for o in rational_orbits(f) if o.conductor == f]
    if not orbits:
        raise UsageError(f"{f} is not a conductor")
    full = max(orbits, key=lambda o: o.order)
    if full.order != euler_phi(f):
        raise UsageError(f"(Z/{f})^x is not cyclic; pick a prime-power conductor")
    sel = selector_from_orbit(full)
    stick = stickelberger_element(sel)
    lam = lambda_K(sel)
    gens = ideal_A_generators(sel)
    payload = {
        "command": "stickelberger",
        "f": f,
        "lambda": lam,
        "coefficients": [str(x) for x in stick.element.coeffs],
        "generator_residue": sel.generator,
    }
    lines = [
        f"Stickelberger data for Q(mu_{f}) (sigma = Artin({sel.generator})):",
        "  B_K coefficients on sigma^0..sigma^{g-1}: " + ", ".join(str(x) for x in stick.element.coeffs),
        f"  Lambda_K = {lam}",
        f"  smoothing ideal generators: (sigma - {sel.generator + (f if sel.generator % 2 == 0 else 0)}, {lam})",
    ]
    if c is not None:
        if c % 2 == 0 or c <= 0:
            raise UsageError("the twist needs an odd positive c")
        twisted, half = twist_c(stick, c)
        if twisted.is_zero():
            lines.append(f"  twist c={c}: zero element")
            payload["twist"] = {"c": c, "zero": True}
        else:
            anti = all(
                twisted.coeffs[t] == -twisted.coeffs[(t + sel.order // 2) % sel.order]
                for t in range(sel.order)
            ) if sel.is_imaginary else None
            payload["twist"] = {
                "c": c,
                "coefficients": [str(x) for x in twisted.coeffs],
                "half": [str(x) for x in half.coeffs] if half is not None else None,
                "antisymmetry": anti,
            }
            lines.append(f"  twist c={c}: " + ", ".join(str(x) for x in twisted.coeffs))
            if anti is not None:
                lines.append(f"  antisymmetry under complex conjugation: {'ok' if anti else 'FAILED'}")
    _emit(payload, args.format, lines)
    return 0


def cmd_torsion(args) -> int:
    f, p = args.f, args.p
    reports = []
    for orbit in rational_orbits(f):
        if orbit.order == 1 or orbit.is_odd or orbit.conductor != f:
            continue
        rep = torsion_valuations_for_orbit(orbit, p, level=args.prec_padic, c=args.c)
        reports.append((orbit, rep))
    if not reports:
        raise UsageError(f"no even nontrivial characters of conductor {f}")
    payload = {
        "command": "torsion",
        "f": f,
        "p": p,
        "components": [
            {
                "order": o.order,
                "level": r.level,
                "auxiliary": r.auxiliary,
                "valuations": r.valuations(),
                "total": r.total(),
                "two_adic_weak": r.two_adic_weak,
            }
            for o, r in reports
        ],
    }
    lines = [f"p-ramified torsion valuations at p={p}, conductor {f}:"]
    for o, r in reports:
        lines.append(
            f"  chi of order {o.order}: per-factor {r.valuations()}, total {r.total()} "
            f"(level {r.level}, c={r.auxiliary})"
        )
    _emit(payload, args.format, lines)
    return 0


def cmd_cubic_enumerate(args) -> int:
    lo, hi = args.range
    recs = enumerate_cubic_conductors(lo, hi, digits=args.prec_real or 60)
    payload = {
        "command": "cubic-enumerate",
        "range": [lo, hi],
        "fields": [
            {
                "f": r.conductor,
                "a": r.a,
                "b": r.b,
                "P": list(r.poly),
                "galois_map": [str(c) for c in r.galois_map],
                "frobenius": r.frobenius,
            }
            for r in recs
        ],
    }
    lines = [f"cyclic cubic fields with conductor in [{lo}, {hi}]:"]
    for r in recs:
        lines.append(
            f"  f={r.conductor} (a,b)=({r.a},{r.b}) P={_poly_str(r.poly)} sigma=Artin({r.frobenius})"
        )
    _emit(payload, args.format, lines)
    return 0


def _poly_str(poly) -> str:
    names = ["", "x", "x^2", "x^3"]
    parts = []
    for i in range(3, -1, -1):
        c = poly[i]
        if c == 0:
            continue
        term = names[i] if abs(c) == 1 and i > 0 else f"{abs(c)}{'*' if i else ''}{names[i]}"
        parts.append(("-" if c < 0 else "+") + term)
    out = "".join(parts).lstrip("+")
    return out


def cmd_cubic_verify(args) -> int:
    fixture = load_cubic_fixture(args.fixtures, digits=args.prec_real or 60)
    p = args.p or (fixture.classgroup.prime if fixture.classgroup else None)
    if p is None:
        raise UsageError("unit-only fixture: pass --p")
    report = verify_main_conjecture_fixture(
        fixture.record,
        fixture.unit,
        fixture.classgroup,
        p,
        torsion=not args.no_torsion,
        torsion_level=args.prec_padic,
        digits=args.prec_real,
    )
    rec = fixture.record
    payload = {
        "command": "cubic-verify",
        "f": rec.conductor,
        "p": p,
        "a": rec.a,
        "b": rec.b,
        "P": list(rec.poly),
        "sigma": rec.frobenius,
        "alpha": report.solution.alpha,
        "beta": report.solution.beta,
        "index": report.index,
        "unit_pattern": list(report.unit_pattern),
        "class_ladders": [list(l) for l in report.class_ladders],
        "class_totals": list(report.class_totals()) if fixture.classgroup else None,
        "verdict": report.verdict,
        "torsion_valuations": list(report.torsion_valuations) if report.torsion_valuations else None,
        "torsion_level": report.torsion_level,
        "eisenstein": list(report.eisenstein_labels),
        "digits": report.solution.digits,
    }
    lines = [
        f"P={_poly_str(rec.poly)}  f={rec.conductor}  (a,b)=({rec.a},{rec.b})  sigma=Artin({rec.frobenius})",
        f"(alpha,beta)=({report.solution.raw[0]}, {report.solution.raw[1]}), Index [E_K:F_K]={report.solution.index_float}",
        f"rounded (alpha,beta)=({report.solution.alpha},{report.solution.beta}), norm {report.index}, at {report.solution.digits} digits",
        f"factor labels p1, p2 = {report.eisenstein_labels}",
        f"{report.unit_pattern[0]}  {report.unit_pattern[1]}    p1- and p2-valuations for alpha+j*beta",
    ]
    if fixture.classgroup:
        t = report.class_totals()
        lines.append(f"{t[0]}  {t[1]}    p1- and p2-valuations for the class group")
        lines.append(f"per-factor ladders: {report.class_ladders}")
        lines.append(f"verdict: {report.verdict}")
    if report.torsion_valuations is not None:
        lines.append(
            f"torsion valuations: {list(report.torsion_valuations)} (level {report.torsion_level})"
        )
    if report.w_note:
        lines.append(f"note: {report.w_note}")
    _emit(payload, args.format, lines)
    return 0 if report.verdict in ("MATCH", "UNITS-ONLY", "CONVENTION-SWAP") else INTERNAL_ERROR


def cmd_product_check(args) -> int:
    family = load_product_family(args.fixtures)
    orders = family.subfield_orders
    comps = chi_deconvolution(orders)
    back = chi_accumulate(comps)
    ok = back == {d: Fraction(v) for d, v in orders.items()}
    integral = all(v.denominator == 1 and v > 0 for v in comps.values())
    expected_ok = True
    if family.expected_components is not None:
        expected_ok = comps == family.expected_components
    total = Fraction(1)
    for v in comps.values():
        total *= v
    payload = {
        "command": "product-check",
        "degree": family.degree,
        "per_chi": {str(d): str(v) for d, v in sorted(comps.items())},
        "round_trip": ok,
        "integral": integral,
        "expected_match": expected_ok,
        "full_order": str(total),
    }
    lines = [f"product formula over the degree-{family.degree} lattice:"]
    for d, v in sorted(comps.items()):
        lines.append(f"  chi of order {d}: #M_chi = {v}")
    lines.append(f"  product = {total}, round-trip {'ok' if ok else 'FAILED'}")
    _emit(payload, args.format, lines)
    if not (ok and integral and expected_ok):
        print("product formula check FAILED", file=sys.stderr)
        return INTERNAL_ERROR
    return 0


def cmd_selftest(args) -> int:
    import random

    from .characters import padic_orbits
    from .cyclo import nu_decomposition
    from .padic import build_padic_context

    checks = []
    orb46 = [o for o in rational_orbits(47) if o.order == 46][0]
    checks.append(("f=47 minus component = 139", minus_class_number(orb46).class_number == 139))
    checks.append(("Lambda(Q(mu_47)) = 47", lambda_K(selector_from_orbit(orb46)) == 47))
    for n in (6, 12, 30, 36):
        try:
            nu_decomposition(n)
            checks.append((f"nu certificate n={n}", True))
        except AssertionError:
            checks.append((f"nu certificate n={n}", False))
    rng = random.Random(7)
    for _ in range(6):
        g = rng.randrange(2, 30)
        p = rng.choice([2, 3, 5, 7, 13])
        try:
            build_padic_context(g, p, rng.randrange(1, 4))
            checks.append((f"idempotents g={g} p={p}", True))
        except Exception:
            checks.append((f"idempotents g={g} p={p}", False))
    ctx21 = build_padic_context(21, 7, 3)
    chi21 = [o for o in rational_orbits(43) if o.order == 21][0]
    checks.append(
        ("non-semisimple factor count (g=21, p=7)", ctx21.factor_count() == len(padic_orbits(chi21, 7)))
    )
    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    if failed:
        return INTERNAL_ERROR
    print(f"selftest: {len(checks)} checks passed")
    return 0


class UsageError(ValueError):
    pass


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("range must look like 7..100") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="abexact", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["human", "json"], default="human")
        p.add_argument("--prec-padic", type=int, default=None, help="p-adic working level n")
        p.add_argument("--prec-real", type=int, default=None, help="real precision in digits")

    p = sub.add_parser("minus", help="Bernoulli minus-part class numbers")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--p", type=int, action="append", help="also report per-factor invariants at p")
    common(p)
    p.set_defaults(func=cmd_minus)

    p = sub.add_parser("stickelberger", help="Stickelberger element, twists, annihilator ideal")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--c", type=int, default=None, help="auxiliary twist")
    common(p)
    p.set_defaults(func=cmd_stickelberger)

    p = sub.add_parser("torsion", help="p-ramified torsion valuations")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--c", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("cubic-enumerate", help="cyclic cubic conductors in a range")
    p.add_argument("--range", type=_parse_range, required=True)
    common(p)
    p.set_defaults(func=cmd_cubic_enumerate)

    p = sub.add_parser("cubic-verify", help="verify one cubic fixture end to end")
    p.add_argument("--fixtures", required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--no-torsion", action="store_true")
    common(p)
    p.set_defaults(func=cmd_cubic_verify)

    p = sub.add_parser("product-check", help="divisor-lattice product formula check")
    p.add_argument("--fixtures", required=True)
    common(p)
    p.set_defaults(func=cmd_product_check)

    p = sub.add_parser("selftest", help="run the quick internal battery")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except FixtureIntegrityError as err:
        print(f"fixture integrity error: {err}", file=sys.stderr)
        return FIXTURE_ERROR
    except (AssertionError, ArithmeticError, NonIntegralClassNumber, PrecisionExhausted, PrecisionError) as err:
        print(f"internal verification failure: {err}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
