"""Generalized Bernoulli numbers and the minus-part class-number pipeline.

The per-orbit class number is 2^alpha * w * N(-B1/2), computed as one
exact field norm; the per-prime analytic invariants are phi-adic
valuations of the same Bernoulli element, factor by factor, with the
cyclotomic-field exceptional cases handled explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import polys
from .arith import euler_phi, factorize
from .characters import PadicCharacter, RationalCharacter, ResidueCharacter, padic_orbits
from .cyclo import CyclotomicElement
from .padic import PadicCyclotomicContext, build_padic_context, phi_valuation


class NonIntegralClassNumber(ArithmeticError):
    """The exact class-number formula failed to produce an integer: a bug."""


def bernoulli_b1(psi: ResidueCharacter) -> CyclotomicElement:
    """B1(psi^{-1}) = (1/f) sum_{a in [1,f[, (a,f)=1} psi^{-1}(a) a in Q(mu_g).

    psi must be nontrivial; it is evaluated through its primitive
    incarnation (values depend on a mod the conductor only).
    """
    if psi.order == 1:
        raise ValueError("B1 of the trivial character is excluded")
    f = psi.conductor
    g = psi.order
    acc = [Fraction(0)] * g
    for a in range(1, f):
        if math.gcd(a, f) != 1:
            continue
        k = psi.value_exponent(_lift_to_modulus(a, f, psi.modulus))
        acc[(-k) % g] += a
    elt = CyclotomicElement.zero(g)
    for k, c in enumerate(acc):
        if c:
            elt = elt + CyclotomicElement.root_power(g, k, c)
    return elt * Fraction(1, f)


def _lift_to_modulus(a: int, f: int, m: int) -> int:
    """Residue mod m that is a mod f and coprime to m (f | m)."""
    if m == f:
        return a
    x = a
    while math.gcd(x, m) != 1:
        x += f
    return x


def primitive_character(psi: ResidueCharacter) -> ResidueCharacter:
    """The primitive character of conductor f inducing psi."""
    from .characters import enumerate_characters

    f = psi.conductor
    if f == psi.modulus:
        return psi
    for cand in enumerate_characters(f):
        if cand.order != psi.order:
            continue
        if all(
            cand.value_exponent(a % f) == psi.value_exponent(a)
            for a in range(1, psi.modulus)
            if math.gcd(a, psi.modulus) == 1
        ):
            return cand
    raise AssertionError("no primitive incarnation found")


def alpha_exponent(order: int) -> int:
    """1 iff the orbit order is a power of two."""
    return 1 if order & (order - 1) == 0 else 0


def w_factor(char_orbit: RationalCharacter) -> int:
    """w = p when K_chi is the full cyclotomic field Q(mu_{p^n}), else 1."""
    f = char_orbit.conductor
    fac = factorize(f)
    if len(fac) == 1 and char_orbit.order == euler_phi(f):
        return fac[0][0]
    return 1


@dataclass(frozen=True)
class MinusClassReport:
    char_orbit: RationalCharacter
    alpha: int
    w: int
    product: Fraction  # prod over psi | chi of (-B1(psi^{-1})/2)
    class_number: int
    per_phi: dict = field(default_factory=dict)  # prime -> list of PhiMinusInvariant


def minus_class_number(char_orbit: RationalCharacter, primes: tuple[int, ...] = ()) -> MinusClassReport:
    """#H_chi = 2^alpha * w * prod(-B1/2) for an odd nontrivial orbit.

    The product is taken as the exact norm of a single Bernoulli element;
    a non-integer result aborts (it would contradict the class formula).
    Pass primes to also compute the per-factor analytic invariants.
    """
    if char_orbit.order == 1:
        raise ValueError("trivial orbit has no minus part")
    if not char_orbit.is_odd:
        raise ValueError("minus class numbers need an odd orbit")
    psi = primitive_character(char_orbit.representative)
    b1 = bernoulli_b1(psi)
    product = (Fraction(-1, 2) ** euler_phi(char_orbit.order)) * b1.norm()
    h = Fraction(2 ** alpha_exponent(char_orbit.order)) * w_factor(char_orbit) * product
    if h.denominator != 1 or h <= 0:
        raise NonIntegralClassNumber(
            f"class formula gave {h} for conductor {char_orbit.conductor}"
        )
    report = MinusClassReport(
        char_orbit=char_orbit,
        alpha=alpha_exponent(char_orbit.order),
        w=w_factor(char_orbit),
        product=product,
        class_number=int(h),
    )
    for p in primes:
        report.per_phi[p] = minus_invariants(char_orbit, p)
    return report


@dataclass(frozen=True)
class PhiMinusInvariant:
    prime: int
    factor_index: int
    degree: int  # orbit size of this phi (= ram_index * residue_degree)
    residue_degree: int
    ram_index: int
    value: int  # m_an, after the exceptional-case rules
    raw_valuation: int  # valuation before the exceptional zeroing / alpha shift
    exceptional: str  # "", "teichmueller", "q4"


def is_full_cyclotomic(char_orbit: RationalCharacter, p: int) -> bool:
    """True iff K_chi = Q(mu_{p^n}) for the given p."""
    f = char_orbit.conductor
    fac = factorize(f)
    return len(fac) == 1 and fac[0][0] == p and char_orbit.order == euler_phi(f)


def match_factor_orbits(
    ctx: PadicCyclotomicContext, orbits: list[PadicCharacter]
) -> dict[int, PadicCharacter]:
    """factor index -> p-adic orbit, matched through residual roots."""
    p = ctx.prime
    out: dict[int, PadicCharacter] = {}
    for i, fac in enumerate(ctx.factors):
        fac_p = polys.mod_trim(list(fac), p)
        hits = []
        for orb in orbits:
            a = orb.seed_multiplier()
            za = polys.mod_pow([0, 1], a, fac_p, p)
            acc: list[int] = []
            for c in reversed(fac_p):
                acc = polys.mod_divmod(
                    polys.mod_add(polys.mod_mul(acc, za, p), [c], p), fac_p, p
                )[1]
            if not acc:
                hits.append(orb)
        if len(hits) != 1:
            raise AssertionError("factor/orbit matching was not unique")
        out[i] = hits[0]
    return out


def minus_invariants(char_orbit: RationalCharacter, p: int) -> list[PhiMinusInvariant]:
    """The analytic minus invariants m_an, one per factor of Phi_g over Z_p.

    Case analysis: outside the full-cyclotomic conductors the invariant is
    the phi-adic valuation of -B1(psi^{-1})/2; for K_chi = Q(mu_{p^n}) the
    component with residual character equal to the mod-p cyclotomic
    character is set to 0, and for K_chi = Q(mu_4) (p = 2) everything is 0.
    """
    if not char_orbit.is_odd:
        raise ValueError("minus invariants need an odd orbit")
    g = char_orbit.order
    psi = primitive_character(char_orbit.representative)
    b1 = bernoulli_b1(psi)
    half = Fraction(-1, 2) * b1
    scaled, denom = half.scaled_integral()
    h = minus_class_number(char_orbit).class_number
    vp_h = 0
    t = h
    while t % p == 0:
        t //= p
        vp_h += 1
    prec = vp_h + _vp(denom, p) + 3
    ctx = build_padic_context(g, p, prec)
    orbits = match_factor_orbits(ctx, padic_orbits(char_orbit, p))
    e = ctx.ramification
    out = []
    q4 = p == 2 and char_orbit.conductor == 4
    cyclotomic_case = p != 2 and is_full_cyclotomic(char_orbit, p)
    for i in range(ctx.factor_count()):
        v = phi_valuation(scaled, ctx, i)
        if v.capped:
            raise AssertionError("precision too low for minus invariant")
        raw = v.value - e * _vp(denom, p)
        exceptional = ""
        value = raw
        if q4:
            exceptional = "q4"
            value = 0
        elif cyclotomic_case and _residual_is_cyclotomic(ctx, i, psi):
            exceptional = "teichmueller"
            value = 0
        out.append(
            PhiMinusInvariant(
                prime=p,
                factor_index=i,
                degree=orbits[i].degree,
                residue_degree=ctx.residue_degree,
                ram_index=e,
                value=value,
                raw_valuation=raw,
                exceptional=exceptional,
            )
        )
    return out


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _residual_is_cyclotomic(ctx: PadicCyclotomicContext, index: int, psi: ResidueCharacter) -> bool:
    """Does psi reduce to the mod-p cyclotomic character at this factor?

    Tested on generators u of (Z/fZ)^x: the residual image of
    psi(sigma_u) = zeta^k must equal u mod p.
    """
    from .padic import _residual_base  # residual irreducible of the factor

    p = ctx.prime
    fac_p = polys.mod_trim(list(ctx.factors[index]), p)
    q0 = _residual_base(list(ctx.factors[index]), p, ctx.ramification)
    for u in psi.group.generators:
        k = psi.value_exponent(u)
        img = polys.mod_pow([0, 1], k, q0, p)
        if img != polys.mod_trim([u], p):
            return False
    return True


def minus_component_consistency(char_orbit: RationalCharacter, p: int) -> bool:
    """val_p(#H_chi) = [p=2] alpha + val_p(w) + sum(f_res * raw valuation).

    Residue-degree weights: val_p of a local norm is f times the valuation,
    so the ramified part of the orbit degree must not be double counted.
    """
    report = minus_class_number(char_orbit)
    invs = minus_invariants(char_orbit, p)
    total = sum(inv.residue_degree * inv.raw_valuation for inv in invs)
    correction = report.alpha if p == 2 else 0
    correction += _vp(report.w, p)
    return total + correction == _vp(report.class_number, p)
