"""Stickelberger elements, annihilator ideals and p-ramified torsion orders.

A cyclic abelian field K is handled through a CyclicFieldSelector: the
conductor, the degree, a fixed Artin generator, and the full residue ->
sigma-power table (numpy, so the conductor-sized loops vectorize).

Torsion orders come from the finite twisted Stickelberger sums
A_{K,n}(c) = sum lambda_a(c) a^{-1} (K/a).  Two evaluators are provided:
``limit_element`` sums the literal level-n element, and
``mazur_class_sums`` evaluates the n -> infinity limit exactly to a given
p-adic precision by expanding x^{-1} on level-lcm(f,p) cosets against the
Bernoulli-polynomial moments of the c-smoothed measure.  The two are
cross-checked in the test suite; the limit evaluator is what the torsion
pipeline uses, since the literal level for a target exponent p^e is
conductor * p^(e+3) and grows out of reach while the moment route stays
O(f * p * precision^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import polys
from .arith import euler_phi, factorize, prime_divisors
from .characters import RationalCharacter, ResidueCharacter
from .cyclo import CyclotomicElement
from .minus import bernoulli_b1, primitive_character, _residual_is_cyclotomic, _vp
from .padic import PadicCyclotomicContext, PhiValuation, build_padic_context, phi_valuation


class PrecisionExhausted(RuntimeError):
    """A p-adic readout hit its precision cap; increase the level."""


# --- cyclic group ring -------------------------------------------------


@dataclass(frozen=True)
class GroupRingElement:
    """Element of Q[G] for cyclic G = <sigma>, coefficients by sigma-power."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coeffs)
        if len(c) != self.order:
            c = tuple(list(c) + [Fraction(0)] * (self.order - len(c)))[: self.order]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, order: int) -> "GroupRingElement":
        return cls(order, (Fraction(0),) * order)

    @classmethod
    def sigma_power(cls, order: int, t: int, scalar=1) -> "GroupRingElement":
        vec = [Fraction(0)] * order
        vec[t % order] = Fraction(scalar)
        return cls(order, tuple(vec))

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            g = self.order
            out = [Fraction(0)] * g
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % g] += a * b
            return GroupRingElement(g, tuple(out))
        return GroupRingElement(self.order, tuple(Fraction(other) * a for a in self.coeffs))

    __rmul__ = __mul__

    def shift(self, t: int) -> "GroupRingElement":
        """Multiply by sigma^t."""
        g = self.order
        return GroupRingElement(g, tuple(self.coeffs[(i - t) % g] for i in range(g)))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def psi_image(self, level: int | None = None) -> CyclotomicElement:
        """Image under sigma -> zeta_g (the faithful character)."""
        g = self.order
        elt = CyclotomicElement.zero(level or g)
        for t, a in enumerate(self.coeffs):
            if a:
                elt = elt + CyclotomicElement.root_power(level or g, t, a)
        return elt


# --- field selectors ---------------------------------------------------


@dataclass(frozen=True)
class CyclicFieldSelector:
    """Cyclic field K of conductor f and degree g inside Q(mu_f).

    class_table[a] is t with (K/a) = sigma^t for the fixed generator
    sigma = (K/generator), or -1 for a not coprime to f.
    """

    conductor: int
    order: int
    generator: int
    class_table: np.ndarray

    def __post_init__(self):
        if self.class_table[self.generator % self.conductor] != 1 and self.order > 1:
            raise ValueError("generator residue is not in class 1")

    def class_of(self, a: int) -> int:
        t = int(self.class_table[a % self.conductor])
        if t < 0:
            raise ValueError(f"{a} not coprime to the conductor")
        return t

    def in_kernel(self, a: int) -> bool:
        return self.class_of(a) == 0

    @property
    def is_imaginary(self) -> bool:
        return self.conductor > 2 and self.class_of(self.conductor - 1) != 0

    def coprime_residues(self) -> np.ndarray:
        return np.nonzero(self.class_table >= 0)[0]


def selector_from_orbit(char_orbit: RationalCharacter) -> CyclicFieldSelector:
    """Selector for K_chi, generator = smallest residue with full order."""
    psi = primitive_character(char_orbit.representative)
    f, g = psi.conductor, psi.order
    table = np.full(f if f > 1 else 1, -1, dtype=np.int32)
    if f == 1:
        table[0] = 0
        return CyclicFieldSelector(1, 1, 1, table)
    values = {}
    for a in range(1, f):
        if math.gcd(a, f) == 1:
            values[a] = psi.value_exponent(a)
    generator = min(a for a, k in values.items() if math.gcd(k, g) == 1)
    u = values[generator]
    uinv = pow(u, -1, g)
    for a, k in values.items():
        table[a] = k * uinv % g
    return CyclicFieldSelector(f, g, generator, table)


# --- Stickelberger elements -------------------------------------------


@dataclass(frozen=True)
class StickelbergerElement:
    selector: CyclicFieldSelector
    element: GroupRingElement
    denominator: int  # = conductor


def stickelberger_element(sel: CyclicFieldSelector) -> StickelbergerElement:
    """B_K = -sum_{a in [1,f[} (a/f - 1/2) (K/a)^{-1}, exact rationals."""
    f, g = sel.conductor, sel.order
    if f <= 1:
        raise ValueError("conductor must exceed 1")
    coeffs = [Fraction(0)] * g
    for a in range(1, f):
        t = int(sel.class_table[a])
        if t < 0:
            continue
        coeffs[(-t) % g] -= Fraction(a, f) - Fraction(1, 2)
    return StickelbergerElement(sel, GroupRingElement(g, tuple(coeffs)), f)


def alpha_coefficient(sel: CyclicFieldSelector, t: int = 0) -> int:
    """alpha_sigma^t-numerator data: sum of a over the class of sigma^{-t}."""
    idx = np.nonzero(sel.class_table == ((-t) % sel.order))[0]
    return int(idx.sum())


def lambda_K(sel: CyclicFieldSelector) -> int:
    """Least Lambda with Lambda * B_K integral: f / gcd(f, alpha_1)."""
    if sel.conductor <= 1:
        raise ValueError("conductor must exceed 1")
    alpha1 = int(np.nonzero(sel.class_table == 0)[0].sum())
    return sel.conductor // math.gcd(sel.conductor, alpha1)


def lambda_table(sel_or_f, c: int, modulus: int | None = None) -> dict[int, int]:
    """lambda_a(c) = (a'_c * c - a)/modulus for all units a (small moduli)."""
    f = modulus if modulus is not None else sel_or_f.conductor
    cinv = pow(c, -1, f)
    out = {}
    for a in range(1, f):
        if math.gcd(a, f) != 1:
            continue
        ap = a * cinv % f
        if ap == 0:
            ap = f
        out[a] = (ap * c - a) // f
    return out


def twist_c(stick: StickelbergerElement, c: int) -> tuple[GroupRingElement, GroupRingElement | None]:
    """B^c = (1 - c (K/c)^{-1}) B_K, integral by the twist lemma.

    Returns (B^c, B') where B' satisfies B^c = B' * (1 - s) when the field
    is imaginary (s = complex conjugation), else None.
    """
    sel = stick.selector
    f, g = sel.conductor, sel.order
    if c % 2 == 0 or math.gcd(c, f) != 1:
        raise ValueError("c must be odd and coprime to the conductor")
    tc = sel.class_of(c)
    twisted = stick.element - c * stick.element.shift((-tc) % g)
    if not twisted.is_integral():
        raise AssertionError("twisted Stickelberger element not integral")
    half = None
    if sel.is_imaginary:
        s = g // 2  # class of -1
        vec = [Fraction(0)] * g
        for t in range(s):
            vec[t] = twisted.coeffs[t]
        half = GroupRingElement(g, tuple(vec))
        if half - half.shift(s) != twisted:
            raise AssertionError("(1 - s) factorization failed")
    return twisted, half


def ideal_A_generators(sel: CyclicFieldSelector) -> list[GroupRingElement]:
    """Z[G]-generators ((K/a) - a, Lambda_K) of the smoothing ideal.

    The generator class is represented by an odd residue (a or a + f), the
    parity the twist lemma needs; with an even representative the product
    with B_K is only half-integral, while the generated ideal is the same
    because the two representatives differ by a multiple of Lambda_K.
    Each generator is checked to clear the denominator of B_K exactly.
    """
    f, g = sel.conductor, sel.order
    lam = lambda_K(sel)
    a_odd = sel.generator if sel.generator % 2 else sel.generator + f
    gens = [
        GroupRingElement.sigma_power(g, 1) - GroupRingElement.sigma_power(g, 0, a_odd),
        GroupRingElement.sigma_power(g, 0, lam),
    ]
    stick = stickelberger_element(sel)
    if not (gens[0] * stick.element).is_integral():
        raise AssertionError("smoothing ideal generator fails integrality")
    # Lambda clears the a/f part; the central 1/2-norm part is checked on
    # the pure element (Lambda * B itself can carry the half-norm shift)
    pure = [Fraction(0)] * g
    for a in range(1, f):
        t = int(sel.class_table[a])
        if t >= 0:
            pure[(-t) % g] -= Fraction(a, f)
    if not (gens[1] * GroupRingElement(g, tuple(pure))).is_integral():
        raise AssertionError("Lambda_K fails to clear the Stickelberger denominator")
    return gens


# --- annihilators of the minus part ------------------------------------


@dataclass(frozen=True)
class AnnihilatorReport:
    char_orbit: RationalCharacter
    prime: int
    factor_index: int
    bernoulli: CyclotomicElement
    smoothing_ideal: str  # "unit" | "prime-above-p" | "(4)"
    lam: int


def _is_p_cyclotomic_tower(char_orbit: RationalCharacter, p: int) -> bool:
    """K_chi an extension of Q(mu_p) of p-power relative degree."""
    g = char_orbit.order
    if p == 2:
        return g & (g - 1) == 0
    if g % (p - 1):
        return False
    rel = g // (p - 1)
    while rel % p == 0:
        rel //= p
    if rel != 1:
        return False
    psi = primitive_character(char_orbit.representative)
    return psi.power(g // (p - 1)).conductor == p


def annihilator_minus(char_orbit: RationalCharacter, p: int) -> list[AnnihilatorReport]:
    """Per-factor annihilator data for the odd orbit chi at p.

    The ideal (psi(a) - a, Lambda_chi) is the unit ideal unless K_chi sits
    in the p-cyclotomic tower with p | Lambda and the residual character
    is the mod-p cyclotomic one, where it degenerates to the prime above
    p; over Q(mu_4) it is (4).
    """
    if not char_orbit.is_odd:
        raise ValueError("annihilator classification needs an odd orbit")
    sel = selector_from_orbit(char_orbit)
    lam = lambda_K(sel)
    psi = primitive_character(char_orbit.representative)
    b1 = bernoulli_b1(psi)
    g = char_orbit.order
    ctx = build_padic_context(g, p, 2)
    out = []
    for i in range(ctx.factor_count()):
        if p == 2 and char_orbit.conductor == 4:
            ideal = "(4)"
        elif (
            lam % p == 0
            and _is_p_cyclotomic_tower(char_orbit, p)
            and (p == 2 or _residual_is_cyclotomic(ctx, i, psi))
        ):
            ideal = "prime-above-p"
        else:
            ideal = "unit"
        out.append(
            AnnihilatorReport(
                char_orbit=char_orbit,
                prime=p,
                factor_index=i,
                bernoulli=b1,
                smoothing_ideal=ideal,
                lam=lam,
            )
        )
    return out


# --- norm descent on raw (not necessarily cyclic) Stickelberger data ----


def stickelberger_raw(f: int) -> dict[int, Fraction]:
    """B_{Q(mu_f)} as {a: coefficient of the Artin symbol at a}."""
    out = {}
    for a in range(1, f):
        if math.gcd(a, f) != 1:
            continue
        ainv = pow(a, -1, f)
        out[a] = -(Fraction(ainv, f) - Fraction(1, 2))
    return out


def norm_map_raw(elem: dict[int, Fraction], f: int, m: int) -> dict[int, Fraction]:
    """Restriction Q[Gal(Q(mu_f)/Q)] -> Q[Gal(Q(mu_m)/Q)] for m | f."""
    out: dict[int, Fraction] = {}
    for a, cof in elem.items():
        b = a % m
        out[b] = out.get(b, Fraction(0)) + cof
    return out


def euler_twisted_raw(m: int, removed_primes: list[int]) -> dict[int, Fraction]:
    """prod_{q in removed} (1 - (Q(mu_m)/q)^{-1}) * B_{Q(mu_m)}, as raw dict."""
    base = stickelberger_raw(m)
    for q in removed_primes:
        qinv = pow(q, -1, m)
        twisted = {}
        for a, cof in base.items():
            twisted[a] = twisted.get(a, Fraction(0)) + cof
            b = a * qinv % m
            twisted[b] = twisted.get(b, Fraction(0)) - cof
        base = twisted
    return base


# --- the limit elements A_{K,n}(c) (direct summation) ------------------


def conductor_level(sel: CyclicFieldSelector, p: int, n: int) -> int:
    """Conductor of K * Q(mu_{q p^n}), q = p for odd p and 4 for p = 2."""
    q_part = p ** (n + 1) if p != 2 else 2 ** (n + 2)
    return math.lcm(sel.conductor, q_part)


def _np_mulmod(a: np.ndarray, b, m: int) -> np.ndarray:
    """(a * b) % m on int64 arrays, splitting when products could overflow."""
    if m <= (1 << 31):
        return a * b % m
    b_arr = np.asarray(b, dtype=np.int64)
    hi, lo = b_arr >> 16, b_arr & 0xFFFF
    return ((a * hi % m << 16) + a * lo) % m


def _np_powmod(base: np.ndarray, exp: int, m: int) -> np.ndarray:
    out = np.ones_like(base)
    cur = base % m
    e = exp
    while e:
        if e & 1:
            out = _np_mulmod(out, cur, m)
        cur = _np_mulmod(cur, cur, m)
        e >>= 1
    return out


def limit_element(
    sel: CyclicFieldSelector, p: int, n: int, c: int, chunk: int = 1 << 20
) -> tuple[GroupRingElement, GroupRingElement]:
    """The literal level-n elements (A_{K,n}(c), A'_{K,n}(c)) over Z/p^n.

    Direct summation over a in [1, f_n]; coefficients are integers reduced
    mod p^n, wrapped as exact group-ring elements.
    """
    f, g = sel.conductor, sel.order
    fn = conductor_level(sel, p, n)
    if math.gcd(c, fn) != 1:
        raise ValueError(f"auxiliary c={c} not coprime to the level conductor")
    if fn > 3_000_000_000:
        raise ValueError("level conductor too large for direct summation")
    pn = p**n
    cinv = pow(c, -1, fn)
    table = sel.class_table
    full = np.zeros(g, dtype=object)
    half = np.zeros(g, dtype=object)
    inv_exp = pn - pn // p - 1  # phi(p^n) - 1
    other = [q for q in prime_divisors(fn) if q != p and f % q == 0]
    for lo in range(1, fn + 1, chunk):
        a = np.arange(lo, min(lo + chunk, fn + 1), dtype=np.int64)
        mask = a % p != 0
        for q in other:
            mask &= a % q != 0
        # remaining non-coprime residues (primes dividing fn but not p*f) cannot
        # occur: fn = lcm(f, p-power), so its primes all divide p*f
        a = a[mask]
        if a.size == 0:
            continue
        ap = _np_mulmod(a, cinv, fn)
        ap[ap == 0] = fn
        lam = (ap * c - a) // fn
        ainv = _np_powmod(a % pn, inv_exp, pn)
        vals = lam % pn * ainv % pn
        cls = table[a % f] if f > 1 else np.zeros_like(a)
        in_half = a <= fn // 2
        for t in range(g):
            pick = cls == t
            full[t] += int(vals[pick].sum()) % pn
            half[t] += int(vals[pick & in_half].sum()) % pn
    full_elt = GroupRingElement(g, tuple(Fraction(int(v) % pn) for v in full))
    half_elt = GroupRingElement(g, tuple(Fraction(int(v) % pn) for v in half))
    return full_elt, half_elt


# --- exact limit evaluation via Bernoulli moments ----------------------


@lru_cache(maxsize=None)
def _bernoulli_numbers(kmax: int) -> tuple[Fraction, ...]:
    """B_0 .. B_kmax (B_1 = -1/2), by the defining recurrence."""
    out = [Fraction(1)]
    for m in range(1, kmax + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * out[k]
        out.append(-acc / (m + 1))
    return tuple(out)


def mazur_class_sums(
    sel: CyclicFieldSelector, p: int, c: int, precision: int, chunk: int = 1 << 18
) -> list[int]:
    """W_t = integral of x^{-1} over {x : (K/x) = sigma^t} against the
    c-smoothed Stickelberger measure, exact mod p^precision.

    This equals the t-th coefficient of the n -> infinity limit of
    A_{K,n}(c) read mod p^precision.  Evaluation runs over the cosets
    r + f0*Z_p, f0 = lcm(f, p): the raw coset moments are the regularized
    Bernoulli-polynomial values

        int_{r+f0 Z_p} x^k dmu_c
            = (f0^k/(k+1)) [c^{k+1} B_{k+1}(r*/f0) - B_{k+1}(r/f0)],

    (r* = c^{-1} r mod f0; verified against finite-level sums), the
    centered moments follow binomially, and x^{-1} is expanded in powers
    of (x - r), whose k-th term carries p^k, so truncating at
    k = precision + 1 is exact mod p^precision.
    """
    if p == 2:
        raise ValueError("the moment evaluator assumes p odd")
    f, g = sel.conductor, sel.order
    f0 = math.lcm(f, p)
    if math.gcd(c, f0) != 1:
        raise ValueError("auxiliary c not coprime to lcm(f, p)")
    comb = math.comb
    kmax = precision + 1
    # scale: one p for Bernoulli denominators, plus the worst p | (k+1)
    smax = 1 + max(_vp(k + 1, p) for k in range(kmax + 1))
    scale = p**smax
    M = p ** (precision + smax)
    bern = _bernoulli_numbers(kmax + 2)
    bhat = [_frac_mod(p * b, M) for b in bern]  # p*B_i mod M, p-integral
    # X~_k = scale * int x^k dmu = mult_k * [ B^_0*T0 + sum_{i>=1} C(k+1,i) B^_i f0^{i-1} (c^{k+1} rs^{k+1-i} - r^{k+1-i}) ]
    # with mult_k = p^{smax-1-v_p(k+1)} * inverse of (k+1)/p^{v_p(k+1)}
    mult = []
    for k in range(kmax + 1):
        v = _vp(k + 1, p)
        u = (k + 1) // p**v
        mult.append(p ** (smax - 1 - v) * pow(u, -1, M) % M)
    f0_pow = [pow(f0, i, M) for i in range(kmax + 2)]
    c_pow = [pow(c, i, M) for i in range(kmax + 2)]
    cinv = pow(c, -1, f0)
    inv_exp = (M - M // p) - 1
    table = sel.class_table
    sums = [0] * g
    for lo in range(1, f0 + 1, chunk):
        r = np.arange(lo, min(lo + chunk, f0 + 1), dtype=np.int64)
        mask = r % p != 0
        for q in prime_divisors(f):
            if q != p:
                mask &= r % q != 0
        r = r[mask]
        if r.size == 0:
            continue
        rstar = _np_mulmod(r, cinv, f0)
        rstar[rstar == 0] = f0
        lam0 = (rstar * c - r) // f0
        r_m = r % M
        rs_m = rstar % M
        # power tables mod M for j = 0..kmax+1
        r_pows = [np.ones_like(r_m)]
        rs_pows = [np.ones_like(r_m)]
        lam_pows = [np.ones_like(r_m)]
        for _ in range(kmax + 1):
            r_pows.append(_np_mulmod(r_pows[-1], r_m, M))
            rs_pows.append(_np_mulmod(rs_pows[-1], rs_m, M))
            lam_pows.append(_np_mulmod(lam_pows[-1], lam0 % M, M))
        xk = []  # X~_k arrays
        for k in range(kmax + 1):
            n = k + 1
            # T0 = (c^n rs^n - r^n)/f0 = sum_{j>=1} C(n,j) f0^{j-1} lam0^j r^{n-j}
            # (from c*rs = r + f0*lam0), everything mod M
            t0 = np.zeros_like(r_m)
            for j in range(1, n + 1):
                w = comb(n, j) * f0_pow[j - 1] % M
                t0 = (t0 + _np_mulmod(_np_mulmod(lam_pows[j], r_pows[n - j], M), w, M)) % M
            acc = _np_mulmod(t0, bhat[0], M)
            for i in range(1, n + 1):
                w = comb(n, i) * bhat[i] % M * f0_pow[i - 1] % M
                diff = (_np_mulmod(rs_pows[n - i], c_pow[n], M) - r_pows[n - i]) % M
                acc = (acc + _np_mulmod(diff, w, M)) % M
            xk.append(_np_mulmod(acc, mult[k], M))
        # centered moments and the x^{-1} series
        rinv = _np_powmod(r_m, inv_exp, M)
        rpow = rinv.copy()
        contrib = np.zeros_like(r_m)
        neg_r = (-r_m) % M
        negr_pows = [np.ones_like(r_m)]
        for _ in range(kmax):
            negr_pows.append(_np_mulmod(negr_pows[-1], neg_r, M))
        for k in range(kmax + 1):
            mk = np.zeros_like(r_m)
            for i in range(k + 1):
                term = _np_mulmod(xk[i], negr_pows[k - i], M)
                mk = (mk + comb(k, i) * term) % M
            term = _np_mulmod(rpow, mk, M)
            contrib = (contrib - term) % M if k & 1 else (contrib + term) % M
            rpow = _np_mulmod(rpow, rinv, M)
        cls = table[r % f] if f > 1 else np.zeros_like(r)
        for t in range(g):
            sums[t] = (sums[t] + int(contrib[cls == t].sum())) % M
    out = []
    for t in range(g):
        v = sums[t] % M
        if v % scale:
            raise AssertionError("moment evaluation lost p-integrality")
        out.append(v // scale % p**precision)
    return out


def _frac_mod(x: Fraction, m: int) -> int:
    if math.gcd(x.denominator, m) != 1:
        raise ArithmeticError(f"denominator {x.denominator} not invertible mod {m}")
    return x.numerator * pow(x.denominator, -1, m) % m


# --- torsion valuations -------------------------------------------------


@dataclass(frozen=True)
class TorsionComponent:
    factor_index: int
    degree: int
    residue_degree: int
    value: int  # m_ar(T) candidate for this factor
    psi_a_valuation: int
    unit_correction: int  # val(1 - psi(c))
    w_correction: int  # +1 when K_chi sits in the cyclotomic Z_p-extension
    capped: bool


@dataclass(frozen=True)
class TorsionReport:
    prime: int
    level: int
    auxiliary: int
    two_adic_weak: bool
    components: tuple[TorsionComponent, ...]

    def valuations(self) -> list[int]:
        return [comp.value for comp in self.components]

    def total(self) -> int:
        """val_p of the torsion order (residue-degree weights)."""
        return sum(comp.residue_degree * comp.value for comp in self.components)


def _group_ring_to_cyclotomic(coeffs: list[int], g: int) -> CyclotomicElement:
    elt = CyclotomicElement.zero(g)
    for t, v in enumerate(coeffs):
        if v:
            elt = elt + CyclotomicElement.root_power(g, t, int(v))
    return elt


def choose_auxiliary(sel: CyclicFieldSelector, p: int, avoid: tuple[int, ...] = ()) -> int:
    """First c in (2, 3, 5, 7, ...) coprime to pf with (K/c) != 1."""
    f = sel.conductor
    candidates = [2] if p != 2 and f % 2 else []
    candidates += [c for c in range(3, 3 + 2 * (p + 10) * 4, 2)]
    for c in candidates:
        if c in avoid or math.gcd(c, p * f) != 1:
            continue
        if sel.class_of(c) != 0:
            return c
    raise AssertionError("no usable auxiliary integer found")


def torsion_valuations(
    sel: CyclicFieldSelector,
    p: int,
    level: int | None = None,
    c: int | None = None,
    exponent_hint: int = 1,
) -> TorsionReport:
    """Per-factor p-valuations of the torsion order, via psi(A_K(c)).

    level defaults to n0 + e + 2 (e = exponent_hint); the valuation of each
    component is val(psi(A)) - val(1 - psi(c)) - val(2) plus 1 when K sits
    inside the cyclotomic Z_p-extension.  Raises PrecisionExhausted when a
    readout caps out, so callers can retry with a larger level.
    """
    f, g = sel.conductor, sel.order
    if g == 1:
        raise ValueError("torsion components need a nontrivial field")
    if sel.is_imaginary:
        raise ValueError("torsion valuations are for real fields")
    in_zp_tower = _is_zp_tower(sel, p)
    n0 = _vp(g, p) if in_zp_tower else 0
    if level is None:
        level = n0 + exponent_hint + 2
    if c is None:
        c = choose_auxiliary(sel, p)
    elif sel.class_of(c) == 0:
        raise ValueError("auxiliary c lies in the kernel: 1 - psi(c) vanishes")
    sums = mazur_class_sums(sel, p, c, level)
    ctx = build_padic_context(g, p, level)
    psi_a = _group_ring_to_cyclotomic(sums, g)
    one_minus = CyclotomicElement.one(g) - CyclotomicElement.root_power(g, sel.class_of(c))
    comps = []
    for i in range(ctx.factor_count()):
        va = phi_valuation(psi_a, ctx, i)
        vc = phi_valuation(one_minus, ctx, i)
        if vc.capped:
            raise PrecisionExhausted("1 - psi(c) capped out; widen the level")
        v2 = ctx.ramification if p == 2 else 0
        if va.capped:
            raise PrecisionExhausted(
                f"psi(A) readout capped at level {level}; increase n"
            )
        value = va.value - vc.value - v2 + (1 if in_zp_tower else 0)
        comps.append(
            TorsionComponent(
                factor_index=i,
                degree=len(ctx.factors[i]) - 1,
                residue_degree=ctx.residue_degree,
                value=value,
                psi_a_valuation=va.value,
                unit_correction=vc.value,
                w_correction=1 if in_zp_tower else 0,
                capped=va.capped,
            )
        )
    return TorsionReport(
        prime=p, level=level, auxiliary=c, two_adic_weak=p == 2, components=tuple(comps)
    )


def _is_zp_tower(sel: CyclicFieldSelector, p: int) -> bool:
    """K inside the cyclotomic Z_p-extension: f and g both p-powers (p odd),
    f = 2-power for p = 2 (real subfields)."""
    f, g = sel.conductor, sel.order
    fp = f
    while fp % p == 0:
        fp //= p
    gp = g
    while gp % p == 0:
        gp //= p
    if p == 2:
        return fp == 1
    return fp == 1 and gp == 1


def torsion_valuations_for_orbit(
    char_orbit: RationalCharacter, p: int, level: int | None = None, c: int | None = None,
    exponent_hint: int = 1,
) -> TorsionReport:
    if char_orbit.order == 1 or char_orbit.is_odd:
        raise ValueError("torsion valuations need an even nontrivial orbit")
    sel = selector_from_orbit(char_orbit)
    return torsion_valuations(sel, p, level, c, exponent_hint)
