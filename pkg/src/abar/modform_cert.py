"""Certify eta-quotients as holomorphic modular forms on Gamma_0(N).

For ``f = prod eta(delta z)^r_delta`` the checks are:

* weight ``l = sum(r)/2`` must be an integer,
* ``sum(delta * r) = 0`` and ``sum((N/delta) * r) = 0`` mod 24,
* the order of vanishing at every cusp ``c/d`` (``d | N``) is
  ``(N/24) * sum(gcd(d, delta)^2 r / (gcd(d, N/d) d delta)) >= 0``.

The Nebentypus is ``chi(d) = ((-1)^l s / d)`` with ``s = prod delta^r``.
All arithmetic is exact (ints and Fractions).

The module also builds the two families ``B_{alpha,m,k}`` (2-power
congruences) and ``D_{alpha,m,k}`` (3-power congruences) whose expansions
reduce to ``sum abar_{3^alpha m}(n) q^(24n)``, and checks the cusp case
analysis that proves them holomorphic.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from sympy import divisors, factorint

from .series_core import (
    EtaQuotient,
    PowerSeries,
    eta_quotient_expand,
    one,
)
from .partition_funcs import coeffs_abar

__all__ = [
    "CertificationError",
    "CuspReport",
    "Certificate",
    "kronecker",
    "weight_times_2",
    "level_conditions",
    "minimal_level",
    "character_s",
    "character_eval",
    "cusp_order",
    "certify",
    "certify_many",
    "build_A",
    "build_B",
    "build_C",
    "build_D",
    "build_family",
    "stated_level",
    "stated_weight_times_2",
    "closed_form_character_argument",
    "abar_dilated",
    "verify_congruence_reduction",
    "first_congruence_failure",
    "LCaseRow",
    "LCaseReport",
    "verify_L_cases",
]


class CertificationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Kronecker symbol


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)``.

    Conventions: ``(a/0) = 1`` iff ``a = +-1``; ``(a/-1) = -1`` iff ``a < 0``;
    ``(a/2) = 0`` for even ``a``, else ``+1`` for ``a = +-1 (mod 8)`` and
    ``-1`` for ``a = +-3 (mod 8)``.
    """
    a, n = int(a), int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# weight, level, character


def weight_times_2(E: EtaQuotient) -> int:
    return sum(E.terms.values())


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def level_conditions(E: EtaQuotient, N: int) -> tuple[bool, bool]:
    """The two mod-24 conditions at level ``N`` (both need ``delta | N``)."""
    if any(N % d for d in E.terms):
        raise CertificationError(f"level {N} is not a multiple of every eta argument")
    s1 = sum(d * r for d, r in E.terms.items())
    s2 = sum((N // d) * r for d, r in E.terms.items())
    return s1 % 24 == 0, s2 % 24 == 0


def minimal_level(E: EtaQuotient) -> int:
    """Smallest multiple of every ``delta`` meeting both mod-24 conditions."""
    L = _lcm(E.terms)
    if E.e24 % 24:
        raise CertificationError(
            f"sum(delta*r) = {E.e24} is not divisible by 24; no level satisfies the conditions"
        )
    for M in range(1, 25):
        if all(level_conditions(E, L * M)):
            return L * M
    raise AssertionError("24 * lcm(delta) always satisfies the second condition")


def character_s(E: EtaQuotient) -> Fraction:
    """``s = prod delta^r`` (a rational number when exponents are negative)."""
    num, den = 1, 1
    for d, r in E.terms.items():
        if r > 0:
            num *= d**r
        else:
            den *= d ** (-r)
    return Fraction(num, den)


def _kronecker_argument(E: EtaQuotient, w2: int | None = None) -> int:
    # (x/y / d) = (xy / d) whenever gcd(d, y) = 1, and both vanish otherwise
    if w2 is None:
        w2 = weight_times_2(E)
    if w2 % 2:
        raise CertificationError("character needs integral weight")
    s = character_s(E)
    sign = -1 if (w2 // 2) % 2 else 1
    return sign * s.numerator * s.denominator


def character_eval(E: EtaQuotient, d: int, w2: int | None = None) -> int:
    """``chi(d) = ((-1)^l s / d)``."""
    return kronecker(_kronecker_argument(E, w2), d)


# ---------------------------------------------------------------------------
# cusp orders and certificates


@dataclass(frozen=True)
class CuspReport:
    d: int
    order24N: int

    @property
    def nonnegative(self) -> bool:
        return self.order24N >= 0

    def order(self, N: int) -> Fraction:
        return Fraction(self.order24N, 24 * N)

    def to_dict(self, N: int) -> dict:
        o = self.order(N)
        return {
            "d": str(self.d),
            "order24N": str(self.order24N),
            "order": f"{o.numerator}/{o.denominator}",
            "nonnegative": self.nonnegative,
        }


def cusp_order(E: EtaQuotient, N: int, d: int) -> Fraction:
    """Order of vanishing at a cusp ``c/d`` of Gamma_0(N); independent of ``c``."""
    if d < 1 or N % d:
        raise CertificationError(f"{d} does not divide {N}")
    if not all(level_conditions(E, N)):
        raise CertificationError(f"eta quotient does not satisfy the level conditions at N={N}")
    g = math.gcd(d, N // d)
    total = sum(Fraction(math.gcd(d, delta) ** 2 * r, g * d * delta) for delta, r in E.terms.items())
    return Fraction(N, 24) * total


@dataclass
class Certificate:
    quotient: EtaQuotient
    weight_times_2: int
    level: int
    character_sign: int
    character_s: Fraction
    cusps: list[CuspReport] = field(default_factory=list)
    holomorphic: bool = False

    @property
    def weight(self) -> int:
        return self.weight_times_2 // 2

    @property
    def kronecker_argument(self) -> int:
        return self.character_sign * self.character_s.numerator * self.character_s.denominator

    def character(self, d: int) -> int:
        return kronecker(self.kronecker_argument, d)

    def order_at(self, d: int) -> Fraction:
        for c in self.cusps:
            if c.d == d:
                return c.order(self.level)
        raise KeyError(d)

    def zero_order_divisors(self) -> list[int]:
        return [c.d for c in self.cusps if c.order24N == 0]

    def to_dict(self) -> dict:
        return {
            "quotient": {"terms": {str(d): str(r) for d, r in self.quotient.terms.items()}},
            "weight_times_2": str(self.weight_times_2),
            "weight": str(self.weight),
            "level": str(self.level),
            "character": {
                "sign": str(self.character_sign),
                "s_numerator": str(self.character_s.numerator),
                "s_denominator": str(self.character_s.denominator),
                "kronecker_argument": str(self.kronecker_argument),
            },
            "cusps": [c.to_dict(self.level) for c in self.cusps],
            "holomorphic": self.holomorphic,
        }


def certify(E: EtaQuotient, level: int | None = None) -> Certificate:
    """Weight, level, character and cusp orders of ``E``.

    ``level`` defaults to :func:`minimal_level`; an explicit level is checked
    against both mod-24 conditions.  Half-integral weight is refused.
    """
    w2 = weight_times_2(E)
    if w2 % 2:
        raise CertificationError(f"sum of exponents {w2} is odd; half-integral weight is not supported")
    if level is None:
        level = E.level_candidate or minimal_level(E)
    ok1, ok2 = level_conditions(E, level)
    if not (ok1 and ok2):
        raise CertificationError(f"level conditions fail at N={level}: {ok1}, {ok2}")
    cusps = []
    for d in divisors(level):
        o = cusp_order(E, level, d)
        v = o * 24 * level
        assert v.denominator == 1
        cusps.append(CuspReport(int(d), int(v)))
    sign = -1 if (w2 // 2) % 2 else 1
    return Certificate(
        quotient=E,
        weight_times_2=w2,
        level=level,
        character_sign=sign,
        character_s=character_s(E),
        cusps=cusps,
        holomorphic=all(c.nonnegative for c in cusps),
    )


def certify_many(quotients: list[EtaQuotient], workers: int = 1, level_of: Callable | None = None):
    """Certify a batch of quotients, optionally in worker processes."""
    levels = [level_of(E) if level_of else None for E in quotients]
    if workers <= 1:
        return [certify(E, N) for E, N in zip(quotients, levels)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(certify, quotients, levels))


# ---------------------------------------------------------------------------
# the A/B/C/D families


def _check_params(alpha: int, m: int, k: int | None = None):
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if m < 1 or math.gcd(m, 6) != 1:
        raise ValueError(f"m must be a positive integer coprime to 6, got {m}")
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")


def _abar_core(alpha: int, m: int) -> list[tuple[int, int]]:
    # eta(48z) eta(8bz)^(2v) / (eta(24z)^2 eta(16bz)^v), b = 3^(alpha+1) m, v = 3^alpha m;
    # cancels to nothing when alpha = 0, m = 1
    b, v = 3 ** (alpha + 1) * m, 3**alpha * m
    return [(24, -2), (48, 1), (8 * b, 2 * v), (16 * b, -v)]


def build_A(alpha: int, m: int) -> EtaQuotient:
    _check_params(alpha, m)
    b = 3 ** (alpha + 1) * m
    return EtaQuotient([(8 * b, 2), (16 * b, -1)])


def build_B(alpha: int, m: int, k: int) -> EtaQuotient:
    _check_params(alpha, m, k)
    b = 3 ** (alpha + 1) * m
    A = [(8 * b, 2 * 2**k), (16 * b, -(2**k))]
    return EtaQuotient(_abar_core(alpha, m) + A)


def build_C(alpha: int, m: int) -> EtaQuotient:
    _check_params(alpha, m)
    b = 3 ** (alpha + 1) * m
    return EtaQuotient([(16 * b, 3), (48 * b, -1)])


def build_D(alpha: int, m: int, k: int) -> EtaQuotient:
    _check_params(alpha, m, k)
    b = 3 ** (alpha + 1) * m
    C = [(16 * b, 3 * 3**k), (48 * b, -(3**k))]
    return EtaQuotient(_abar_core(alpha, m) + C)


def build_family(family: str, alpha: int, m: int, k: int) -> EtaQuotient:
    family = family.upper()
    if family == "B":
        return build_B(alpha, m, k)
    if family == "D":
        return build_D(alpha, m, k)
    raise ValueError(f"unknown family {family!r}; expected 'B' or 'D'")


def stated_level(family: str, alpha: int, m: int) -> int:
    """Level claimed for the family: ``2^6 3^(a+1) m`` (B) or ``2^4 3^(a+2) m`` (D)."""
    if family.upper() == "B":
        return 2**6 * 3 ** (alpha + 1) * m
    if family.upper() == "D":
        return 2**4 * 3 ** (alpha + 2) * m
    raise ValueError(family)


def stated_weight_times_2(family: str, alpha: int, m: int, k: int) -> int:
    v = 3**alpha * m
    if family.upper() == "B":
        return v + 2**k - 1
    if family.upper() == "D":
        return v - 1 + 2 * 3**k
    raise ValueError(family)


def closed_form_character_argument(family: str, alpha: int, m: int, k: int) -> int:
    """Integer under the Kronecker symbol in the closed-form characters chi_1, chi_2."""
    w = stated_weight_times_2(family, alpha, m, k) // 2
    sign = -1 if w % 2 else 1
    v = 3**alpha * m
    if family.upper() == "B":
        u = v + 2**k
        return sign * 3 ** ((alpha + 1) * u - 1) * m**u
    if family.upper() == "D":
        e3 = 2 * alpha * 3**k + 3**alpha * alpha * m + v + 3**k - 1
        return sign * 3**e3 * m ** (v + 2 * 3**k)
    raise ValueError(family)


# ---------------------------------------------------------------------------
# congruence reduction B, D == sum abar(n) q^(24n)


def family_modulus(family: str, k: int) -> int:
    return 2 ** (k + 1) if family.upper() == "B" else 3 ** (k + 1)


def abar_dilated(t: int, P: int, modulus: int | None = None) -> PowerSeries:
    """``sum abar_t(n) q^(24n)`` through ``q^(P-1)``; ``t = 1`` gives the constant 1."""
    Pn = (P - 1) // 24 + 1
    base = one(Pn, modulus) if t == 1 else coeffs_abar(t, Pn, modulus=modulus)
    return base.dilate(24, P)


def _family_pair(family, alpha, m, k, P, modulus):
    E = build_family(family, alpha, m, k)
    if modulus is None:
        modulus = family_modulus(family, k)
    F = eta_quotient_expand(E, P, modulus).fold().truncate(P)
    G = abar_dilated(3**alpha * m, P, modulus)
    return F, G


def first_congruence_failure(family: str, alpha: int, m: int, k: int, P: int, modulus: int | None = None):
    """Smallest ``n < P`` where the family expansion and the dilated abar stream differ, or None."""
    F, G = _family_pair(family, alpha, m, k, P, modulus)
    diff = [n for n in range(P) if F.coeffs[n] != G.coeffs[n]]
    return diff[0] if diff else None


def verify_congruence_reduction(family: str, alpha: int, m: int, k: int, P: int, modulus: int | None = None) -> bool:
    """Check ``B == sum abar(n) q^(24n) (mod 2^(k+1))`` (or ``D``, mod ``3^(k+1)``) below ``q^P``."""
    return first_congruence_failure(family, alpha, m, k, P, modulus) is None


# ---------------------------------------------------------------------------
# case analysis of the holomorphy inequality


@dataclass
class LCaseRow:
    d: int
    r1: int
    r2: int
    t: int
    G: tuple[Fraction, ...]
    L: Fraction
    case: int
    case_L: Fraction | None
    order: Fraction
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


@dataclass
class LCaseReport:
    family: str
    alpha: int
    m: int
    k: int
    level: int
    rows: list[LCaseRow]
    # stated G_1 ranges that fail; informational, not part of ``ok``
    stated_bound_violations: list[int]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def zero_divisors(self) -> list[int]:
        return [r.d for r in self.rows if r.order == 0]

    @property
    def predicted_zero_divisors(self) -> list[int]:
        return [r.d for r in self.rows if r.case_L == 0]


def _split(d: int, m: int) -> tuple[int, int, int]:
    f = factorint(d)
    r1, r2 = f.get(2, 0), f.get(3, 0)
    t = d // (2**r1 * 3**r2)
    assert m % t == 0
    return r1, r2, t


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def verify_L_cases(family: str, alpha: int, m: int, k: int) -> LCaseReport:
    """Evaluate the holomorphy quantity ``L`` at every divisor of the claimed level.

    Each row checks ``L >= 0``, that ``L`` is the cusp order up to the
    positive factor ``N g^2 / (24 d gcd(d, N/d) base)`` (``base`` the
    normalising eta argument, ``g = gcd(d, base)``), and that ``L`` equals
    the closed form of the case the divisor falls in.
    """
    family = family.upper()
    _check_params(alpha, m, k)
    E = build_family(family, alpha, m, k)
    N = stated_level(family, alpha, m)
    a3, v = 3 ** (alpha + 1), 3**alpha * m
    rows = []
    bound_violations = []
    for d in divisors(N):
        d = int(d)
        r1, r2, t = _split(d, m)
        g = math.gcd
        if family == "B":
            base = 16 * a3 * m
            den = Fraction(g(d, base) ** 2)
            G1 = g(d, 24) ** 2 / den
            G2 = g(d, 48) ** 2 / den
            G3 = g(d, 8 * a3 * m) ** 2 / den
            Gs = (G1, G2, G3)
            L = v * (-4 * G1 + G2 + 4 * G3 - 1) + 2**k * (4 * G3 - 1)
            if r1 <= 3:
                case = 1
                case_L = a3 * m * (1 - G1) + 3 * 2**k
                pred = {"G1==G2": G1 == G2, "G3==1": G3 == 1, "L>=3*2^k": L >= 3 * 2**k}
                lo, hi = Fraction(1, 3 ** (2 * alpha) * t * t), Fraction(1)
            else:
                case = 2
                case_L = Fraction(0)
                pred = {"G2==4G1": G2 == 4 * G1, "G3==1/4": G3 == Fraction(1, 4)}
                lo, hi = Fraction(1, 4 * 3 ** (2 * alpha) * t * t), Fraction(1, 4)
        else:
            base = 16 * 3 ** (alpha + 2) * m
            den = Fraction(g(d, base) ** 2)
            G1 = g(d, 24) ** 2 / den
            G2 = g(d, 48) ** 2 / den
            G3 = g(d, 8 * a3 * m) ** 2 / den
            G4 = g(d, 16 * a3 * m) ** 2 / den
            Gs = (G1, G2, G3, G4)
            L = a3 * m * (-4 * G1 + G2 + 4 * G3 - G4) + 3**k * (9 * G4 - 1)
            top = r2 == alpha + 2
            if r1 <= 3 and not top:
                case = 1
                case_L = 3 ** (alpha + 2) * m * (1 - G1) + 8 * 3**k
                pred = {"G1==G2": G1 == G2, "G3==G4==1": G3 == 1 and G4 == 1, "L>=8*3^k": L >= 8 * 3**k}
                lo, hi = Fraction(1, 3 ** (2 * alpha) * t * t), Fraction(1)
            elif r1 <= 3:
                case = 2
                case_L = 3 ** (alpha + 2) * m * (Fraction(1, 9) - G1)
                pred = {"G1==G2": G1 == G2, "G3==G4==1/9": G3 == G4 == Fraction(1, 9)}
                lo = Fraction(1, 3 ** (2 * (alpha + 1)) * t * t)
                hi = Fraction(1, 3 ** (2 * (alpha + 1)))
            elif not top:
                case = 3
                case_L = Fraction(8 * 3**k)
                pred = {"G2==4G1": G2 == 4 * G1, "G4==4G3": G4 == 4 * G3, "G3==1/4": G3 == Fraction(1, 4)}
                lo, hi = Fraction(1, 4 * 3 ** (alpha + 1) * t * t), Fraction(1, 4)
            else:
                case = 4
                case_L = Fraction(0)
                pred = {"G2==4G1": G2 == 4 * G1, "G4==4G3": G4 == 4 * G3, "G3==1/36": G3 == Fraction(1, 36)}
                lo = Fraction(1, 4 * 3 ** (alpha + 1) * t * t)
                hi = Fraction(1, 4 * 3 ** (2 * (alpha + 1)))
        order = cusp_order(E, N, d)
        factor = Fraction(N * g(d, base) ** 2, 24 * d * g(d, N // d) * base)
        checks = {
            "L>=0": L >= 0,
            "order==factor*L": order == factor * L,
            "sign(order)==sign(L)": _sign(order) == _sign(L),
            "L==case_form": L == case_L,
            **pred,
        }
        if not lo <= G1 <= hi:
            bound_violations.append(d)
        rows.append(LCaseRow(d, r1, r2, t, Gs, Fraction(L), case, Fraction(case_L), order, checks))
    return LCaseReport(family, alpha, m, k, N, rows, bound_violations)
