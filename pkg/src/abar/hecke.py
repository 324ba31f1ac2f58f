"""Hecke operators T_p on q-expansions modulo M, and experiments with B_{1,1,k}.

``(f | T_p)(n) = a(pn) + chi(p) p^(l-1) a(n/p)``, with ``a(n/p) = 0`` when
``p`` does not divide ``n``.  Data known through ``q^V`` gives ``f | T_p``
known through ``q^(V // p)``, so long compositions burn precision quickly.

``B_{1,1,k}`` is a series in ``q^24``.  For primes coprime to 6, ``T_p``
commutes with the substitution ``q -> q^24``, so the experiments below work
on the compressed series ``G(q)`` with ``B(q) = G(q^24)``; indices are
translated back when reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from sympy import isprime

from .series_core import EtaQuotient, PowerSeries, PrecisionError, eta_quotient_expand
from .modform_cert import build_B, certify, kronecker

__all__ = [
    "HeckeContext",
    "hecke_Tp",
    "apply_hecke_sequence",
    "family_B_context",
    "family_B_series",
    "NilpotencyReport",
    "nilpotency_probe",
    "Cong1Report",
    "verify_cong1_instance",
    "estimate_c",
    "PRIMES_COPRIME_TO_6",
]

PRIMES_COPRIME_TO_6 = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


@dataclass(frozen=True)
class HeckeContext:
    weight: int
    character: Callable[[int], int]
    modulus: int
    valid_through: int | None = None

    def after(self, p: int) -> "HeckeContext":
        if self.valid_through is None:
            return self
        return replace(self, valid_through=self.valid_through // p)


def hecke_Tp(f: PowerSeries, p: int, ctx: HeckeContext) -> PowerSeries:
    """Apply ``T_p`` to ``f`` (a residue series mod ``ctx.modulus``)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if f.e24:
        raise ValueError("fold the exponent prefactor before applying T_p")
    M = ctx.modulus
    if f.modulus is None:
        f = PowerSeries(f.coeffs, modulus=M)
    elif f.modulus % M:
        raise ValueError(f"series mod {f.modulus} cannot be read mod {M}")
    V = f.precision - 1
    if ctx.valid_through is not None:
        V = min(V, ctx.valid_through)
    if V < p:
        raise PrecisionError(f"T_{p} needs coefficients through q^{p}, have q^{V}")
    a = f.coeffs if f.modulus == M else f.coeffs.astype(object) % M
    return _tp(a, p, _hecke_factor(p, ctx), M, V)


def _hecke_factor(p: int, ctx: HeckeContext) -> int:
    # p^(l-1) reduced before it can grow
    return ctx.character(p) * pow(p, ctx.weight - 1, ctx.modulus) % ctx.modulus


def _tp(a: np.ndarray, p: int, c: int, M: int, V: int) -> PowerSeries:
    W = V // p
    out = np.array(a[: p * W + 1 : p], dtype=object)
    if c:
        out[::p] += c * np.array(a[: W // p + 1], dtype=object)
    return PowerSeries(out % M, modulus=M)


def apply_hecke_sequence(f: PowerSeries, primes: Sequence[int], ctx: HeckeContext) -> PowerSeries:
    for p in primes:
        f = hecke_Tp(f, p, ctx)
        ctx = ctx.after(p)
    return f


def _compressed_B(k: int) -> EtaQuotient:
    E = build_B(1, 1, k)
    assert all(d % 24 == 0 for d in E.terms)
    return EtaQuotient({d // 24: r for d, r in E.terms.items()})


def family_B_context(k: int, modulus: int, valid_through: int | None = None) -> HeckeContext:
    """Weight and character of ``B_{1,1,k}`` read off its certificate."""
    cert = certify(build_B(1, 1, k))
    arg = cert.kronecker_argument
    return HeckeContext(cert.weight, lambda d, _a=arg: kronecker(_a, d), modulus, valid_through)


def family_B_series(k: int, P: int, modulus: int, compressed: bool = False) -> PowerSeries:
    """``B_{1,1,k}`` mod ``modulus`` below ``q^P`` (or ``G`` with ``B(q) = G(q^24)``)."""
    if compressed:
        return eta_quotient_expand(_compressed_B(k), P, modulus).fold().truncate(P)
    return eta_quotient_expand(build_B(1, 1, k), P, modulus).fold().truncate(P)


@dataclass
class NilpotencyReport:
    k: int
    primes: list[int]
    exponent: int
    precision: int
    steps: list[dict] = field(default_factory=list)
    steps_to_zero: int | None = None
    verdict: str = "not_reached"

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "primes": self.primes,
            "modulus_exponent": self.exponent,
            "precision": self.precision,
            "steps": self.steps,
            "steps_to_zero": self.steps_to_zero,
            "verdict": self.verdict,
        }


def nilpotency_probe(k: int, primes: Sequence[int], t: int, P: int, f: PowerSeries | None = None) -> NilpotencyReport:
    """Apply ``T_p`` for ``p`` in ``primes`` to ``B_{1,1,k}`` mod ``2^t``.

    ``steps_to_zero`` is the number of operators after which the series is
    identically zero within its validity window.  The verdict is
    ``"reached"``, ``"not_reached"`` (all primes used, still nonzero) or
    ``"window_exhausted"`` (the next operator had no room left).
    ``P`` counts coefficients of ``B`` itself, in powers of ``q``.
    """
    primes = [int(p) for p in primes]
    for p in primes:
        if not isprime(p) or math.gcd(p, 6) != 1:
            raise ValueError(f"{p} is not a prime coprime to 6")
    M = 2**t
    ctx = family_B_context(k, M)
    # work in the compressed variable: B(q) = G(q^24), validity shrinks identically
    Pg = (P - 1) // 24 + 1
    g = family_B_series(k, Pg, M, compressed=True) if f is None else f
    report = NilpotencyReport(k, primes, t, P)
    valid = P - 1
    for i in range(len(primes) + 1):
        nz = int(np.count_nonzero(g.coeffs))
        if i:
            report.steps.append({"prime": primes[i - 1], "valid_through": valid, "nonzero_coeff_count": nz})
        if nz == 0:
            report.steps_to_zero = i
            report.verdict = "reached"
            return report
        if i == len(primes):
            break
        p = primes[i]
        if valid < p:
            report.verdict = "window_exhausted"
            return report
        g = _tp(g.coeffs, p, _hecke_factor(p, ctx), M, g.precision - 1)
        valid //= p
    report.verdict = "not_reached"
    return report


@dataclass
class Cong1Report:
    primes: list[int]
    d: int
    k: int
    n_range: int
    checked: int = 0
    failures: int = 0
    failing_n: list[int] = field(default_factory=list)
    skipped_not_coprime: int = 0
    skipped_index_not_multiple_of_24: int = 0
    window_exhausted: bool = False
    required_index: int = 0

    @property
    def passed(self) -> bool:
        return not self.window_exhausted and self.failures == 0

    def to_dict(self) -> dict:
        return {
            "primes": self.primes,
            "d": self.d,
            "k": self.k,
            "n_range": self.n_range,
            "checked": self.checked,
            "failures": self.failures,
            "failing_n": self.failing_n[:20],
            "skipped_not_coprime": self.skipped_not_coprime,
            "skipped_index_not_multiple_of_24": self.skipped_index_not_multiple_of_24,
            "window_exhausted": self.window_exhausted,
            "required_index": str(self.required_index),
        }


def verify_cong1_instance(
    primes: Sequence[int],
    d: int,
    n_range: int,
    k: int | None = None,
    max_precision: int = 2_000_000,
    series: PowerSeries | None = None,
) -> Cong1Report:
    """Test ``F_k(p_1...p_r n) = 0 (mod 2^d)`` for ``0 <= n <= n_range``.

    ``F_k`` are the coefficients of ``B_{1,1,k}``.  Only ``n`` coprime to every
    listed prime with ``24 | p_1...p_r n`` are checked (other indices carry
    no information since ``B`` is a series in ``q^24``).  If the largest
    required coefficient lies beyond ``max_precision`` compressed
    coefficients, nothing is evaluated and ``window_exhausted`` is set.
    ``k`` defaults to ``max(1, d - 1)``, the smallest ``k`` whose modulus
    ``2^(k+1)`` covers ``2^d``.
    """
    if k is None:
        k = max(1, d - 1)
    primes = [int(p) for p in primes]
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if not isprime(p) or math.gcd(p, 6) != 1:
            raise ValueError(f"{p} is not a prime coprime to 6")
    if d < 1:
        raise ValueError("d must be >= 1")
    prod = math.prod(primes)
    rep = Cong1Report(primes, d, k, n_range)
    todo = []
    for n in range(n_range + 1):
        if any(math.gcd(n, p) != 1 for p in primes):
            rep.skipped_not_coprime += 1
            continue
        if (prod * n) % 24:
            rep.skipped_index_not_multiple_of_24 += 1
            continue
        todo.append(n)
    if not todo:
        return rep
    need = prod * max(todo) // 24
    rep.required_index = prod * max(todo)
    if need >= max_precision:
        rep.window_exhausted = True
        return rep
    M = 2**d
    if series is None or series.precision <= need:
        series = family_B_series(k, need + 1, M, compressed=True)
    for n in todo:
        rep.checked += 1
        if series[prod * n // 24] % M:
            rep.failures += 1
            rep.failing_n.append(n)
    return rep


def estimate_c(
    d: int,
    n_range: int = 500,
    k: int | None = None,
    max_len: int = 8,
    pool: Sequence[int] = PRIMES_COPRIME_TO_6,
    max_precision: int = 2_000_000,
) -> dict:
    """Smallest prime-list length (from ``pool``) with zero failures.

    Empirical only: the implied ``c = length - d`` is an observation over
    ``n <= n_range``, not a proof.  Stops at the first length whose
    coefficient window exceeds ``max_precision``.
    """
    if k is None:
        k = max(1, d - 1)
    runs = []
    result = {"d": d, "k": k, "n_range": n_range, "runs": runs, "length": None, "c_empirical": None,
              "window_exhausted_at": None}
    for L in range(max_len + 1):
        rep = verify_cong1_instance(pool[:L], d, n_range, k, max_precision)
        runs.append(rep.to_dict())
        if rep.window_exhausted:
            result["window_exhausted_at"] = L
            break
        if rep.failures == 0:
            result["length"] = L
            result["c_empirical"] = max(L - d, 0)
            break
    return result
