"""Partition generating functions and the hook-length oracle.

Coefficient streams:

* ``c_t(n)``: t-core partitions, ``f_t^t / f_1``
* ``abar_t(n)``: ``phi(-q^t)^t / phi(-q) = f_2 f_t^(2t) / (f_1^2 f_{2t}^t)``

where ``f_k = (q^k; q^k)_inf``.  Both are built from sparse generators only,
so even the residue streams at ``P = 10^6`` stay cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .series_core import (
    PowerSeries,
    euler_product,
    one,
    phi_neg,
    ps_div,
    ps_mul,
)

__all__ = [
    "Partition",
    "HookDiagram",
    "partitions",
    "hook_numbers",
    "is_t_core",
    "brute_tcore_count",
    "BRUTE_FORCE_LIMIT",
    "coeffs_ct",
    "coeffs_abar",
    "coeffs_abar_mod",
    "partition_series",
]

BRUTE_FORCE_LIMIT = 60


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    @cached_property
    def hooks(self) -> "HookDiagram":
        return hook_numbers(self)


@dataclass(frozen=True)
class HookDiagram:
    partition: Partition
    hooks: tuple[tuple[int, ...], ...]

    def values(self) -> list[int]:
        return [h for row in self.hooks for h in row]


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n``, largest first part first (reverse lexicographic)."""
    if n < 0:
        return
    if n == 0:
        yield Partition(())
        return

    def rec(remaining, cap, prefix):
        if remaining == 0:
            yield Partition(tuple(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            prefix.append(part)
            yield from rec(remaining - part, part, prefix)
            prefix.pop()

    yield from rec(n, n, [])


def hook_numbers(p: Partition) -> HookDiagram:
    """Hook number of every node: arm + leg + 1."""
    conj = p.conjugate().parts
    rows = tuple(
        tuple((row - j - 1) + (conj[j] - i - 1) + 1 for j in range(row))
        for i, row in enumerate(p.parts)
    )
    return HookDiagram(p, rows)


def is_t_core(p: Partition, t: int) -> bool:
    if t < 2:
        raise ValueError("t must be >= 2")
    return all(h % t for row in hook_numbers(p).hooks for h in row)


def brute_tcore_count(n: int, t: int) -> int:
    """Count t-core partitions of ``n`` by enumerating every partition."""
    if t < 2:
        raise ValueError("t must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force enumeration is limited to n <= {BRUTE_FORCE_LIMIT}")
    return sum(1 for p in partitions(n) if is_t_core(p, t))


def _check_t(t):
    if int(t) != t or t < 2:
        raise ValueError(f"t must be an integer >= 2, got {t}")


def partition_series(P: int, modulus: int | None = None) -> PowerSeries:
    """``1/f_1 = sum p(n) q^n``."""
    return ps_div(one(P, modulus), euler_product(1, P, modulus))


def coeffs_ct(t: int, P: int, modulus: int | None = None) -> PowerSeries:
    """``sum c_t(n) q^n = f_t^t / f_1``."""
    _check_t(t)
    ft = euler_product(t, P, modulus)
    num = one(P, modulus)
    for _ in range(t):
        num = ps_mul(num, ft)
    return ps_div(num, euler_product(1, P, modulus))


def _abar_f_form(t: int, P: int, modulus) -> PowerSeries:
    num = euler_product(2, P, modulus)
    ft = euler_product(t, P, modulus)
    for _ in range(2 * t):
        num = ps_mul(num, ft)
    f1 = euler_product(1, P, modulus)
    f2t = euler_product(2 * t, P, modulus)
    out = ps_div(ps_div(num, f1), f1)
    for _ in range(t):
        out = ps_div(out, f2t)
    return out


def _abar_phi_form(t: int, P: int, modulus) -> PowerSeries:
    num = one(P, modulus)
    ph = phi_neg(t, P, modulus)
    for _ in range(t):
        num = ps_mul(num, ph)
    return ps_div(num, phi_neg(1, P, modulus))


def coeffs_abar(t: int, P: int, form: str = "f", modulus: int | None = None) -> PowerSeries:
    """``abar_t(n)`` for ``n < P``.

    ``form="f"`` uses the eta-product expression, ``form="phi"`` the theta
    quotient; ``form="both"`` computes both and raises if they disagree.
    """
    _check_t(t)
    if form == "f":
        return _abar_f_form(t, P, modulus)
    if form == "phi":
        return _abar_phi_form(t, P, modulus)
    if form == "both":
        a, b = _abar_f_form(t, P, modulus), _abar_phi_form(t, P, modulus)
        if a != b:
            raise ArithmeticError(f"theta and eta forms of abar_{t} disagree")
        return a
    raise ValueError(f"unknown form {form!r}")


def coeffs_abar_mod(t: int, M: int, P: int) -> PowerSeries:
    """``abar_t(n) mod M`` computed entirely in residue arithmetic."""
    if M < 2:
        raise ValueError("modulus must be >= 2")
    return coeffs_abar(t, P, form="phi", modulus=M)
