"""Truncated formal power series over the integers or over Z/MZ.

A :class:`PowerSeries` stands for ``q^(e24/24) * sum(c[n] q^n)`` with the
coefficients ``c[0..P-1]`` known and everything from ``q^P`` on unknown.
Unknown coefficients are never reported as zero; asking for one raises
:class:`PrecisionError`.

Two coefficient backends share one code path:

* exact: numpy ``object`` arrays of Python ints,
* residue: ``int64`` arrays in ``[0, M)`` (``object`` again for huge ``M``).

The expensive operations in this package are products and quotients by
``f_k = (q^k; q^k)_inf`` and ``phi(-q^k)``, which have ``O(sqrt(P))``
nonzero terms.  Multiplication and division therefore switch to a
sparse-times-dense kernel whenever one operand is sparse.
"""
from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SeriesError",
    "PrecisionError",
    "ModulusMismatchError",
    "NotInvertibleError",
    "PowerSeries",
    "EtaQuotient",
    "ps_add",
    "ps_sub",
    "ps_mul",
    "ps_inv",
    "ps_div",
    "ps_pow",
    "euler_product",
    "phi_neg",
    "eta_quotient_expand",
    "reduce_mod",
    "series_equal_mod",
    "one",
]


class SeriesError(ValueError):
    """Base class for series arithmetic failures."""


class PrecisionError(SeriesError, IndexError):
    """A coefficient beyond the known precision was requested."""


class ModulusMismatchError(SeriesError):
    pass


class NotInvertibleError(SeriesError, ZeroDivisionError):
    pass


# residues below this bound are kept in int64: a product of two residues
# plus an accumulator stays below 2**63
_INT64_MODULUS_LIMIT = 2**31
_INT64_MAX = 2**63 - 1
# sparse kernel is used when the sparse operand has at most P/_SPARSE_RATIO terms
_SPARSE_RATIO = 8
_DIV_BLOCK = 256


def _dtype(modulus):
    if modulus is not None and modulus < _INT64_MODULUS_LIMIT:
        return np.int64
    return object


def _as_array(values, modulus) -> np.ndarray:
    dt = _dtype(modulus)
    if isinstance(values, np.ndarray) and values.dtype == dt:
        arr = values.copy()
    else:
        arr = np.array([int(v) for v in values], dtype=object)
        if modulus is not None:
            arr = arr % modulus
        arr = arr.astype(dt)
    if modulus is not None:
        arr %= modulus
    return arr


class PowerSeries:
    """Immutable truncated q-series ``q^(e24/24) * sum_{n<P} c[n] q^n``."""

    __slots__ = ("_c", "_modulus", "_e24")

    def __init__(self, coeffs: Iterable[int] | np.ndarray, modulus: int | None = None, e24: int = 0):
        if modulus is not None:
            modulus = int(modulus)
            if modulus < 2:
                raise ValueError(f"modulus must be >= 2, got {modulus}")
        arr = _as_array(coeffs, modulus)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a power series needs at least one known coefficient")
        arr.setflags(write=False)
        self._c = arr
        self._modulus = modulus
        self._e24 = int(e24)

    @classmethod
    def _wrap(cls, arr: np.ndarray, modulus, e24: int) -> "PowerSeries":
        # trusted constructor: arr already reduced and of the right dtype
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._c = arr
        obj._modulus = modulus
        obj._e24 = int(e24)
        return obj

    @property
    def precision(self) -> int:
        return int(self._c.size)

    @property
    def modulus(self) -> int | None:
        return self._modulus

    @property
    def e24(self) -> int:
        return self._e24

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only view of the known coefficients."""
        return self._c

    def __len__(self) -> int:
        return self.precision

    def __getitem__(self, n):
        if isinstance(n, slice):
            start, stop, step = n.start or 0, n.stop, n.step or 1
            if stop is None:
                stop = self.precision
            if start < 0 or stop < 0 or step < 1:
                raise IndexError("only forward, nonnegative slices are supported")
            if stop > self.precision:
                raise PrecisionError(
                    f"series known through q^{self.precision - 1}, slice asks up to q^{stop - 1}"
                )
            return [int(x) for x in self._c[start:stop:step]]
        n = int(n)
        if n < 0:
            raise IndexError("negative coefficient index")
        if n >= self.precision:
            raise PrecisionError(f"series known through q^{self.precision - 1}, asked for q^{n}")
        return int(self._c[n])

    def tolist(self) -> list[int]:
        return [int(x) for x in self._c]

    def __repr__(self) -> str:
        head = ", ".join(str(int(x)) for x in self._c[:8])
        more = ", ..." if self.precision > 8 else ""
        mod = f", modulus={self._modulus}" if self._modulus else ""
        e = f", e24={self._e24}" if self._e24 else ""
        return f"PowerSeries([{head}{more}], precision={self.precision}{mod}{e})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (
            self._modulus == other._modulus
            and self._e24 == other._e24
            and self.precision == other.precision
            and bool(np.all(self._c == other._c))
        )

    __hash__ = None

    # operators delegate to the module functions
    def __add__(self, other):
        return ps_add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return ps_sub(self, _coerce(other, self))

    def __rsub__(self, other):
        return ps_sub(_coerce(other, self), self)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return ps_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return NotImplemented

    def __truediv__(self, other):
        return ps_div(self, other)

    def __pow__(self, e: int):
        return ps_pow(self, e)

    def scale(self, c: int) -> "PowerSeries":
        """Multiply every coefficient by the integer ``c``."""
        arr = self._c * _centered(c, self._modulus) if self._modulus else self._c * int(c)
        if self._modulus:
            arr %= self._modulus
        return PowerSeries._wrap(arr, self._modulus, self._e24)

    def truncate(self, precision: int) -> "PowerSeries":
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if precision > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {precision}")
        return PowerSeries._wrap(self._c[:precision].copy(), self._modulus, self._e24)

    def dilate(self, k: int, precision: int | None = None) -> "PowerSeries":
        """Substitute ``q -> q^k``.

        A series known below ``q^P`` becomes known below ``q^(kP)``.  The
        exponent prefactor scales by ``k`` as well.
        """
        if k < 1:
            raise ValueError("dilation factor must be >= 1")
        full = k * self.precision
        if precision is None:
            precision = full
        if precision > full:
            raise PrecisionError(f"dilation by {k} is only known below q^{full}")
        out = np.zeros(precision, dtype=self._c.dtype)
        src = self._c[: (precision - 1) // k + 1]
        out[: src.size * k : k] = src
        return PowerSeries._wrap(out, self._modulus, self._e24 * k)

    def shift(self, s: int) -> "PowerSeries":
        """Multiply by ``q^s`` on the integer part (``s >= 0``), keeping e24."""
        if s < 0:
            raise ValueError("use fold() to remove leading zeros")
        out = np.zeros(self.precision + s, dtype=self._c.dtype)
        out[s:] = self._c
        return PowerSeries._wrap(out, self._modulus, self._e24)

    def fold(self) -> "PowerSeries":
        """Absorb a whole-number exponent prefactor into the coefficients.

        Requires ``24 | e24``.  A negative prefactor is only foldable when the
        corresponding leading coefficients vanish.
        """
        if self._e24 % 24:
            raise SeriesError(f"prefactor q^({self._e24}/24) is not an integer power of q")
        s = self._e24 // 24
        if s >= 0:
            out = self.shift(s)
            return PowerSeries._wrap(out._c.copy(), self._modulus, 0)
        s = -s
        if s >= self.precision or np.any(self._c[:s] != 0):
            raise SeriesError("negative prefactor leaves a polar part; cannot fold")
        return PowerSeries._wrap(self._c[s:].copy(), self._modulus, 0)

    def nonzero_terms(self) -> list[tuple[int, int]]:
        idx = np.flatnonzero(self._c)
        return [(int(j), int(self._c[j])) for j in idx]

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        return {
            "e24": self._e24,
            "modulus": self._modulus,
            "precision": self.precision,
            "coeffs": [str(int(x)) for x in self._c],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PowerSeries":
        coeffs = [int(x) for x in d["coeffs"]]
        if len(coeffs) != int(d["precision"]):
            raise ValueError("precision does not match the number of coefficients")
        return cls(coeffs, modulus=d.get("modulus"), e24=int(d.get("e24", 0)))

    @classmethod
    def from_json(cls, text: str) -> "PowerSeries":
        return cls.from_dict(json.loads(text))


class EtaQuotient:
    """Finite product ``prod eta(delta z)^r_delta``.

    Repeated ``delta`` keys passed as pairs are merged by adding exponents;
    keys whose exponent cancels to zero are dropped.
    """

    __slots__ = ("terms", "level_candidate")

    def __init__(self, terms, level_candidate: int | None = None):
        items = terms.items() if isinstance(terms, dict) else terms
        merged: dict[int, int] = {}
        for delta, r in items:
            delta, r = int(delta), int(r)
            if delta < 1:
                raise ValueError(f"eta argument must be a positive integer, got {delta}")
            merged[delta] = merged.get(delta, 0) + r
        merged = {d: r for d, r in sorted(merged.items()) if r != 0}
        if not merged:
            raise ValueError("eta quotient has no nonzero exponents")
        if level_candidate is not None:
            bad = [d for d in merged if level_candidate % d]
            if bad:
                raise ValueError(f"level candidate {level_candidate} not divisible by {bad}")
        self.terms: dict[int, int] = merged
        self.level_candidate = level_candidate

    def __repr__(self):
        return f"EtaQuotient({self.terms})"

    def __eq__(self, other):
        if not isinstance(other, EtaQuotient):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @property
    def e24(self) -> int:
        return sum(d * r for d, r in self.terms.items())

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        return EtaQuotient(list(self.terms.items()) + list(other.terms.items()))

    def __pow__(self, e: int) -> "EtaQuotient":
        return EtaQuotient({d: r * e for d, r in self.terms.items()})

    def to_dict(self) -> dict:
        return {"terms": {str(d): r for d, r in self.terms.items()}}


# ---------------------------------------------------------------------------
# kernels


def _centered(c: int, modulus) -> int:
    c = int(c) % modulus
    return c - modulus if c > modulus // 2 else c


def _acc_budget(modulus, max_abs_coeff: int) -> int:
    """How many ``acc += c*x`` updates an int64 accumulator absorbs before reduction."""
    step = max(1, max_abs_coeff) * (modulus - 1)
    return max(1, (_INT64_MAX - 2 * modulus) // max(1, step) - 1)


def _check_compatible(a: PowerSeries, b: PowerSeries):
    if a.modulus != b.modulus:
        raise ModulusMismatchError(f"modulus mismatch: {a.modulus} vs {b.modulus}")


def _sparse_terms(s: PowerSeries, limit: int, start: int = 0):
    idx = np.flatnonzero(s.coeffs[start:limit]) + start
    return [(int(j), int(s.coeffs[j])) for j in idx]


def _mul_sparse_dense(terms, dense: np.ndarray, P: int, modulus) -> np.ndarray:
    out = np.zeros(P, dtype=dense.dtype)
    if modulus is None or dense.dtype == object:
        for j, c in terms:
            if j >= P:
                break
            out[j:] += c * dense[: P - j]
        if modulus is not None:
            out %= modulus
        return out
    cs = [(j, _centered(c, modulus)) for j, c in terms if j < P]
    budget = _acc_budget(modulus, max((abs(c) for _, c in cs), default=1))
    pending = 0
    for j, c in cs:
        if c == 1:
            out[j:] += dense[: P - j]
        elif c == -1:
            out[j:] -= dense[: P - j]
        else:
            out[j:] += c * dense[: P - j]
        pending += 1
        if pending >= budget:
            out %= modulus
            pending = 0
    out %= modulus
    return out


def _mul_dense(a: np.ndarray, b: np.ndarray, P: int, modulus) -> np.ndarray:
    a, b = a[:P], b[:P]
    if modulus is not None and a.dtype == np.int64:
        if min(a.size, b.size) * (modulus - 1) ** 2 < _INT64_MAX:
            out = np.convolve(a, b)[:P] % modulus
            return out.astype(np.int64)
        out = np.convolve(a.astype(object), b.astype(object))[:P] % modulus
        return out.astype(np.int64)
    out = np.convolve(a, b)[:P]
    if modulus is not None:
        out %= modulus
    return out


def _unit_inverse(c0: int, modulus) -> int:
    if modulus is None:
        if c0 not in (1, -1):
            raise NotInvertibleError(f"constant term {c0} is not a unit in Z")
        return c0
    if math.gcd(c0, modulus) != 1:
        raise NotInvertibleError(f"constant term {c0} is not a unit mod {modulus}")
    return pow(c0, -1, modulus)


def _divide(num: np.ndarray, den: PowerSeries, P: int, modulus) -> np.ndarray:
    """Solve ``den * b = num`` through ``q^(P-1)`` by the forward recurrence.

    ``b[n] = (num[n] - sum_{j>=1} den[j] b[n-j]) / den[0]``.  Terms of ``den``
    at distance ``>= _DIV_BLOCK`` only reach finished blocks, so they are
    applied as vectorized shifted updates; the short-range terms run
    sequentially on Python ints.
    """
    inv0 = _unit_inverse(int(den.coeffs[0]), modulus)
    B = _DIV_BLOCK
    terms = _sparse_terms(den, min(P, den.precision), start=1)
    if modulus is not None:
        terms = [(j, _centered(c, modulus)) for j, c in terms]
    near = [(j, c) for j, c in terms if j < B]
    far = [(j, c) for j, c in terms if j >= B]
    acc = num[:P].copy()
    done: list[int] = []
    done_arr = np.zeros(P, dtype=acc.dtype)
    use_int64 = acc.dtype == np.int64
    budget = _acc_budget(modulus, max((abs(c) for _, c in far), default=1)) if use_int64 else 0
    for s in range(0, P, B):
        e = min(P, s + B)
        pending = 0
        for j, c in far:
            if j >= e:
                break
            lo = max(s, j)
            seg = acc[lo:e]
            # far terms only read finished values (n - j < s)
            src = done_arr[lo - j : e - j]
            if c == 1:
                seg -= src
            elif c == -1:
                seg += src
            else:
                seg -= c * src
            if use_int64:
                pending += 1
                if pending >= budget:
                    seg_all = acc[s:e]
                    seg_all %= modulus
                    pending = 0
        block = [int(x) for x in acc[s:e]]
        for i in range(e - s):
            n = s + i
            v = block[i]
            for j, c in near:
                if j > n:
                    break
                v -= c * done[n - j]
            v *= inv0
            if modulus is not None:
                v %= modulus
            done.append(v)
        done_arr[s:e] = np.array(done[s:e], dtype=object).astype(acc.dtype)
    return done_arr


# ---------------------------------------------------------------------------
# public operations


def one(precision: int, modulus: int | None = None) -> PowerSeries:
    c = np.zeros(precision, dtype=_dtype(modulus))
    c[0] = 1
    return PowerSeries._wrap(c, modulus, 0)


def _coerce(x, like: PowerSeries) -> PowerSeries:
    if isinstance(x, PowerSeries):
        return x
    if isinstance(x, (int, np.integer)):
        c = np.zeros(like.precision, dtype=like.coeffs.dtype)
        c[0] = int(x) % like.modulus if like.modulus else int(x)
        return PowerSeries._wrap(c, like.modulus, like.e24)
    raise TypeError(f"cannot combine PowerSeries with {type(x).__name__}")


def _align(a: PowerSeries, b: PowerSeries) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Bring two series to a common exponent prefactor for additive work."""
    diff = a.e24 - b.e24
    if diff % 24:
        raise SeriesError(f"prefactors q^({a.e24}/24) and q^({b.e24}/24) differ by a non-integer power")
    s = diff // 24
    ac, bc = a.coeffs, b.coeffs
    e24 = min(a.e24, b.e24)
    if s > 0:
        ac = np.concatenate([np.zeros(s, dtype=ac.dtype), ac])
    elif s < 0:
        bc = np.concatenate([np.zeros(-s, dtype=bc.dtype), bc])
    P = min(ac.size, bc.size)
    return ac[:P], bc[:P], P, e24


def ps_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    _check_compatible(a, b)
    ac, bc, P, e24 = _align(a, b)
    out = ac + bc
    if a.modulus:
        out %= a.modulus
    return PowerSeries._wrap(out, a.modulus, e24)


def ps_sub(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    _check_compatible(a, b)
    ac, bc, P, e24 = _align(a, b)
    out = ac - bc
    if a.modulus:
        out %= a.modulus
    return PowerSeries._wrap(out, a.modulus, e24)


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Truncated product; precision is the smaller of the two."""
    _check_compatible(a, b)
    P = min(a.precision, b.precision)
    M = a.modulus
    na = int(np.count_nonzero(a.coeffs[:P]))
    nb = int(np.count_nonzero(b.coeffs[:P]))
    if min(na, nb) * _SPARSE_RATIO <= P:
        sparse, dense = (a, b) if na <= nb else (b, a)
        out = _mul_sparse_dense(_sparse_terms(sparse, P), dense.coeffs[:P], P, M)
    else:
        out = _mul_dense(a.coeffs, b.coeffs, P, M)
    return PowerSeries._wrap(out, M, a.e24 + b.e24)


def ps_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """``a / b`` with ``b[0]`` a unit; same result as ``a * ps_inv(b)``."""
    _check_compatible(a, b)
    P = min(a.precision, b.precision)
    out = _divide(a.coeffs, b, P, a.modulus)
    return PowerSeries._wrap(out, a.modulus, a.e24 - b.e24)


def ps_inv(a: PowerSeries) -> PowerSeries:
    """Multiplicative inverse through the precision of ``a``."""
    return ps_div(one(a.precision, a.modulus), a)


def ps_pow(a: PowerSeries, e: int) -> PowerSeries:
    """``a**e`` by repeated squaring; negative ``e`` inverts first."""
    e = int(e)
    if e < 0:
        return ps_pow(ps_inv(a), -e)
    result = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else ps_mul(result, base)
        e >>= 1
        if e:
            base = ps_mul(base, base)
    if result is None:
        return one(a.precision, a.modulus)
    return result


def euler_product(k: int, P: int, modulus: int | None = None) -> PowerSeries:
    """``(q^k; q^k)_inf`` through ``q^(P-1)`` from the pentagonal number theorem."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if P < 1:
        raise ValueError("precision must be >= 1")
    c = np.zeros(P, dtype=_dtype(modulus))
    c[0] = 1
    j = 1
    while True:
        g1 = k * j * (3 * j - 1) // 2
        if g1 >= P:
            break
        sign = -1 if j % 2 else 1
        c[g1] = sign
        g2 = k * j * (3 * j + 1) // 2
        if g2 < P:
            c[g2] = sign
        j += 1
    if modulus is not None:
        c %= modulus
    return PowerSeries._wrap(c, modulus, 0)


def phi_neg(k: int, P: int, modulus: int | None = None) -> PowerSeries:
    """``phi(-q^k) = sum_n (-1)^n q^(k n^2)`` through ``q^(P-1)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if P < 1:
        raise ValueError("precision must be >= 1")
    c = np.zeros(P, dtype=_dtype(modulus))
    c[0] = 1
    n = 1
    while k * n * n < P:
        c[k * n * n] = -2 if n % 2 else 2
        n += 1
    if modulus is not None:
        c %= modulus
    return PowerSeries._wrap(c, modulus, 0)


def _product_of_sparse(factors, P: int, modulus) -> np.ndarray:
    """Multiply ``1`` by a list of (sparse series, exponent) pairs."""
    acc = one(P, modulus)
    den_parts = []
    for s, r in factors:
        if r > 0:
            for _ in range(r):
                acc = ps_mul(acc, s)
        elif r < 0:
            den_parts.append((s, -r))
    for s, r in den_parts:
        for _ in range(r):
            acc = ps_div(acc, s)
    return acc.coeffs


def eta_quotient_expand(E: EtaQuotient, P: int, modulus: int | None = None) -> PowerSeries:
    """Expand ``prod eta(delta z)^r`` as ``q^(e24/24) * prod (q^delta;q^delta)^r``.

    When all ``delta`` share a factor ``g`` the product is a series in
    ``q^g``; it is computed at precision ``ceil(P/g)`` and dilated.
    """
    if P < 1:
        raise ValueError("precision must be >= 1")
    g = 0
    for d in E.terms:
        g = math.gcd(g, d)
    Pg = -(-P // g)
    factors = [(euler_product(d // g, Pg, modulus), r) for d, r in E.terms.items()]
    base = PowerSeries._wrap(_product_of_sparse(factors, Pg, modulus), modulus, 0)
    tail = base.dilate(g, P)
    return PowerSeries._wrap(tail.coeffs.copy(), modulus, E.e24)


def reduce_mod(a: PowerSeries, M: int) -> PowerSeries:
    M = int(M)
    if M < 2:
        raise ValueError("modulus must be >= 2")
    if a.modulus is not None and a.modulus % M:
        raise ModulusMismatchError(f"cannot reduce a series mod {a.modulus} to mod {M}")
    arr = a.coeffs.astype(object) % M
    return PowerSeries._wrap(arr.astype(_dtype(M)), M, a.e24)


def series_equal_mod(a: PowerSeries, b: PowerSeries, M: int, through: int) -> bool:
    """True iff the coefficients agree mod ``M`` up to and including ``q^through``.

    ``through`` is measured in the frame of the smaller prefactor after the
    two series are aligned.
    """
    for s in (a, b):
        if s.modulus is not None and s.modulus % M:
            raise ModulusMismatchError(f"series mod {s.modulus} cannot be compared mod {M}")
    diff = a.e24 - b.e24
    if diff % 24:
        raise SeriesError("prefactors differ by a non-integer power of q")
    s = diff // 24
    pa = a.precision + max(s, 0)
    pb = b.precision + max(-s, 0)
    if through >= min(pa, pb):
        raise PrecisionError(f"comparison through q^{through} needs more precision than {min(pa, pb)}")
    ac = np.concatenate([np.zeros(max(s, 0), dtype=object), a.coeffs.astype(object)])[: through + 1]
    bc = np.concatenate([np.zeros(max(-s, 0), dtype=object), b.coeffs.astype(object)])[: through + 1]
    return bool(np.all((ac - bc) % M == 0))


def from_terms(terms: Sequence[tuple[int, int]], P: int, modulus: int | None = None) -> PowerSeries:
    """Build a series from ``(exponent, coefficient)`` pairs, zero elsewhere."""
    c = np.zeros(P, dtype=object)
    for j, v in terms:
        if 0 <= j < P:
            c[j] += int(v)
    return PowerSeries(c, modulus=modulus)
