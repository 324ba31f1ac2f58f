"""Arithmetic density of abar_t(n) modulo M, and congruence scanning.

``delta_r(M; X) = #{0 <= n <= X : abar_t(n) = r (mod M)} / X``, counted
literally (note the ``X + 1`` indices over a denominator of ``X``).

Streams are produced by the residue backend; a stream can be persisted in a
small binary file::

    offset 0   u64 LE  t
    offset 8   u64 LE  M
    offset 16  u64 LE  P   (number of residues)
    offset 24  P residues, unsigned little-endian, each in the smallest of
               1, 2, 4 or 8 bytes that holds M - 1
"""
from __future__ import annotations

import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from sympy import factorint

from .partition_funcs import coeffs_abar_mod
from .series_core import PowerSeries, PrecisionError

__all__ = [
    "DEFAULT_CHECKPOINTS",
    "LARGE_CHECKPOINT",
    "DensityReport",
    "CongruenceCandidate",
    "theorem_coverage",
    "abar_stream",
    "density_report",
    "density_reports",
    "congruence_scan",
    "primitive_candidates",
    "save_stream",
    "load_stream",
    "StreamCache",
]

DEFAULT_CHECKPOINTS = (10**3, 10**4, 10**5)
LARGE_CHECKPOINT = 10**6

_HEADER = struct.Struct("<QQQ")


def _prime_power_base(M: int) -> int | None:
    f = factorint(M)
    return next(iter(f)) if len(f) == 1 else None


def theorem_coverage(t: int, M: int) -> str | None:
    """Name of the density-1 result that covers ``(t, M)``, or None.

    * ``"2-power"``: ``t = 3^a m`` with ``gcd(m, 6) = 1`` and ``M = 2^k``
    * ``"3-power"``: same ``t``, ``M = 3^k``
    * ``"p>=5"``: every prime factor of ``t`` is ``>= 5`` and ``M`` is a
      power of one of them
    """
    if t < 2 or M < 2:
        return None
    p = _prime_power_base(M)
    if p is None:
        return None
    ft = factorint(t)
    if 2 not in ft and p in (2, 3):
        return f"{p}-power"
    if all(q >= 5 for q in ft) and p in ft:
        return "p>=5"
    return None


@dataclass
class DensityReport:
    t: int
    modulus: int
    residue: int
    checkpoints: list[int]
    counts: list[int]
    residue_counts: list[list[int]] = field(default_factory=list)
    theorem: str | None = None

    @property
    def tag(self) -> str:
        return "theorem-covered" if self.theorem else "exploratory"

    @property
    def ratios(self) -> list[Fraction]:
        return [Fraction(c, X) for c, X in zip(self.counts, self.checkpoints)]

    def decimal_ratios(self, digits: int = 12) -> list[str]:
        getcontext().prec = digits + 4
        return [str(round(Decimal(r.numerator) / Decimal(r.denominator), digits)) for r in self.ratios]

    def to_dict(self) -> dict:
        return {
            "t": str(self.t),
            "modulus": str(self.modulus),
            "residue": str(self.residue),
            "tag": self.tag,
            "theorem": self.theorem,
            "checkpoints": [
                {
                    "X": str(X),
                    "count": str(c),
                    "ratio": f"{r.numerator}/{r.denominator}",
                    "ratio_decimal": dec,
                }
                for X, c, r, dec in zip(self.checkpoints, self.counts, self.ratios, self.decimal_ratios())
            ],
        }

    def csv_rows(self) -> list[tuple[str, str, str]]:
        return [(str(X), str(c), dec) for X, c, dec in zip(self.checkpoints, self.counts, self.decimal_ratios())]


@dataclass(frozen=True)
class CongruenceCandidate:
    A: int
    B: int
    modulus: int
    tested_through: int
    witness_n: int | None = None

    @property
    def status(self) -> str:
        if self.witness_n is None:
            return f"verified-up-to-{self.tested_through}"
        return f"refuted-at-{self.witness_n}"

    @property
    def verified(self) -> bool:
        return self.witness_n is None

    @property
    def witness_index(self) -> int | None:
        return None if self.witness_n is None else self.A * self.witness_n + self.B

    def to_dict(self) -> dict:
        return {
            "A": str(self.A),
            "B": str(self.B),
            "modulus": str(self.modulus),
            "tested_through": str(self.tested_through),
            "status": self.status,
            "witness_n": None if self.witness_n is None else str(self.witness_n),
        }


def abar_stream(t: int, M: int, P: int, cache: "StreamCache | None" = None) -> PowerSeries:
    """``abar_t(n) mod M`` for ``n < P``, through the cache when one is given."""
    if cache is not None:
        return cache.get(t, M, P)
    return coeffs_abar_mod(t, M, P)


def density_report(
    t: int,
    M: int,
    r: int = 0,
    checkpoints: Sequence[int] = DEFAULT_CHECKPOINTS,
    *,
    mode: str = "exploratory",
    stream: PowerSeries | None = None,
    cache: "StreamCache | None" = None,
) -> DensityReport:
    """Counts of ``n <= X`` with ``abar_t(n) = r (mod M)`` at each checkpoint ``X``.

    ``mode="theorem"`` refuses ``(t, M)`` outside the proven density-1
    statements; the report's ``tag`` says which case applies either way.
    """
    if M < 2:
        raise ValueError("modulus must be >= 2")
    if not 0 <= r < M:
        raise ValueError(f"residue {r} outside [0, {M})")
    checkpoints = sorted(int(X) for X in checkpoints)
    if not checkpoints or checkpoints[0] < 1:
        raise ValueError("checkpoints must be positive")
    theorem = theorem_coverage(t, M)
    if mode == "theorem" and theorem is None:
        raise ValueError(f"(t={t}, M={M}) is not covered by a density-1 theorem; use exploratory mode")
    if mode not in ("theorem", "exploratory"):
        raise ValueError(f"unknown mode {mode!r}")
    Xmax = checkpoints[-1]
    if stream is None:
        stream = abar_stream(t, M, Xmax + 1, cache)
    if stream.precision <= Xmax:
        raise PrecisionError(f"stream known below {stream.precision}, checkpoint {Xmax} requested")
    if stream.modulus is None or stream.modulus % M:
        raise ValueError("stream must be a residue stream whose modulus is a multiple of M")
    vals = np.asarray(stream.coeffs[: Xmax + 1])
    if stream.modulus != M:
        vals = vals % M
    hits = np.cumsum(vals == r)
    counts = [int(hits[X]) for X in checkpoints]
    residue_counts = []
    if M <= 1 << 20:
        v64 = vals.astype(np.int64)
        residue_counts = [np.bincount(v64[: X + 1], minlength=M).tolist() for X in checkpoints]
    return DensityReport(t, M, r, checkpoints, counts, residue_counts, theorem)


def _density_job(args):
    t, M, r, checkpoints = args
    return density_report(t, M, r, checkpoints)


def density_reports(jobs: Sequence[tuple[int, int]], r: int = 0, checkpoints=DEFAULT_CHECKPOINTS, workers: int = 1):
    """One report per ``(t, M)``; ``workers > 1`` spreads them over processes.

    Jobs sharing ``t`` are served from a single stream modulo the lcm of
    their moduli when run in-process.
    """
    jobs = [(int(t), int(M)) for t, M in jobs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_density_job, [(t, M, r, checkpoints) for t, M in jobs]))
    P = max(checkpoints) + 1
    by_t: dict[int, int] = {}
    for t, M in jobs:
        by_t[t] = math.lcm(by_t.get(t, 1), M)
    streams = {t: coeffs_abar_mod(t, L, P) for t, L in by_t.items()}
    return [density_report(t, M, r, checkpoints, stream=streams[t]) for t, M in jobs]


def congruence_scan(
    t: int, M: int, A_max: int, X: int, *, stream: PowerSeries | None = None
) -> list[CongruenceCandidate]:
    """Every progression ``An + B`` (``1 <= A <= A_max``, ``0 <= B < A``) tested up to index ``X``.

    A progression is refuted by the first ``n`` with ``abar_t(An + B)``
    not divisible by ``M``; otherwise it is only verified up to ``X``.
    """
    if A_max < 1 or X < 0:
        raise ValueError("need A_max >= 1 and X >= 0")
    if stream is None:
        stream = coeffs_abar_mod(t, M, X + 1)
    if stream.precision <= X:
        raise PrecisionError(f"stream known below {stream.precision}, scan needs index {X}")
    vals = np.asarray(stream.coeffs[: X + 1]) % M
    out = []
    for A in range(1, A_max + 1):
        for B in range(A):
            if B > X:
                out.append(CongruenceCandidate(A, B, M, X))
                continue
            nz = np.flatnonzero(vals[B::A])
            out.append(CongruenceCandidate(A, B, M, X, int(nz[0]) if nz.size else None))
    return out


def primitive_candidates(cands: Sequence[CongruenceCandidate]) -> list[CongruenceCandidate]:
    """Verified progressions not contained in another verified progression of the list."""
    verified = [c for c in cands if c.verified]
    keep = []
    for c in verified:
        implied = any(
            o is not c and c.A % o.A == 0 and c.B % o.A == o.B and o.A < c.A for o in verified
        )
        if not implied:
            keep.append(c)
    return keep


# ---------------------------------------------------------------------------
# stream files


def _word_size(M: int) -> int:
    for size in (1, 2, 4, 8):
        if M - 1 < 1 << (8 * size):
            return size
    raise ValueError("modulus too large for the stream file format")


_DTYPES = {1: "<u1", 2: "<u2", 4: "<u4", 8: "<u8"}


def save_stream(path, t: int, stream: PowerSeries) -> None:
    if stream.modulus is None:
        raise ValueError("only residue streams can be saved")
    M, P = stream.modulus, stream.precision
    data = np.asarray(stream.coeffs.astype(np.uint64)).astype(_DTYPES[_word_size(M)])
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(t, M, P))
        fh.write(data.tobytes())


def load_stream(path) -> tuple[int, PowerSeries]:
    with open(path, "rb") as fh:
        t, M, P = _HEADER.unpack(fh.read(_HEADER.size))
        raw = fh.read()
    size = _word_size(M)
    if len(raw) != P * size:
        raise ValueError(f"stream file {path} is truncated: expected {P * size} bytes, got {len(raw)}")
    vals = np.frombuffer(raw, dtype=_DTYPES[size]).astype(np.int64 if M < 2**31 else object)
    return t, PowerSeries(vals, modulus=M)


class StreamCache:
    """Directory of stream files keyed by ``(t, M, P)``.

    A request for ``(t, M, P)`` is served by any cached file with the same
    ``t``, ``M`` and at least ``P`` residues.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, t: int, M: int, P: int) -> Path:
        return self.directory / f"abar_t{t}_M{M}_P{P}.bin"

    def get(self, t: int, M: int, P: int) -> PowerSeries:
        best = None
        for f in self.directory.glob(f"abar_t{t}_M{M}_P*.bin"):
            have = int(f.stem.rsplit("_P", 1)[1])
            if have >= P and (best is None or have < best[0]):
                best = (have, f)
        if best is not None:
            t_file, s = load_stream(best[1])
            if t_file != t or s.modulus != M:
                raise ValueError(f"cache file {best[1]} does not match its name")
            return s.truncate(P)
        s = coeffs_abar_mod(t, M, P)
        save_stream(self.path(t, M, P), t, s)
        return s
