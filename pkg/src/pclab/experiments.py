"""Empirical censuses and distribution measurements over floor(p^c), p <= x.

Work is partitioned by prime-range chunks; per-chunk partial counts are
combined in fixed chunk order, so worker count never changes a result.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DEFAULT_CAPS, Caps, OutOfRange, Overflow
from .exactpow import RationalExponent, as_exponent, floor_pow, floor_pow_batch, frac_scaled_pow
from .factor import factor_signature, is_prime
from .primes import primes_in

_CHUNK = 1 << 13


@dataclass(frozen=True)
class CensusReport:
    x: int
    c: RationalExponent
    R: int
    count: int
    pi_x: int
    eta_hat: float  # count * log^2 x / x, the measured density surrogate

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "c": str(self.c),
            "R": self.R,
            "count": self.count,
            "pi_x": self.pi_x,
            "eta_hat": self.eta_hat,
        }


@dataclass(frozen=True)
class SquarefreeReport:
    x: int
    c: RationalExponent
    count: int
    pi_x: int
    ratio: float
    deviation: float  # |ratio - 6/pi^2|

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "c": str(self.c),
            "count": self.count,
            "pi_x": self.pi_x,
            "ratio": self.ratio,
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class PsPrimeReport:
    x: int
    c: RationalExponent
    count: int
    pi_x: int
    balog_ref: float  # x / (c log^2 x)

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "c": str(self.c),
            "count": self.count,
            "pi_x": self.pi_x,
            "balog_ref": self.balog_ref,
        }


@dataclass(frozen=True)
class ResidueHistogram:
    x: int
    c: RationalExponent
    d: int
    counts: tuple

    @property
    def pi_x(self) -> int:
        return int(sum(self.counts))

    def to_json(self) -> dict:
        return {"x": self.x, "c": str(self.c), "d": self.d, "counts": list(self.counts)}


@dataclass(frozen=True)
class LevelReport:
    x: int
    c: RationalExponent
    D: int
    f_model: str
    E: float
    normalized: float  # E * log^2 N / N with N = pi(x)
    all_residues: bool = False

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "c": str(self.c),
            "D": self.D,
            "f_model": self.f_model,
            "E": self.E,
            "normalized": self.normalized,
            "all_residues": self.all_residues,
        }


@dataclass(frozen=True)
class DiscrepancyReport:
    x: int
    c: RationalExponent
    h: int
    d: int
    n_points: int
    value: float

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "c": str(self.c),
            "h": self.h,
            "d": self.d,
            "n_points": self.n_points,
            "value": self.value,
        }


def members(x: int, c, *, caps: Caps = DEFAULT_CAPS) -> tuple[np.ndarray, np.ndarray]:
    """(primes p <= x, floor(p^c)) as int64 arrays; certified floors."""
    c = as_exponent(c)
    if x < 2:
        raise OutOfRange("need x >= 2")
    ps = primes_in(0, x, caps=caps)
    top_bits = float(c) * math.log2(x)
    if top_bits >= caps.member_bits and floor_pow(int(ps[-1]), c, caps).bit_length() >= caps.member_bits:
        raise Overflow(f"floor(p^c) reaches 2^{caps.member_bits} at p={int(ps[-1])}")
    if top_bits < 50:
        return ps, floor_pow_batch(ps, c, caps)
    vals = np.array([floor_pow(int(p), c, caps) for p in ps.tolist()], dtype=object)
    if top_bits < 62:
        vals = vals.astype(np.int64)
    return ps, vals


def _chunks(seq, size=_CHUNK):
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _map_ordered(func, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items))


def _omega_counts_chunk(args):
    member_list, r_cap = args
    hit = 0
    for m in member_list:
        if factor_signature(m).omega_big <= r_cap:
            hit += 1
    return hit


def _squarefree_chunk(member_list):
    hit = 0
    for m in member_list:
        if factor_signature(m).squarefree:
            hit += 1
    return hit


def _prime_chunk(member_list):
    hit = 0
    for m in member_list:
        if is_prime(m):
            hit += 1
    return hit


def almost_prime_census(x: int, c, R: int, *, jobs: int = 1, caps: Caps = DEFAULT_CAPS) -> CensusReport:
    """count = |{p <= x : Omega(floor(p^c)) <= R}| and its density surrogate."""
    if R < 1:
        raise OutOfRange("need R >= 1")
    c = as_exponent(c)
    ps, vals = members(x, c, caps=caps)
    parts = _map_ordered(
        _omega_counts_chunk, [(ch, R) for ch in _chunks([int(v) for v in vals])], jobs
    )
    count = int(sum(parts))
    eta_hat = count * math.log(x) ** 2 / x
    return CensusReport(x, c, R, count, int(ps.size), eta_hat)


SQUAREFREE_DENSITY = 6.0 / math.pi ** 2


def squarefree_census(x: int, c, *, jobs: int = 1, caps: Caps = DEFAULT_CAPS) -> SquarefreeReport:
    c = as_exponent(c)
    ps, vals = members(x, c, caps=caps)
    parts = _map_ordered(_squarefree_chunk, _chunks([int(v) for v in vals]), jobs)
    count = int(sum(parts))
    ratio = count / ps.size
    return SquarefreeReport(x, c, count, int(ps.size), ratio, abs(ratio - SQUAREFREE_DENSITY))


def ps_prime_count(x: int, c, *, jobs: int = 1, caps: Caps = DEFAULT_CAPS) -> PsPrimeReport:
    """Pi_c(x) = |{p <= x : floor(p^c) prime}|, with Balog's normalization."""
    c = as_exponent(c)
    ps, vals = members(x, c, caps=caps)
    parts = _map_ordered(_prime_chunk, _chunks([int(v) for v in vals]), jobs)
    count = int(sum(parts))
    balog_ref = x / (float(c) * math.log(x) ** 2)
    return PsPrimeReport(x, c, count, int(ps.size), balog_ref)


def residue_histogram(x: int, c, d: int, *, caps: Caps = DEFAULT_CAPS) -> ResidueHistogram:
    if d < 1:
        raise OutOfRange("need d >= 1")
    c = as_exponent(c)
    _, vals = members(x, c, caps=caps)
    if vals.dtype == np.int64:
        counts = np.bincount(vals % d, minlength=d)
        return ResidueHistogram(x, c, d, tuple(int(v) for v in counts))
    counts = [0] * d
    for v in vals:
        counts[int(v) % d] += 1
    return ResidueHistogram(x, c, d, tuple(counts))


def level_error(
    x: int,
    c,
    D: int,
    f_model: str = "unit",
    *,
    all_residues: bool = False,
    caps: Caps = DEFAULT_CAPS,
) -> LevelReport:
    """E = sum over d <= D of the worst residue-class deviation.

    For each modulus d the deviation |count(s, d) - f(d) N / d| is maximized
    over s coprime to d (over all s with all_residues=True); f is the
    expected multiplicative model, identically 1 by default.
    """
    if D < 1:
        raise OutOfRange("need D >= 1")
    if f_model != "unit":
        raise OutOfRange(f"unknown f model {f_model!r}")
    c = as_exponent(c)
    _, vals = members(x, c, caps=caps)
    n = len(vals)
    use_np = getattr(vals, "dtype", None) == np.int64
    per_d: list[float] = []
    for d in range(1, D + 1):
        if use_np:
            counts = np.bincount(vals % d, minlength=d).astype(np.int64)
        else:
            counts = np.zeros(d, dtype=np.int64)
            for v in vals:
                counts[int(v) % d] += 1
        if all_residues:
            sel = counts
        else:
            coprime = np.gcd(np.arange(d, dtype=np.int64), d) == 1
            sel = counts[coprime]
        expected = n / d  # f(d) = 1
        per_d.append(float(np.max(np.abs(sel - expected))) if sel.size else 0.0)
    e_val = math.fsum(per_d)
    normalized = e_val * math.log(n) ** 2 / n if n > 1 else 0.0
    return LevelReport(x, c, D, f_model, e_val, normalized, all_residues)


def star_discrepancy_points(points) -> float:
    """Exact star discrepancy of a finite point multiset in [0, 1)."""
    pts = sorted(float(p) for p in points)
    n = len(pts)
    if n == 0:
        raise OutOfRange("need at least one point")
    worst = 0.0
    for i, p in enumerate(pts, start=1):
        worst = max(worst, i / n - p, p - (i - 1) / n)
    return worst


def star_discrepancy(
    x: int, c, h: int, d: int, *, tol: float = 1e-12, caps: Caps = DEFAULT_CAPS
) -> DiscrepancyReport:
    """Star discrepancy of {h * p^c / d mod 1 : p <= x}."""
    if h < 0 or d < 1:
        raise OutOfRange("need h >= 0 and d >= 1")
    c = as_exponent(c)
    ps = primes_in(0, x, caps=caps)
    if ps.size == 0:
        raise OutOfRange("no primes <= x")
    pts = [frac_scaled_pow(int(p), c, h, d, tol=tol, caps=caps).value for p in ps.tolist()]
    return DiscrepancyReport(x, c, h, d, len(pts), star_discrepancy_points(pts))
