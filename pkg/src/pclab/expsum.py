"""Direct numerical evaluation of the exponential sums under study.

Every evaluator returns a SumEval carrying the complex value, the trivial
bound (sum of absolute weights, i.e. the term count for unimodular
weights), and, where the theory supplies one, an analytic comparator bound
together with the ratio |value| / bound.  The comparators carry unknown
implied constants, so ratios are reported and never hard-fail.

Phases go through the certified fractional-part kernels; accumulation is
exactly-rounded per fixed index chunk, which makes the results independent
of evaluation order and worker count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DEFAULT_CAPS, Caps, NonPositiveRho, OutOfRange, RangeTooLarge
from .exactpow import (
    as_exponent,
    as_ratio,
    frac_phase,
    frac_scaled_pow,
    scaled_floor_table,
)
from .primes import mangoldt_table, primes_in
from .prng import pm1_weights

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SumEval:
    kind: str
    params: dict
    value: complex
    trivial_bound: float
    analytic_bound: float | None
    ratio: float | None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "value": [self.value.real, self.value.imag],
            "trivial_bound": self.trivial_bound,
            "analytic_bound": self.analytic_bound,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class VinogradovParams:
    c: Fraction
    theta: Fraction
    delta: Fraction
    k: int
    rho: Fraction
    epsilon: Fraction


def vinogradov_params(c, theta, delta, epsilon=0) -> VinogradovParams:
    """Degree and exponent saving for one Weyl-sum configuration."""
    cf = as_exponent(c).as_fraction
    theta = as_ratio(theta)
    delta = as_ratio(delta)
    eps = Fraction(epsilon)
    k = vinogradov_degree(cf, theta, delta)
    return VinogradovParams(cf, theta, delta, k, vinogradov_saving_frac(k, eps), eps)


def vinogradov_degree(c, theta, delta) -> int:
    """floor(c + delta/theta) + 1, exactly in rational arithmetic."""
    cf = as_exponent(c).as_fraction
    theta = as_ratio(theta)
    delta = as_ratio(delta)
    if theta <= 0 or delta <= 0:
        raise OutOfRange("vinogradov_degree needs theta > 0 and delta > 0")
    v = cf + delta / theta
    return v.numerator // v.denominator + 1


def vinogradov_saving_frac(k: int, epsilon) -> Fraction:
    eps = Fraction(epsilon)
    if k < 3:
        raise NonPositiveRho(f"degree k={k} is below 3")
    if eps >= k - 2:
        raise NonPositiveRho(f"epsilon={float(eps)} >= k-2={k - 2}")
    if eps < 0:
        raise OutOfRange("epsilon must be >= 0")
    return (k - 2 - eps) / Fraction(k * (k + 1) * (2 * k - 1))


def vinogradov_saving(k: int, epsilon=0) -> Fraction:
    """The exponent saving (k-2-eps) / (k(k+1)(2k-1)) as an exact Fraction."""
    return vinogradov_saving_frac(k, epsilon)


def _e_sum(fracs, weights=None) -> complex:
    """Sum of w * e(frac); exactly rounded per fixed chunk, order stable."""
    re_parts: list[float] = []
    im_parts: list[float] = []
    n = len(fracs)
    for start in range(0, n, _CHUNK):
        f = np.asarray(fracs[start : start + _CHUNK], dtype=np.float64)
        ang = 2.0 * np.pi * f
        cr = np.cos(ang)
        ci = np.sin(ang)
        if weights is not None:
            w = np.asarray(weights[start : start + _CHUNK], dtype=np.float64)
            cr = cr * w
            ci = ci * w
        re_parts.append(math.fsum(cr.tolist()))
        im_parts.append(math.fsum(ci.tolist()))
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def weyl_sum(c, theta, delta, n_scale: int, *, epsilon=0, caps: Caps = DEFAULT_CAPS) -> SumEval:
    """Sum of e(z^c * N^delta) over z in (floor(N^theta), 2 floor(N^theta)].

    The comparator is N^(theta * (1 - rho)) with rho the Vinogradov saving
    at degree k = floor(c + delta/theta) + 1; requires k >= 3.
    """
    c = as_exponent(c)
    theta = as_ratio(theta)
    delta = as_ratio(delta)
    if n_scale < 2:
        raise OutOfRange("weyl_sum needs N >= 2")
    k = vinogradov_degree(c, theta, delta)
    rho = vinogradov_saving_frac(k, epsilon)
    from ._intmath import iroot

    m = iroot(n_scale ** theta.numerator, theta.denominator)
    if m > caps.weyl_terms:
        raise RangeTooLarge(f"N^theta = {m} terms exceeds cap {caps.weyl_terms}")
    fracs = [frac_phase(z, c, n_scale, delta, caps=caps).value for z in range(m + 1, 2 * m + 1)]
    value = _e_sum(fracs)
    bound = math.exp(float(theta) * (1.0 - float(rho)) * math.log(n_scale))
    params = {
        "c": str(c),
        "theta": f"{theta.numerator}/{theta.denominator}",
        "delta": f"{delta.numerator}/{delta.denominator}",
        "N": n_scale,
        "k": k,
        "rho": float(rho),
        "epsilon": float(epsilon),
        "terms": m,
    }
    return SumEval("weyl", params, value, float(m), bound, abs(value) / bound)


def prime_expsum(x: int, c, h: int, d: int, *, caps: Caps = DEFAULT_CAPS) -> SumEval:
    """Sum of e(h * p^c / d) over primes p <= x.

    The comparator x^(1 - sigma(c)) applies for c >= 11/5 and is omitted
    below that.
    """
    c = as_exponent(c)
    if h < 1 or d < 1:
        raise OutOfRange("prime_expsum needs h >= 1 and d >= 1")
    ps = primes_in(0, x, caps=caps)
    fracs = [frac_scaled_pow(int(p), c, h, d, caps=caps).value for p in ps.tolist()]
    value = _e_sum(fracs)
    n_terms = float(len(fracs))
    bound = None
    if c.as_fraction >= Fraction(11, 5):
        from .constants import regime_constants

        sigma = regime_constants(c.as_fraction).sigma
        bound = math.exp((1.0 - float(sigma)) * math.log(x)) if x >= 2 else 1.0
    ratio = abs(value) / bound if bound else None
    params = {"x": x, "c": str(c), "h": h, "d": d, "terms": len(fracs)}
    return SumEval("prime", params, value, n_terms, bound, ratio)


@dataclass(frozen=True)
class TrilinearBound:
    value: float
    x_ge_dl: bool  # the comparator's precondition X >= DL


def trilinear_bound(d_scale: int, l_scale: int, m_scale: int, x_size: float) -> TrilinearBound:
    """D*L*M * ((DL)^(-1/2) + (X/(D*L*M^2))^(1/6)) * log(2*D*L).

    Flags (without failing) when the precondition X >= DL is violated.
    """
    if d_scale < 1 or l_scale < 1 or m_scale < 1:
        raise OutOfRange("scales must be >= 1")
    dl = d_scale * l_scale
    dlm = dl * m_scale
    value = dlm * (dl ** -0.5 + (x_size / (dlm * m_scale)) ** (1.0 / 6.0)) * math.log(2 * dl)
    return TrilinearBound(value, x_size >= dl)


def _trilinear_weights(kind: str, d_scale: int, m_scale: int, l_scale: int, seed: int):
    """Weight vectors (c_d, a_m, b_l) over the dyadic ranges.

    unit: all ones.  interval: b_l is the characteristic function of
    (L, 3L/2], the other two are ones.  pm1: independent +-1 weights from
    the splitmix64 stream, in d-then-m-then-l order.
    """
    if kind == "unit":
        return [1.0] * d_scale, [1.0] * m_scale, [1.0] * l_scale
    if kind == "interval":
        b = [1.0 if l <= l_scale + (l_scale // 2) else 0.0 for l in range(l_scale + 1, 2 * l_scale + 1)]
        return [1.0] * d_scale, [1.0] * m_scale, b
    if kind == "pm1":
        stream = pm1_weights(seed, d_scale + m_scale + l_scale)
        cd = [float(w) for w in stream[:d_scale]]
        am = [float(w) for w in stream[d_scale : d_scale + m_scale]]
        bl = [float(w) for w in stream[d_scale + m_scale :]]
        return cd, am, bl
    raise OutOfRange(f"unknown weight kind {kind!r}")


def trilinear_x_size(h: int, d_scale: int, l_scale: int, m_scale: int, c) -> float:
    """X = h * D^(-1) * L^c * M^c, the comparator's size parameter."""
    cf = float(as_exponent(c))
    return h / d_scale * l_scale ** cf * m_scale ** cf


def trilinear_sum(
    d_scale: int,
    m_scale: int,
    l_scale: int,
    h: int,
    c,
    weights: str = "unit",
    *,
    seed: int = 0,
    caps: Caps = DEFAULT_CAPS,
) -> SumEval:
    """The weighted triple sum of e(h * d^(-1) * (l*m)^c) over dyadic ranges.

    d ~ D, m ~ M, l ~ L all mean the half-open ranges (D, 2D] etc.  The
    comparator is trilinear_bound at X = h * D^(-1) * L^c * M^c.
    """
    c = as_exponent(c)
    if h < 1:
        raise OutOfRange("trilinear_sum needs h >= 1")
    n_terms = d_scale * m_scale * l_scale
    if n_terms > caps.trilinear_terms:
        raise RangeTooLarge(f"{n_terms} terms exceeds cap {caps.trilinear_terms}")
    cd, am, bl = _trilinear_weights(weights, d_scale, m_scale, l_scale, seed)

    # phase {h (l m)^c / d} from one certified fixed-point root per product
    shift = 64
    products = sorted(
        {m * l for m in range(m_scale + 1, 2 * m_scale + 1) for l in range(l_scale + 1, 2 * l_scale + 1)}
    )
    table = scaled_floor_table(products, c, shift, caps)

    prod_weight: dict[int, float] = {}
    for mi, m in enumerate(range(m_scale + 1, 2 * m_scale + 1)):
        for li, l in enumerate(range(l_scale + 1, 2 * l_scale + 1)):
            w = am[mi] * bl[li]
            if w:
                key = m * l
                prod_weight[key] = prod_weight.get(key, 0.0) + w

    re_parts: list[float] = []
    im_parts: list[float] = []
    for di, dd in enumerate(range(d_scale + 1, 2 * d_scale + 1)):
        if not cd[di]:
            continue
        fracs = []
        ws = []
        mod = dd << shift
        for n_val, w in prod_weight.items():
            tag, u = table[n_val]
            if tag == "exact":
                fr = (h * u) % dd / dd
            else:
                a = (h * u) % mod
                if a + h > mod:  # straddles an integer: resolve exactly
                    fr = frac_scaled_pow(n_val, c, h, dd, caps=caps).value
                else:
                    fr = (a + h / 2.0) / mod
            fracs.append(fr)
            ws.append(w)
        part = _e_sum(fracs, ws)
        re_parts.append(cd[di] * part.real)
        im_parts.append(cd[di] * part.imag)
    value = complex(math.fsum(re_parts), math.fsum(im_parts))

    trivial = (
        math.fsum(abs(w) for w in cd)
        * math.fsum(abs(w) for w in am)
        * math.fsum(abs(w) for w in bl)
    )
    x_size = trilinear_x_size(h, d_scale, l_scale, m_scale, c)
    comparator = trilinear_bound(d_scale, l_scale, m_scale, x_size)
    params = {
        "D": d_scale,
        "M": m_scale,
        "L": l_scale,
        "h": h,
        "c": str(c),
        "weights": weights,
        "seed": seed,
        "X": x_size,
        "x_ge_dl": comparator.x_ge_dl,
    }
    ratio = abs(value) / comparator.value if comparator.value > 0 else None
    return SumEval("trilinear", params, value, trivial, comparator.value, ratio)


def triple_sum(x: int, d_scale: int, h_count: int | None, c, *, caps: Caps = DEFAULT_CAPS) -> SumEval:
    """Sum over h <= H, d ~ D of |sum over n ~ x of Lambda(n) e(h n^c / d)|.

    h_count=None selects the preset H = D * ceil(log^3 x) (usually far too
    large to evaluate; the cap will object).  The comparator is
    D * x / log^3 x.
    """
    c = as_exponent(c)
    if x < 2:
        raise OutOfRange("triple_sum needs x >= 2")
    if x > caps.triple_x:
        raise RangeTooLarge(f"x={x} exceeds cap {caps.triple_x}")
    if h_count is None:
        h_count = d_scale * math.ceil(math.log(x) ** 3)
    table = mangoldt_table(2 * x, caps=caps)
    sel = (table.ns > x) & (table.ns <= 2 * x)
    ns = table.ns[sel].tolist()
    logs = table.logs[sel]
    evals = h_count * d_scale * x
    if evals > caps.triple_term_evals:
        raise RangeTooLarge(f"H*D*x = {evals} exceeds cap {caps.triple_term_evals}")

    shift = 64
    fp = scaled_floor_table(ns, c, shift, caps)
    abs_parts: list[float] = []
    for h in range(1, h_count + 1):
        for dd in range(d_scale + 1, 2 * d_scale + 1):
            mod = dd << shift
            fracs = []
            for n_val in ns:
                tag, u = fp[n_val]
                if tag == "exact":
                    fr = (h * u) % dd / dd
                else:
                    a = (h * u) % mod
                    if a + h > mod:
                        fr = frac_scaled_pow(n_val, c, h, dd, caps=caps).value
                    else:
                        fr = (a + h / 2.0) / mod
                fracs.append(fr)
            inner = _e_sum(fracs, logs)
            abs_parts.append(abs(inner))
    total = math.fsum(abs_parts)
    value = complex(total, 0.0)
    psi_mass = float(math.fsum(logs.tolist()))
    trivial = h_count * d_scale * psi_mass
    bound = d_scale * x / math.log(x) ** 3
    params = {"x": x, "D": d_scale, "H": h_count, "c": str(c), "prime_powers": len(ns)}
    return SumEval("triple", params, value, trivial, bound, total / bound)
