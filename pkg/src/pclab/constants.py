"""Exact evaluation of the explicit constants, inequalities and thresholds.

Inputs are coerced to exact rationals (floats convert via their exact
binary value) and every verdict is computed in Fraction arithmetic with a
fixed strictness margin, so re-running at higher precision can never flip a
verdict at the demanded tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidR, NoCrossing, OutOfRange
from .expsum import vinogradov_saving_frac

F = Fraction

# verdicts require this much slack
STRICTNESS = F(1, 10**12)

# Greaves sieve constants
_DELTA = {2: F("0.044560"), 3: F("0.074267"), 4: F("0.103974")}
_DELTA_TAIL = F("0.124820")

# admissible (R, c_R) pairs for the near-one regime
_PAIRS = (
    (8, F("1.0521")),
    (9, F("1.1056")),
    (10, F("1.1308")),
    (11, F("1.1494")),
    (12, F("1.1649")),
    (13, F("1.1780")),
    (14, F("1.1891")),
    (15, F("1.1988")),
    (16, F("1.2073")),
    (17, F("1.2148")),
    (18, F("1.2214")),
    (19, F("1.2273")),
)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return F(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            a, _, b = s.partition("/")
            return F(int(a), int(b))
        return F(s)
    if isinstance(x, float):
        return F(x)  # exact binary value
    raise OutOfRange(f"cannot interpret {x!r} as a rational")


def greaves_delta_frac(r: int) -> Fraction:
    if r < 2:
        raise InvalidR(f"need R >= 2, got {r}")
    return _DELTA.get(r, _DELTA_TAIL)


def greaves_delta(r: int) -> float:
    """The sieve constant delta_R: 0.044560 / 0.074267 / 0.103974 for
    R = 2, 3, 4 and 0.124820 for R >= 5."""
    return float(greaves_delta_frac(r))


def greaves_min_R(rho) -> int:
    """Least R >= 2 with R - delta_R > rho."""
    rho = _frac(rho)
    if rho <= 0:
        raise OutOfRange("need rho > 0")
    for r in (2, 3, 4):
        if r - _DELTA[r] > rho:
            return r
    base = rho + _DELTA_TAIL
    r = base.numerator // base.denominator + 1
    return max(5, r)


@dataclass(frozen=True)
class AdmissiblePair:
    R: int
    c_R: float

    @property
    def c_R_exact(self) -> Fraction:
        return dict(_PAIRS)[self.R]


def admissible_pairs() -> list[AdmissiblePair]:
    """The stored (R, c_R) table for R = 8..19."""
    return [AdmissiblePair(r, float(c)) for r, c in _PAIRS]


@dataclass(frozen=True)
class InequalityReport:
    id: str
    lhs: float
    rhs: float
    slack: float      # rhs - lhs
    holds: bool       # slack > strictness margin, decided exactly

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
        }


def _report(ineq_id: str, lhs: Fraction, rhs: Fraction) -> InequalityReport:
    slack = rhs - lhs
    return InequalityReport(ineq_id, float(lhs), float(rhs), float(slack), slack > STRICTNESS)


@dataclass(frozen=True)
class FeasibilityParams:
    """Parameters (c, theta, kappa) of the near-one feasibility system."""

    c: Fraction
    theta: Fraction
    kappa: Fraction

    def __post_init__(self):
        if self.theta <= 0 or self.kappa <= 0:
            raise OutOfRange("need theta > 0 and kappa > 0")

    @property
    def alpha(self) -> Fraction:
        return max(F(1, 20), self.theta + self.kappa)


def feasibility_params(c, theta, kappa) -> FeasibilityParams:
    return FeasibilityParams(_frac(c), _frac(theta), _frac(kappa))


def feasibility_check(params: FeasibilityParams) -> list[InequalityReport]:
    """The eleven inequalities of the near-one reduction, evaluated exactly."""
    c, th, a = params.c, params.theta, params.alpha
    items = (
        ("i", 2 * th + 2 * a, c),
        ("ii", c + 5 * th + 2 * a, F(2)),
        ("iii", F(365, 3) + 32 * c + 147 * th, F(174)),
        ("iv", F(8, 3) + c + 2 * th, F(4)),
        ("v", 2 + c + 4 * th, F(4)),
        ("vi", 1 + th - 2 * a, F(1)),
        ("vii", 1 + th / 2 - a, F(1)),
        ("viii", F(2, 3) + th, F(1)),
        ("ix", 1 - c / 2 + 3 * th / 2, F(1)),
        ("x", 2 * th + (1 + a) / 2, c),
        ("xi", 2 * c + 6 * th + a, F(3)),
    )
    return [_report(i, lhs, rhs) for i, lhs, rhs in items]


def _theta_uppers(c: Fraction, kappa: Fraction) -> tuple[list[Fraction], list[Fraction]]:
    """Upper bounds on theta for the two alpha pieces of the system.

    Piece A has alpha = 1/20 (valid while theta <= 1/20 - kappa); piece B
    has alpha = theta + kappa.  Every inequality is an upper bound on theta
    on both pieces; (vi) and (vii) are vacuous on piece B.
    """
    a_list = [
        (c - F(1, 10)) / 2,                       # (i)
        (2 - c - F(1, 10)) / 5,                   # (ii)
        (174 - F(365, 3) - 32 * c) / 147,         # (iii)
        (4 - F(8, 3) - c) / 2,                    # (iv)
        (2 - c) / 4,                              # (v)
        F(1, 10),                                 # (vi), (vii)
        F(1, 3),                                  # (viii)
        c / 3,                                    # (ix)
        (c - F(21, 40)) / 2,                      # (x)
        (3 - 2 * c - F(1, 20)) / 6,               # (xi)
    ]
    b_list = [
        (c - 2 * kappa) / 4,                      # (i)
        (2 - c - 2 * kappa) / 7,                  # (ii)
        (174 - F(365, 3) - 32 * c) / 147,         # (iii)
        (4 - F(8, 3) - c) / 2,                    # (iv)
        (2 - c) / 4,                              # (v)
        F(1, 3),                                  # (viii)
        c / 3,                                    # (ix)
        (2 * c - 1 - kappa) / 5,                  # (x)
        (3 - 2 * c - kappa) / 7,                  # (xi)
    ]
    return a_list, b_list


def feasible_theta_interval(
    c,
    R: int | None = None,
    kappa=F(1, 10**9),
    greaves_degree: bool = False,
) -> tuple[Fraction, Fraction] | None:
    """An open theta interval on which all eleven inequalities hold, or None.

    The default constraint set caps theta below 1/R; with greaves_degree the
    cap is replaced by the sieve degree condition theta > c / (R - delta_R).
    Computed analytically: every constraint is linear in theta on each of
    the two alpha pieces.
    """
    c = _frac(c)
    kappa = _frac(kappa)
    uppers_a, uppers_b = _theta_uppers(c, kappa)
    lo = F(0)
    cap = None
    if R is not None:
        if not 2 <= R:
            raise InvalidR(f"need R >= 2, got {R}")
        if greaves_degree:
            lo = c / (R - greaves_delta_frac(R))
        else:
            cap = F(1, R)
    split = F(1, 20) - kappa
    # piece A: (lo, min(uppers_a, split, cap))
    hi_a = min(uppers_a + ([cap] if cap else []) + [split])
    if hi_a > lo:
        return (lo, hi_a)
    # piece B: (max(lo, split), min(uppers_b, cap))
    lo_b = max(lo, split)
    hi_b = min(uppers_b + ([cap] if cap else []))
    if hi_b > lo_b:
        return (lo_b, hi_b)
    return None


def max_c_feasible(
    R: int,
    tol: float = 1e-6,
    *,
    kappa=F(1, 10**9),
    greaves_degree: bool = False,
) -> float:
    """Supremum (within tol) of c admitting a feasible theta.

    kappa is a fixed positive guard standing in for the limit kappa -> 0+.
    """
    if not 8 <= R <= 19:
        raise InvalidR(f"need R in [8, 19], got {R}")
    if tol <= 0:
        raise OutOfRange("tol must be positive")
    tol = _frac(tol)

    def ok(c: Fraction) -> bool:
        return feasible_theta_interval(c, R, kappa, greaves_degree) is not None

    lo, hi = F(1) + F(1, 10**6), F(2)
    if not ok(lo):
        raise NoCrossing(f"no feasible c just above 1 for R={R}")
    if ok(hi):
        raise NoCrossing("feasible at the upper end of the bisection range")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


@dataclass(frozen=True)
class RegimeConstants:
    """sigma, beta and the shifted exponents for a fixed c."""

    c: Fraction
    coeff: int       # 179 below c = 3, else 88
    sigma: Fraction
    beta: Fraction
    c1: Fraction     # c + sigma
    c2: Fraction     # c - 1 + 3 sigma

    def to_json(self) -> dict:
        def pair(q: Fraction):
            return f"{q.numerator}/{q.denominator}", float(q)

        out: dict = {"coeff": self.coeff}
        for name in ("c", "sigma", "beta", "c1", "c2"):
            exact, mirror = pair(getattr(self, name))
            out[name] = exact
            out[f"{name}_float"] = mirror
        return out


def regime_constants(c) -> RegimeConstants:
    """sigma = 1/(16c^2 + coeff*c - 1.15/c); beta = 47 sigma (coeff 179)
    or 20 sigma (coeff 88, used from c = 3 up)."""
    c = _frac(c)
    if c <= 1:
        raise OutOfRange("need c > 1")
    coeff, bmul = (179, 47) if c < 3 else (88, 20)
    sigma = 1 / (16 * c * c + coeff * c - F(23, 20) / c)
    beta = bmul * sigma
    return RegimeConstants(c, coeff, sigma, beta, c + sigma, c - 1 + 3 * sigma)


@dataclass(frozen=True)
class RBound:
    real_bound: float
    integer_R: int
    exact_bound: Fraction

    def to_json(self) -> dict:
        return {
            "real_bound": self.real_bound,
            "exact_bound": f"{self.exact_bound.numerator}/{self.exact_bound.denominator}",
            "integer_R": self.integer_R,
        }


def r_bound(c) -> RBound:
    """The cubic bound 16c^3 + coeff*c^2 on the almost-prime order, plus the
    least admissible integer R from the sieve constants.

    In exact arithmetic c/sigma + 1.15 equals the cubic identically; this is
    asserted on every call.
    """
    c = _frac(c)
    if c < F(11, 5):
        raise OutOfRange("need c >= 11/5")
    rc = regime_constants(c)
    exact = 16 * c**3 + rc.coeff * c**2
    assert c / rc.sigma + F(23, 20) == exact
    integer_r = greaves_min_R(c / rc.sigma + F(1, 10**9))
    return RBound(float(exact), integer_r, exact)


def _large_regime_lhs(ineq_id: str, rc: RegimeConstants) -> tuple[Fraction, Fraction]:
    """(comparison_lhs, display_value) for the large-c inequalities.

    Normal form is "lhs < display": the display must exceed sigma (or
    2 sigma); beta-cap is beta < 1/10.
    """
    sigma, beta, c1, c2 = rc.sigma, rc.beta, rc.c1, rc.c2
    if ineq_id == "3.2":
        t = F(1, 2) - beta
        disp = (c1 * t**3 - t**4) / ((c1 + t) * (c1 + 1 - 2 * beta) * (2 * c1 + t))
        return sigma, disp
    if ineq_id == "3.3":
        disp = (F(8, 27) * c2 - F(16, 81)) / ((c2 + F(4, 3)) * (c2 + 2) * (2 * c2 + 2))
        return 2 * sigma, disp
    if ineq_id == "3.4":
        u = 1 - 2 * beta
        disp = (c2 * u**3 - u**4) / (
            (c2 + 2 - 4 * beta) * (c2 + 3 - 6 * beta) * (2 * c2 + 3 - 6 * beta)
        )
        return 2 * sigma, disp
    if ineq_id == "beta-cap":
        return beta, F(1, 10)
    raise OutOfRange(f"unknown inequality id {ineq_id!r}")


_REGIME_IDS = ("3.2", "3.3", "3.4", "beta-cap")


def regime_inequalities(c) -> list[InequalityReport]:
    """Exact verdicts for the three large-c inequalities and the beta cap."""
    rc = regime_constants(c)
    return [_report(i, *_large_regime_lhs(i, rc)) for i in _REGIME_IDS]


def regime_inequality_holds(ineq_id: str, c) -> bool:
    rc = regime_constants(c)
    lhs, rhs = _large_regime_lhs(ineq_id, rc)
    return rhs - lhs > STRICTNESS


@dataclass(frozen=True)
class ThresholdResult:
    value: float
    multi_crossing: bool

    def to_json(self) -> dict:
        return {"value": self.value, "multi_crossing": self.multi_crossing}


def threshold(ineq_id: str, lo, hi, tol: float = 1e-3, *, scan: int = 100) -> ThresholdResult:
    """Least c (within tol) at which the inequality begins to hold.

    A scan-point pre-pass checks single-crossing; with several sign changes
    the smallest upward crossing is bisected and flagged.  NoCrossing is
    raised when the indicator is constant on [lo, hi].
    """
    lo, hi, tol = _frac(lo), _frac(hi), _frac(tol)
    if not lo < hi:
        raise OutOfRange("need lo < hi")
    if tol <= 0:
        raise OutOfRange("tol must be positive")
    xs = [lo + (hi - lo) * i / (scan - 1) for i in range(scan)]
    vals = [regime_inequality_holds(ineq_id, x) for x in xs]
    transitions = [i for i in range(1, scan) if vals[i] != vals[i - 1]]
    upward = [i for i in transitions if vals[i]]
    if not upward:
        state = "already holds" if vals[0] else "never holds"
        raise NoCrossing(f"{ineq_id} {state} on [{float(lo)}, {float(hi)}]")
    i = upward[0]
    a, b = xs[i - 1], xs[i]
    while b - a > tol:
        mid = (a + b) / 2
        if regime_inequality_holds(ineq_id, mid):
            b = mid
        else:
            a = mid
    return ThresholdResult(float((a + b) / 2), len(transitions) > 1)


def weyl_margin_minorants(t, c, epsilon) -> tuple[Fraction, Fraction]:
    """(m1(t), m2(t)): the two window minorants at t, exactly.

    m1(t) = (c1 t^3 - (1+eps) t^4) / ((c1+t)(c1+2t)(2c1+t)),
    m2(t) = ((c2+2eps) t^3 - (1+eps) t^4)
            / ((c2+2t+2eps)(c2+3t+2eps)(2c2+3t+4eps)),
    with c1 = c + sigma and c2 = c - 1 + 3 sigma.
    """
    t = _frac(t)
    eps = _frac(epsilon)
    if not 0 <= t <= 1:
        raise OutOfRange("need t in [0, 1]")
    rc = regime_constants(c)
    c1, c2 = rc.c1, rc.c2
    m1 = (c1 * t**3 - (1 + eps) * t**4) / ((c1 + t) * (c1 + 2 * t) * (2 * c1 + t))
    m2 = ((c2 + 2 * eps) * t**3 - (1 + eps) * t**4) / (
        (c2 + 2 * t + 2 * eps) * (c2 + 3 * t + 2 * eps) * (2 * c2 + 3 * t + 4 * eps)
    )
    return m1, m2


_DELTA_FLOOR = F(1, 10**12)  # positive clamp for window Delta values


@dataclass(frozen=True)
class MarginReport:
    c: float
    epsilon: float
    sigma: float
    beta: float
    type1_worst: float
    type1_at: tuple
    type1_ok: bool
    type2_worst: float
    type2_at: tuple
    type2_ok: bool
    minorant1: float
    minorant1_ok: bool
    minorant2: float
    minorant2_ok: bool
    ok: bool  # both direct grid margin families non-negative

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "epsilon": self.epsilon,
            "sigma": self.sigma,
            "beta": self.beta,
            "type1_worst": self.type1_worst,
            "type1_at": list(self.type1_at),
            "type1_ok": self.type1_ok,
            "type2_worst": self.type2_worst,
            "type2_at": list(self.type2_at),
            "type2_ok": self.type2_ok,
            "minorant1": self.minorant1,
            "minorant1_ok": self.minorant1_ok,
            "minorant2": self.minorant2,
            "minorant2_ok": self.minorant2_ok,
            "ok": self.ok,
        }


def _window_margins(c, eps, th_lo, th_hi, delta_lo_fn, delta_hi_fn, target, grid):
    """Worst Theta*rho - target over a window, tracked exactly.

    Candidates: a uniform Theta grid, both window endpoints, and every
    degree-transition point (where floor(c + Delta_max/Theta) jumps), each
    paired with the Delta extremes and midpoint.  The binding corner is
    always at Delta_max, where the degree is largest.
    """
    cf = c
    cands = {th_lo, th_hi}
    for i in range(1, grid):
        cands.add(th_lo + (th_hi - th_lo) * i / grid)
    # degree transitions at Delta_max: c + Delta_max/Theta is a monotone
    # function of Theta crossing integers at explicitly solvable points
    probe = []
    for th in (th_lo, th_hi):
        probe.append(cf + delta_hi_fn(th) / th)
    j_lo = math.floor(float(min(probe)))
    j_hi = math.ceil(float(max(probe))) + 1
    width = th_hi - th_lo
    for j in range(max(3, j_lo), j_hi + 1):
        # solve c + delta_hi(th)/th == j for th (delta_hi is linear in th)
        # delta_hi(th) = a - b*th  =>  th = a / (j - c + b)
        a = delta_hi_fn(F(0))
        b = (delta_hi_fn(F(0)) - delta_hi_fn(F(1)))
        denom = j - cf + b
        if denom <= 0:
            continue
        th_star = a / denom
        for t in (th_star - width / 10**9, th_star, th_star + width / 10**9):
            if th_lo <= t <= th_hi:
                cands.add(t)
    worst = None
    worst_at = (0.0, 0.0)
    for th in sorted(cands):
        d_hi = delta_hi_fn(th)
        d_lo = max(delta_lo_fn(th), _DELTA_FLOOR)
        if d_hi < d_lo:
            d_hi = d_lo
        for delta in (d_lo, (d_lo + d_hi) / 2, d_hi):
            k = vinogradov_degree_frac(cf, th, delta)
            rho = vinogradov_saving_frac(k, eps)
            margin = th * rho - target
            if worst is None or margin < worst:
                worst = margin
                worst_at = (float(th), float(delta))
    return worst, worst_at


def vinogradov_degree_frac(c: Fraction, theta: Fraction, delta: Fraction) -> int:
    v = c + delta / theta
    return v.numerator // v.denominator + 1


def margin_verify(c, epsilon=F(1, 1000), *, grid: int = 64) -> MarginReport:
    """Check the window margins Theta*rho >= sigma + eps (narrow-factor
    family) and Theta*rho >= 2 sigma + 3 eps (bilinear family) over their
    (Theta, Delta) windows, plus the closed-form minorant values.

    ok reflects the direct grid margins only; the minorant checks are
    reported alongside (they are strictly more conservative).
    """
    c = _frac(c)
    if c < F(11, 5):
        raise OutOfRange("need c >= 11/5")
    eps = _frac(epsilon)
    if eps <= 0:
        raise OutOfRange("need epsilon > 0")
    rc = regime_constants(c)
    sigma, beta = rc.sigma, rc.beta
    if 1 - 2 * beta < F(2, 3):
        raise OutOfRange("bilinear window is empty: beta >= 1/6")

    w1, at1 = _window_margins(
        c, eps,
        F(1, 2) - beta, F(1),
        lambda th: (1 - th) * c - sigma,
        lambda th: (1 - th) * c + sigma,
        sigma + eps,
        grid,
    )
    w2, at2 = _window_margins(
        c, eps,
        F(2, 3), 1 - 2 * beta,
        lambda th: (1 - th) * (c - 1) - sigma,
        lambda th: (1 - th) * (c - 1) + 3 * sigma + 2 * eps,
        2 * sigma + 3 * eps,
        grid,
    )
    m1, _ = weyl_margin_minorants(F(1, 2) - beta, c, eps)
    _, m2a = weyl_margin_minorants(F(2, 3), c, eps)
    _, m2b = weyl_margin_minorants(1 - 2 * beta, c, eps)
    m2 = min(m2a, m2b)
    t1_ok, t2_ok = w1 >= 0, w2 >= 0
    return MarginReport(
        c=float(c),
        epsilon=float(eps),
        sigma=float(sigma),
        beta=float(beta),
        type1_worst=float(w1),
        type1_at=at1,
        type1_ok=t1_ok,
        type2_worst=float(w2),
        type2_at=at2,
        type2_ok=t2_ok,
        minorant1=float(m1),
        minorant1_ok=m1 >= sigma + eps,
        minorant2=float(m2),
        minorant2_ok=m2 >= 2 * sigma + 3 * eps,
        ok=t1_ok and t2_ok,
    )
