import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from pclab import constants as cn
from pclab.errors import InvalidR, NoCrossing, OutOfRange


def test_greaves_delta_values():
    assert cn.greaves_delta(2) == 0.044560
    assert cn.greaves_delta(3) == 0.074267
    assert cn.greaves_delta(4) == 0.103974
    assert cn.greaves_delta(5) == 0.124820
    assert cn.greaves_delta(100) == 0.124820
    with pytest.raises(InvalidR):
        cn.greaves_delta(1)


def test_greaves_min_R_examples():
    assert cn.greaves_min_R(4.8) == 5
    assert cn.greaves_min_R(4.9) == 6
    assert cn.greaves_min_R(0.5) == 2


@given(st.fractions(min_value=F(1, 10), max_value=F(3000)))
@settings(max_examples=80)
def test_greaves_min_R_matches_scan(rho):
    got = cn.greaves_min_R(rho)
    r = 2
    while not (r - cn.greaves_delta_frac(r) > rho):
        r += 1
    assert got == r


def test_admissible_pairs_table():
    pairs = cn.admissible_pairs()
    assert len(pairs) == 12
    assert (pairs[0].R, pairs[0].c_R) == (8, 1.0521)
    assert (pairs[-1].R, pairs[-1].c_R) == (19, 1.2273)
    assert [p.R for p in pairs] == list(range(8, 20))


def test_feasibility_example_near_one():
    params = cn.feasibility_params("1.0521", "0.12", F(1, 10**4))
    reps = cn.feasibility_check(params)
    assert len(reps) == 11
    assert all(r.holds for r in reps)


def test_feasibility_example_failure():
    params = cn.feasibility_params("1.3", "0.12", F(1, 10**4))
    by_id = {r.id: r for r in cn.feasibility_check(params)}
    assert not by_id["iii"].holds
    assert by_id["iii"].lhs == pytest.approx(365 / 3 + 32 * 1.3 + 147 * 0.12)


@given(
    st.fractions(min_value=F(101, 100), max_value=F(3, 2)),
    st.fractions(min_value=F(1, 1000), max_value=F(1, 3)),
    st.fractions(min_value=F(1, 10**6), max_value=F(1, 100)),
)
def test_feasibility_vi_vii_always_hold(c, theta, kappa):
    # theta < 2*alpha holds for every positive theta, kappa
    params = cn.FeasibilityParams(c, theta, kappa)
    by_id = {r.id: r for r in cn.feasibility_check(params)}
    assert by_id["vi"].holds
    assert by_id["vii"].holds


def test_feasible_interval_consistent_with_check():
    kappa = F(1, 10**6)
    for pair in cn.admissible_pairs():
        iv = cn.feasible_theta_interval(pair.c_R_exact, pair.R, kappa)
        assert iv is not None
        witness = (iv[0] + iv[1]) / 2
        assert witness < F(1, pair.R)
        reps = cn.feasibility_check(cn.feasibility_params(pair.c_R_exact, witness, kappa))
        assert all(r.holds for r in reps)


def test_max_c_feasible_bounds():
    vals = [cn.max_c_feasible(r, 1e-4) for r in range(8, 20)]
    for pair, v in zip(cn.admissible_pairs(), vals):
        assert v >= pair.c_R
    assert vals == sorted(vals)  # non-decreasing in R


def test_max_c_feasible_degree_mode_differs():
    base = cn.max_c_feasible(8, 1e-4)
    deg = cn.max_c_feasible(8, 1e-4, greaves_degree=True)
    assert deg < base


def test_regime_constants_examples():
    rc = cn.regime_constants(F(11, 5))
    assert float(rc.sigma) == pytest.approx(0.0021244, abs=1e-7)
    assert float(rc.beta) == pytest.approx(0.0998, abs=1e-4)
    assert rc.coeff == 179
    rc3 = cn.regime_constants(3)
    assert float(rc3.sigma) == pytest.approx(0.0024533, abs=1e-7)
    assert float(rc3.beta) == pytest.approx(0.04907, abs=1e-5)
    assert rc3.coeff == 88
    assert rc3.beta < F(1, 10)


def test_regime_constants_fields():
    rc = cn.regime_constants(F(5, 2))
    assert rc.c1 == rc.c + rc.sigma
    assert rc.c2 == rc.c - 1 + 3 * rc.sigma
    assert rc.beta == 47 * rc.sigma


def test_sigma_positive_and_decreasing():
    cs = [F(11, 5) + F(i, 40) for i in range(0, 30)]
    sig = [cn.regime_constants(c).sigma for c in cs if c < 3]
    assert all(s > 0 for s in sig)
    assert all(a > b for a, b in zip(sig, sig[1:]))


def test_r_bound_examples():
    rb = cn.r_bound(F(11, 5))
    assert rb.exact_bound == F(129591, 125)
    assert rb.real_bound == pytest.approx(1036.728)
    assert cn.r_bound(3).real_bound == 432 + 792
    with pytest.raises(OutOfRange):
        cn.r_bound(2)


def test_r_bound_identity_random_rationals():
    rng = random.Random(7)
    for _ in range(100):
        c = F(rng.randint(2200000, 2999999), 10**6)
        rc = cn.regime_constants(c)
        assert c / rc.sigma + F(23, 20) == 16 * c**3 + 179 * c**2
    for _ in range(100):
        c = F(rng.randint(3000000, 50000000), 10**6)
        rc = cn.regime_constants(c)
        assert c / rc.sigma + F(23, 20) == 16 * c**3 + 88 * c**2


def test_regime_inequalities_at_quoted_points():
    at_2081 = {r.id: r.holds for r in cn.regime_inequalities(F(2081, 1000))}
    assert at_2081["3.2"]
    at_2198 = {r.id: r.holds for r in cn.regime_inequalities(F(2198, 1000))}
    assert at_2198["3.3"] and at_2198["3.4"]


def test_threshold_of_bilinear_inequalities():
    t33 = cn.threshold("3.3", F(9, 5), F(12, 5), 1e-3)
    t34 = cn.threshold("3.4", F(9, 5), F(12, 5), 1e-3)
    assert 2.196 <= max(t33.value, t34.value) <= 2.200
    assert not t33.multi_crossing and not t34.multi_crossing


def test_threshold_no_crossing_when_already_holds():
    with pytest.raises(NoCrossing):
        cn.threshold("3.2", F(5, 2), F(3), 1e-3)


def test_narrow_inequality_crossing_is_low():
    # the printed narrow-window inequality already holds from about 1.42 on;
    # its true crossing sits far below the quoted 2.081
    t = cn.threshold("3.2", F(13, 10), F(3, 2), 1e-3)
    assert 1.40 <= t.value <= 1.44
    with pytest.raises(NoCrossing):
        cn.threshold("3.2", F(3, 2), F(11, 5), 1e-3)


def test_beta_cap_threshold():
    t = cn.threshold("beta-cap", F(2), F(12, 5), 1e-3)
    assert 2.19 <= t.value <= 2.20


def test_minorants_vanish_at_zero():
    m1, m2 = cn.weyl_margin_minorants(0, F(5, 2), F(1, 100))
    assert m1 == 0 and m2 == 0


def test_minorant_f1_increasing_grids():
    n = 1000
    for cc in (F(8, 5), F(11, 5), F(3), F(10)):
        for eps in (F(0), F(1, 100)):
            vals = [cn.weyl_margin_minorants(F(i, n), cc, eps)[0] for i in range(0, n + 1, 10)]
            assert all(a < b for a, b in zip(vals, vals[1:]))


def test_minorant_f2_unimodal_grids():
    n = 1000
    for cc in (F(11, 5), F(5, 2), F(3)):
        vals = [cn.weyl_margin_minorants(F(i, n), cc, F(1, 100))[1] for i in range(0, n + 1, 10)]
        rising = True
        drops = 0
        for a, b in zip(vals, vals[1:]):
            if b < a and rising:
                rising = False
                drops += 1
            assert b != a
            if not rising:
                assert b < a
        assert drops <= 1


def test_margin_verify_passing_cases():
    for cc in (F(11, 5), F(5, 2)):
        m = cn.margin_verify(cc, F(1, 1000))
        assert m.ok
        assert m.type1_worst >= 0 and m.type2_worst >= 0


def test_margin_verify_small_eps_large_c():
    # the window margins close up for every c once eps is small enough
    for cc in (F(11, 5), F(5, 2), F(3), F(5)):
        m = cn.margin_verify(cc, F(1, 10000))
        assert m.ok


def test_margin_verify_boundary_report():
    m = cn.margin_verify(F(11, 5), F(1, 100))
    assert isinstance(m.ok, bool)
    assert m.sigma == pytest.approx(0.0021244, abs=1e-6)


def test_margin_verify_domain():
    with pytest.raises(OutOfRange):
        cn.margin_verify(F(2), F(1, 1000))


def test_strictness_margin():
    # verdicts use slack > 1e-12: an exactly-tied inequality must not hold
    rep = cn._report("tie", F(1), F(1))
    assert not rep.holds
    rep2 = cn._report("thin", F(1), F(1) + F(1, 10**13))
    assert not rep2.holds
