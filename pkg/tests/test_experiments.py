import math

import pytest
from hypothesis import given, settings, strategies as st

from pclab import experiments as ex
from pclab.errors import OutOfRange

# members of floor(p^1.5) for p <= 20: {2, 5, 11, 18, 36, 46, 70, 82}


def test_almost_prime_census_small():
    r = ex.almost_prime_census(20, "3/2", 1)
    assert r.count == 3  # 2, 5, 11
    assert r.pi_x == 8
    r50 = ex.almost_prime_census(20, "3/2", 50)
    assert r50.count == r50.pi_x == 8


def test_census_monotone_in_R_and_x():
    counts_r = [ex.almost_prime_census(200, "3/2", r).count for r in (1, 2, 4, 8, 127)]
    assert counts_r == sorted(counts_r)
    assert counts_r[-1] == ex.almost_prime_census(200, "3/2", 1).pi_x
    counts_x = [ex.almost_prime_census(x, "3/2", 3).count for x in (50, 100, 400, 1000)]
    assert counts_x == sorted(counts_x)


def test_eta_hat_definition():
    r = ex.almost_prime_census(100, "3/2", 4)
    assert r.eta_hat == pytest.approx(r.count * math.log(100) ** 2 / 100)


def test_squarefree_small():
    r = ex.squarefree_census(20, "3/2")
    assert r.count == 6  # 18 = 2*3^2 and 36 fail
    assert r.ratio == pytest.approx(0.75)
    assert ex.SQUAREFREE_DENSITY == pytest.approx(0.6079271018540267)


def test_ps_prime_count_small():
    assert ex.ps_prime_count(10, "3/2").count == 3  # 2, 5, 11
    assert ex.ps_prime_count(2, "3/2").count == 1


def test_residue_histogram_small():
    h = ex.residue_histogram(20, "3/2", 2)
    assert h.counts == (6, 2)
    h5 = ex.residue_histogram(20, "3/2", 5)
    assert sum(h5.counts) == 8
    h1 = ex.residue_histogram(20, "3/2", 1)
    assert h1.counts == (8,)


def test_level_error_small():
    assert ex.level_error(20, "3/2", 1).E == 0.0
    r = ex.level_error(20, "3/2", 2)
    assert r.E == pytest.approx(2.0)  # d=2, s=1: |2 - 4| = 2
    assert r.normalized == pytest.approx(2.0 * math.log(8) ** 2 / 8)


def test_level_error_all_residues_flag():
    narrow = ex.level_error(50, "3/2", 6).E
    wide = ex.level_error(50, "3/2", 6, all_residues=True).E
    assert wide >= narrow


def test_parallel_runs_equal_sequential():
    a = ex.almost_prime_census(2000, "7/5", 3, jobs=1)
    b = ex.almost_prime_census(2000, "7/5", 3, jobs=3)
    assert a == b
    sa = ex.squarefree_census(2000, "7/5", jobs=1)
    sb = ex.squarefree_census(2000, "7/5", jobs=3)
    assert sa == sb


def test_star_discrepancy_point_formula():
    assert ex.star_discrepancy_points([0.0]) == 1.0
    n = 100
    assert ex.star_discrepancy_points([k / n for k in range(n)]) == pytest.approx(1 / n)


def brute_discrepancy(points):
    pts = sorted(points)
    n = len(pts)
    worst = 0.0
    # sup over t of |#(points < t)/n - t| is attained approaching each point
    for t in pts + [1.0]:
        below = sum(1 for p in pts if p < t)
        at_or_below = sum(1 for p in pts if p <= t)
        worst = max(worst, abs(below / n - t), abs(at_or_below / n - t))
    return worst


@given(st.lists(st.floats(0, 0.999999, allow_nan=False), min_size=1, max_size=40))
@settings(max_examples=60)
def test_star_discrepancy_matches_bruteforce(pts):
    assert ex.star_discrepancy_points(pts) == pytest.approx(brute_discrepancy(pts), abs=1e-12)


@given(st.permutations(list(range(8))))
@settings(max_examples=20)
def test_star_discrepancy_permutation_invariant(perm):
    base = [0.03, 0.1, 0.2, 0.33, 0.5, 0.61, 0.8, 0.97]
    shuffled = [base[i] for i in perm]
    assert ex.star_discrepancy_points(shuffled) == ex.star_discrepancy_points(base)


def test_star_discrepancy_op_bounds():
    r = ex.star_discrepancy(1000, "3/2", 1, 7)
    assert 0.0 < r.value <= 1.0
    assert r.n_points == 168


def test_members_overflow_guard():
    with pytest.raises(ex.Overflow):
        ex.members(10**6, "132/10")  # would exceed 2^127


def test_invalid_args():
    with pytest.raises(OutOfRange):
        ex.almost_prime_census(100, "3/2", 0)
    with pytest.raises(OutOfRange):
        ex.residue_histogram(100, "3/2", 0)
