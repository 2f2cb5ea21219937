import math

import pytest
from hypothesis import given, strategies as st

from pclab import factor
from pclab.errors import OutOfRange


def trial_signature(n):
    omega, squarefree, m = 0, True, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            omega += e
            squarefree &= e == 1
        p += 1
    if m > 1:
        omega += 1
    return omega, squarefree


def test_is_prime_examples():
    assert not factor.is_prime(1)
    assert not factor.is_prime(341)  # 11 * 31
    assert factor.is_prime(2**61 - 1)


def test_is_prime_small_table():
    want = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    got = {n for n in range(2, 50) if factor.is_prime(n)}
    assert got == want


def test_is_prime_probabilistic_path():
    assert factor.is_prime(2**89 - 1)          # Mersenne prime above 2^64
    assert not factor.is_prime(3 * (2**89 - 1))


def test_signature_examples():
    s = factor.factor_signature(12)
    assert (s.omega_big, s.squarefree, s.prime) == (3, False, False)
    s1 = factor.factor_signature(1)
    assert (s1.omega_big, s1.squarefree, s1.prime) == (0, True, False)
    assert factor.factor_signature(27648).omega_big == 13  # 2^10 * 3^3


def test_signature_known_large_semiprime():
    # 2^67 - 1 = 193707721 * 761838257287
    s = factor.factor_signature(2**67 - 1)
    assert (s.omega_big, s.squarefree, s.prime) == (2, True, False)
    f = factor.factorize(2**67 - 1)
    assert f == {193707721: 1, 761838257287: 1}


@given(st.integers(1, 10**7))
def test_signature_matches_trial_division(n):
    s = factor.factor_signature(n)
    omega, squarefree = trial_signature(n)
    assert s.omega_big == omega
    assert s.squarefree == squarefree
    assert s.prime == (omega == 1)


@given(st.integers(2, 10**9))
def test_recomposition(n):
    f = factor.factorize(n)
    prod = 1
    for p, e in f.items():
        assert factor.is_prime(p)
        prod *= p**e
    assert prod == n


@given(st.integers(2, 10**6), st.integers(2, 10**6))
def test_omega_additive_on_coprime(a, b):
    if math.gcd(a, b) != 1:
        return
    sa = factor.factor_signature(a).omega_big
    sb = factor.factor_signature(b).omega_big
    assert factor.factor_signature(a * b).omega_big == sa + sb


def test_out_of_range():
    with pytest.raises(OutOfRange):
        factor.factor_signature(0)
    with pytest.raises(OutOfRange):
        factor.factor_signature(1 << 127)


def test_deterministic_repetition():
    n = 2**67 - 1
    assert factor.factorize(n) == factor.factorize(n)
