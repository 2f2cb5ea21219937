"""Integer primitives: exact roots, primality, and deterministic factorization.

Shared by the certified-power kernels and the factorization front end.
"""
from __future__ import annotations

import math

from .errors import FactorizationTimeout

TWO63 = 1 << 63
TWO64 = 1 << 64

# Deterministic Miller-Rabin witness set for n < 2^64 (Sorenson & Webster).
MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MASK64 = TWO64 - 1


def iroot(x: int, k: int) -> int:
    """Largest r with r**k <= x, for x >= 0, k >= 1.  Exact."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if k == 1 or x < 2:
        return x
    if k == 2:
        return math.isqrt(x)
    b = x.bit_length()
    if b <= k:  # x < 2^k  =>  root is 1
        return 1
    if b <= 50:
        r = int(x ** (1.0 / k))
    else:
        r = 1 << -(-b // k)  # upper-ish seed from the bit length
    while True:
        t = ((k - 1) * r + x // r ** (k - 1)) // k
        if t >= r:
            break
        r = t
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def perfect_root(x: int, k: int) -> int | None:
    """r if x == r**k exactly, else None."""
    r = iroot(x, k)
    return r if r ** k == x else None


def _mr_composite_witness(n: int, a: int, d: int, s: int) -> bool:
    """True if base a proves n composite (strong test)."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test (Selfridge parameters)."""
    if math.isqrt(n) ** 2 == n:
        return False
    d = 5
    while True:
        j = _jacobi(d % n, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    p, q = 1, (1 - d) // 4
    # n + 1 = m * 2^s with m odd
    m, s = n + 1, 0
    while m % 2 == 0:
        m //= 2
        s += 1
    # Lucas chain for U_m, V_m
    u, v, qk = 1, p, q % n
    for bit in bin(m)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) % n, (d * u + p * v) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = (u // 2) % n, (v // 2) % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2^64, else MR + strong Lucas."""
    return primality(n)[0]


def primality(n: int) -> tuple[bool, bool]:
    """(is_prime, deterministic).  Deterministic verdicts below 2^64."""
    if n < 2:
        return False, True
    for p in MR_BASES_64:
        if n == p:
            return True, True
        if n % p == 0:
            return False, True
    if n < 37 * 37:
        return True, True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < TWO64:
        for a in MR_BASES_64:
            if _mr_composite_witness(n, a, d, s):
                return False, True
        return True, True
    # Probabilistic path: 64 pseudo-random bases (seeded by n, reproducible)
    # plus a strong Lucas check.
    state = n & _MASK64
    for _ in range(64):
        state, r = _splitmix64(state)
        a = 2 + r % (n - 3)
        if _mr_composite_witness(n, a, d, s):
            return False, True
    return _strong_lucas_prp(n), False


def brent_rho(n: int, budget: list[int]) -> int | None:
    """A non-trivial factor of odd composite n via Brent-cycle Pollard rho.

    Polynomial constants are tried in the fixed order 1, 2, 3, ... so results
    are reproducible.  ``budget`` is a single-element mutable iteration budget
    shared across calls; None is returned only when it runs dry.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget[0] -= min(m, r - k)
                if budget[0] <= 0:
                    return None
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                budget[0] -= 1
                if budget[0] <= 0:
                    return None
        if g != n:
            return g
    return None


_SMALL_PRIME_LIMIT = 10**5
_small_primes_cache: list[int] | None = None


def small_primes() -> list[int]:
    """Primes up to 10^5, cached (trial-division table)."""
    global _small_primes_cache
    if _small_primes_cache is None:
        limit = _SMALL_PRIME_LIMIT
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
        _small_primes_cache = [i for i in range(limit + 1) if sieve[i]]
    return _small_primes_cache


def factorize(n: int, rho_budget: int = 1 << 24) -> tuple[dict[int, int], bool]:
    """Complete factorization of n >= 1 as {prime: exponent}.

    Returns (factors, probabilistic_flag).  Trial division runs to 10^5 with
    an early isqrt cutoff; composite cofactors go to Brent rho.  Raises
    FactorizationTimeout (carrying the partial result) if the rho budget is
    exceeded.
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    factors: dict[int, int] = {}
    probabilistic = False
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    if m == 1:
        return factors, probabilistic
    pending = []
    limit = math.isqrt(m)
    for p in small_primes():
        if p < 7:
            continue
        if p > limit:
            break
        if m % p == 0:
            while m % p == 0:
                factors[p] = factors.get(p, 0) + 1
                m //= p
            if m == 1:
                break
            verdict, det = primality(m)
            probabilistic |= not det
            if verdict:
                factors[m] = factors.get(m, 0) + 1
                m = 1
                break
            limit = math.isqrt(m)
    if m > 1:
        verdict, det = primality(m)
        probabilistic |= not det
        if verdict:
            factors[m] = factors.get(m, 0) + 1
        elif math.isqrt(m) <= _SMALL_PRIME_LIMIT:
            # composite with all prime factors <= 10^5 already exhausted: the
            # remaining cofactor must be a prime square (isqrt cutoff artifact)
            pending.append(m)
        else:
            pending.append(m)
    budget = [rho_budget]
    while pending:
        m = pending.pop()
        if m == 1:
            continue
        verdict, det = primality(m)
        probabilistic |= not det
        if verdict:
            factors[m] = factors.get(m, 0) + 1
            continue
        r = perfect_root(m, 2)
        if r is not None:
            pending.extend((r, r))
            continue
        d = brent_rho(m, budget)
        if d is None or d == m:
            raise FactorizationTimeout(
                f"factorization budget exceeded at cofactor {m}",
                partial=(dict(factors), m),
            )
        pending.extend((d, m // d))
    return factors, probabilistic
