"""pclab: a desk-scale laboratory for the arithmetic of floor(p^c).

Certified floors and fractional parts of rational powers, segmented prime
sieving, exact factor signatures, empirical censuses over the sequence
floor(p^c) for primes p, direct exponential-sum evaluation with analytic
comparators, and exact-rational verification of the associated constant
and inequality systems.
"""

__version__ = "0.1.0"

from . import constants, errors, experiments, expsum, exactpow, factor, primes  # noqa: F401
from .exactpow import (  # noqa: F401
    CertifiedReal,
    RationalExponent,
    floor_pow,
    frac_phase,
    frac_scaled_pow,
    parse_exponent,
)
from .factor import FactorSignature, factor_signature, is_prime  # noqa: F401
from .primes import mangoldt_table, prime_count, primes_in  # noqa: F401
