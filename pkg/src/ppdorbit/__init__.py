"""Primitive prime divisors in zero orbits of z^d + c.

Exact orbits, rigid divisibility checks, factorization-free primitive parts
and parameter sweeps that check every term past b_1 has a primitive prime.
"""

from .errors import (
    DigitCapExceeded,
    IndexOutOfRange,
    NotPrime,
    OrbitError,
    PreconditionViolated,
    PreperiodicOrbit,
    RigidityViolation,
    ZeroValuationUndefined,
)
from .orbit import (
    DEFAULT_DIGIT_CAP,
    GrowthReport,
    MapParams,
    Orbit,
    OrbitClass,
    PreperiodicCase,
    Verdict,
    classify,
    increasing_hypothesis_holds,
    iterate,
    iterate_capped,
    verify_growth,
)
from .divisibility import (
    CheckResult,
    ValuationRecord,
    check_congruence,
    check_rds_property1,
    check_rds_property2,
    rds_suite,
    vp,
)
from .factor import CofactorClass, FactorBudget, FactorResult, factor, is_probable_prime
from .primitive import (
    Decomposition,
    DecompositionTable,
    FactorStatus,
    TheoremReport,
    has_primitive_prime,
    nonprimitive_part,
    primitive_part,
    primitive_primes,
    verify_theorem,
)

__version__ = "0.1.0"
