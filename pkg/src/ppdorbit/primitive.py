"""Primitive and non-primitive parts of zero-orbit terms, without factoring.

For a rigid divisibility sequence the non-primitive part of b_n is the
product of the primitive parts of b_d over the proper divisors d of n, so
the table below fills P_n = |b_n| / N_n bottom-up in index order. Only the
optional prime listing ever calls the factorizer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from gmpy2 import mpz

from .errors import RigidityViolation
from .factor import FactorBudget, factor
from .orbit import DEFAULT_DIGIT_CAP, MapParams, extend_terms, require_wandering


class FactorStatus(enum.Enum):
    NOT_REQUESTED = "NotRequested"
    COMPLETE = "Complete"
    PARTIAL = "Partial"


@dataclass(frozen=True)
class Decomposition:
    n: int
    abs_term: mpz
    primitive_part: mpz
    nonprimitive_part: mpz
    primitive_primes: tuple[tuple[int, int], ...] | None = None
    factor_status: FactorStatus = FactorStatus.NOT_REQUESTED
    unresolved: mpz = mpz(1)
    probable_primes: tuple[int, ...] = ()


def proper_divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return [x for x in small + large[::-1] if x != n]


class DecompositionTable:
    """Memo of terms and primitive parts for one wandering zero orbit.

    Entries are filled strictly in index order by :meth:`extend`; once an
    index is present its values never change.
    """

    def __init__(self, params: MapParams, digit_cap: int | None = DEFAULT_DIGIT_CAP):
        require_wandering(params)
        self.params = params
        self.digit_cap = digit_cap
        self._terms: list[mpz] = []
        self._P: list[mpz] = []
        self._N: list[mpz] = []

    def __len__(self):
        return len(self._P)

    def term(self, n: int) -> mpz:
        self.extend(n)
        return self._terms[n - 1]

    def primitive_part(self, n: int) -> mpz:
        self.extend(n)
        return self._P[n - 1]

    def nonprimitive_part(self, n: int) -> mpz:
        self.extend(n)
        return self._N[n - 1]

    def decomposition(self, n: int) -> Decomposition:
        self.extend(n)
        return Decomposition(n, abs(self._terms[n - 1]), self._P[n - 1], self._N[n - 1])

    def extend(self, n: int, strict: bool = True) -> int:
        """Fill entries up to index ``n`` and return how many are available.

        With ``strict=False`` the table stops at the digit cap instead of
        raising DigitCapExceeded.
        """
        if n < 1:
            raise ValueError(f"term index must be >= 1, got {n}")
        try:
            if len(self._terms) < n:
                extend_terms(self._terms, self.params, mpz(0), n, self.digit_cap, strict)
        finally:
            while len(self._P) < len(self._terms):
                self._push(len(self._P) + 1)
        return len(self._P)

    def preload(self, terms, primitive_parts) -> None:
        """Seed an empty table from stored values after checking P_n N_n = |b_n|."""
        if self._terms:
            raise RuntimeError("preload only applies to an empty table")
        for i, (b, P) in enumerate(zip(terms, primitive_parts), start=1):
            b, P = mpz(b), mpz(P)
            N = self._product_over_divisors(i)
            if P * N != abs(b):
                raise RigidityViolation(f"stored P_{i} * N_{i} != |b_{i}|")
            self._terms.append(b)
            self._P.append(P)
            self._N.append(N)

    def _product_over_divisors(self, n: int) -> mpz:
        N = mpz(1)
        for d in proper_divisors(n):
            N *= self._P[d - 1]
        return N

    def _push(self, n: int):
        B = abs(self._terms[n - 1])
        N = self._product_over_divisors(n)
        P, rem = divmod(B, N)
        if rem:
            raise RigidityViolation(
                f"N_{n} does not divide |b_{n}| for z^{self.params.d} + ({self.params.c})"
            )
        self._P.append(P)
        self._N.append(N)


def _table(params: MapParams, memo: DecompositionTable | None) -> DecompositionTable:
    if memo is None:
        return DecompositionTable(params)
    if memo.params != params:
        raise ValueError(f"memo table belongs to {memo.params}, not {params}")
    return memo


def nonprimitive_part(params: MapParams, n: int, memo: DecompositionTable | None = None) -> mpz:
    return _table(params, memo).nonprimitive_part(n)


def primitive_part(params: MapParams, n: int, memo: DecompositionTable | None = None) -> mpz:
    return _table(params, memo).primitive_part(n)


def has_primitive_prime(params: MapParams, n: int, memo: DecompositionTable | None = None) -> bool:
    return _table(params, memo).primitive_part(n) > 1


def primitive_primes(
    params: MapParams,
    n: int,
    budget: FactorBudget | None = None,
    memo: DecompositionTable | None = None,
) -> Decomposition:
    """Decomposition of b_n with P_n factored as far as ``budget`` allows."""
    base = _table(params, memo).decomposition(n)
    res = factor(base.primitive_part, budget)
    return Decomposition(
        n=n,
        abs_term=base.abs_term,
        primitive_part=base.primitive_part,
        nonprimitive_part=base.nonprimitive_part,
        primitive_primes=res.known_factors,
        factor_status=FactorStatus.COMPLETE if res.complete else FactorStatus.PARTIAL,
        unresolved=mpz(res.cofactor),
        probable_primes=res.probable_primes,
    )


def expected_primitive(params: MapParams, n: int) -> bool:
    """What the theorem predicts for b_n of a wandering zero orbit."""
    if n == 1:
        return abs(params.c) != 1
    return True


@dataclass(frozen=True)
class Violation:
    n: int
    expected: bool
    observed: bool
    abs_term: mpz
    primitive_part: mpz
    nonprimitive_part: mpz


@dataclass
class TheoremReport:
    params: MapParams
    n_max: int
    observed: dict[int, bool] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_theorem(
    params: MapParams, n_max: int, memo: DecompositionTable | None = None
) -> TheoremReport:
    table = _table(params, memo)
    table.extend(n_max)
    report = TheoremReport(params, n_max)
    for n in range(1, n_max + 1):
        observed = table.primitive_part(n) > 1
        expected = expected_primitive(params, n)
        report.observed[n] = observed
        if observed != expected:
            dec = table.decomposition(n)
            report.violations.append(
                Violation(n, expected, observed, dec.abs_term, dec.primitive_part, dec.nonprimitive_part)
            )
    return report
