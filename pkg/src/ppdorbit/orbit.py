"""Exact zero orbits of z^d + c, preperiodicity classification and growth checks."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from .errors import DigitCapExceeded, IndexOutOfRange, PreperiodicOrbit

DEFAULT_DIGIT_CAP = 1_000_000

_LOG10_2 = math.log10(2)


@dataclass(frozen=True)
class MapParams:
    """The polynomial z^d + c."""

    c: int
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"degree must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "c", int(self.c))
        object.__setattr__(self, "d", int(self.d))

    def __call__(self, z):
        return z**self.d + self.c


class Verdict(enum.Enum):
    WANDERING = "wandering"
    PREPERIODIC = "preperiodic"


class PreperiodicCase(enum.Enum):
    ZERO_FIXED = "zero-fixed"  # c = 0
    TWO_CYCLE = "two-cycle"  # c = -1, d even
    EVENTUALLY_FIXED = "eventually-fixed"  # c = -2, d = 2


@dataclass(frozen=True)
class OrbitClass:
    verdict: Verdict
    case: PreperiodicCase | None = None

    @property
    def wandering(self) -> bool:
        return self.verdict is Verdict.WANDERING

    def __str__(self):
        if self.case is None:
            return self.verdict.value
        return f"{self.verdict.value} ({self.case.value})"


@dataclass(frozen=True)
class Orbit:
    """Iterates phi(seed), phi^2(seed), ... stored exactly.

    Terms are 1-indexed through :meth:`b`; ``terms[0]`` holds phi^1(seed).
    """

    params: MapParams
    seed: int
    terms: tuple = field(repr=False)

    def __len__(self):
        return len(self.terms)

    def b(self, n: int) -> mpz:
        if not 1 <= n <= len(self.terms):
            raise IndexOutOfRange(f"term {n} requested, orbit holds 1..{len(self.terms)}")
        return self.terms[n - 1]

    def abs_terms(self) -> list[mpz]:
        return [abs(t) for t in self.terms]


def estimate_digits(x) -> int:
    """Decimal digit count of |x|, possibly one too large."""
    x = mpz(x)
    if x == 0:
        return 1
    return int(x.bit_length() * _LOG10_2) + 1


def _projected_digits(params: MapParams, prev) -> int:
    # digits(b_{n+1}) ~ d * digits(b_n); the constant dominates only for tiny prev
    return max(params.d * estimate_digits(prev), estimate_digits(params.c))


def iterate(
    params: MapParams,
    seed: int,
    n: int,
    digit_cap: int | None = DEFAULT_DIGIT_CAP,
) -> Orbit:
    """Return the first ``n`` iterates of ``params`` starting from ``seed``.

    Raises DigitCapExceeded before computing any term whose projected size is
    above ``digit_cap`` (``None`` disables the cap).
    """
    if n < 1:
        raise ValueError(f"need at least one term, got n={n}")
    terms = extend_terms([], params, mpz(seed), n, digit_cap, strict=True)
    return Orbit(params, int(seed), tuple(terms))


def iterate_capped(
    params: MapParams,
    seed: int,
    n: int,
    digit_cap: int | None = DEFAULT_DIGIT_CAP,
) -> Orbit:
    """Like :func:`iterate` but stops quietly at the last term inside the cap."""
    if n < 1:
        raise ValueError(f"need at least one term, got n={n}")
    terms = extend_terms([], params, mpz(seed), n, digit_cap, strict=False)
    return Orbit(params, int(seed), tuple(terms))


def extend_terms(terms, params, seed, n, digit_cap, strict=True):
    """Append iterates to ``terms`` in place until it holds ``n`` of them."""
    prev = terms[-1] if terms else seed
    c, d = mpz(params.c), params.d
    while len(terms) < n:
        if digit_cap is not None:
            projected = _projected_digits(params, prev)
            if projected > digit_cap:
                if strict:
                    raise DigitCapExceeded(len(terms) + 1, projected, digit_cap)
                break
        prev = prev**d + c
        terms.append(prev)
    return terms


def classify(params: MapParams) -> OrbitClass:
    """Closed-form wandering/preperiodic verdict for the zero orbit."""
    c, d = params.c, params.d
    if c == 0:
        return OrbitClass(Verdict.PREPERIODIC, PreperiodicCase.ZERO_FIXED)
    if c == -1 and d % 2 == 0:
        return OrbitClass(Verdict.PREPERIODIC, PreperiodicCase.TWO_CYCLE)
    if c == -2 and d == 2:
        return OrbitClass(Verdict.PREPERIODIC, PreperiodicCase.EVENTUALLY_FIXED)
    return OrbitClass(Verdict.WANDERING)


def require_wandering(params: MapParams) -> None:
    cls = classify(params)
    if not cls.wandering:
        raise PreperiodicOrbit(params.c, params.d, cls.case.value)


def increasing_hypothesis_holds(a: int, params: MapParams) -> bool:
    """Whether |a| >= |c| and |a| > 2, which forces |phi^n(a)| to increase."""
    return abs(a) >= abs(params.c) and abs(a) > 2


@dataclass
class GrowthReport:
    """Per-index outcomes of the three growth inequalities of a zero orbit.

    ``increasing[n]`` compares B_n with B_{n-1} (n >= 2); ``factored[m]`` is
    |b_m| > |b_{m-1}|(|b_{m-1}| - 1) and ``product[m]`` is
    prod_{k<m} |b_k| < |b_m|, both for m >= 3. ``product_at_2`` records the
    product inequality at m = 2 for information only; it does not affect ``ok``.
    """

    params: MapParams
    terms_checked: int
    increasing: dict[int, bool] = field(default_factory=dict)
    factored: dict[int, bool] = field(default_factory=dict)
    product: dict[int, bool] = field(default_factory=dict)
    product_at_2: bool | None = None

    @property
    def failures(self) -> list[tuple[str, int]]:
        out = []
        for name in ("increasing", "factored", "product"):
            out.extend((name, i) for i, ok in getattr(self, name).items() if not ok)
        return out

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_growth(orbit: Orbit) -> GrowthReport:
    if orbit.seed != 0:
        raise ValueError("growth checks apply to the zero orbit only")
    require_wandering(orbit.params)

    B = orbit.abs_terms()
    report = GrowthReport(orbit.params, len(B))
    running = mpz(1)  # prod_{k<m} B_k
    for m in range(1, len(B) + 1):
        cur = B[m - 1]
        if m >= 2:
            prev = B[m - 2]
            report.increasing[m] = cur > prev
            if m == 2:
                report.product_at_2 = running < cur
            else:
                report.factored[m] = cur > prev * (prev - 1)
                report.product[m] = running < cur
        running *= cur
    return report


def digits_of(x) -> str:
    """Exact decimal string of a (possibly huge) integer."""
    return gmpy2.mpz(x).digits(10)
