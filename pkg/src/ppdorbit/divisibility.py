"""p-adic valuations of orbit terms and rigid divisibility checks.

The check functions return a :class:`CheckResult` that is truthy when the
property holds and carries the first violated instance otherwise. A failed
check is a finding to report, so they never raise for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import gmpy2
from gmpy2 import mpz

from .errors import (
    IndexOutOfRange,
    NotPrime,
    PreconditionViolated,
    ZeroValuationUndefined,
)
from .factor import is_probable_prime, prime_blocks
from .orbit import Orbit


@dataclass(frozen=True)
class ValuationRecord:
    p: int
    n: int
    e: int


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def vp(x, p: int) -> int:
    """Exponent of the prime ``p`` in ``x`` (sign ignored)."""
    if x == 0:
        raise ZeroValuationUndefined("v_p(0) is undefined")
    if p < 2 or not is_probable_prime(p):
        raise NotPrime(f"{p} is not prime")
    x = abs(mpz(x))
    e = 0
    # strip p^(2^i) chunks first so large valuations cost O(log e) divisions
    powers = [mpz(p)]
    while True:
        q, r = divmod(x, powers[-1])
        if r:
            break
        x = q
        e += 1 << (len(powers) - 1)
        powers.append(powers[-1] * powers[-1])
    for i in range(len(powers) - 2, -1, -1):
        q, r = divmod(x, powers[i])
        if not r:
            x = q
            e += 1 << i
    return e


def valuation(orbit: Orbit, p: int, n: int) -> ValuationRecord:
    return ValuationRecord(p, n, vp(orbit.b(n), p))


def _need(orbit: Orbit, upto: int):
    if upto > len(orbit):
        raise IndexOutOfRange(f"needs {upto} terms, orbit holds {len(orbit)}")


def _positive(orbit: Orbit, p: int, n: int) -> int:
    if n < 1:
        raise IndexOutOfRange(f"index {n} < 1")
    e = vp(orbit.b(n), p)
    if e == 0:
        raise PreconditionViolated(f"{p} does not divide b_{n}")
    return e


def check_rds_property1(orbit: Orbit, p: int, n: int, kmax: int) -> CheckResult:
    """v_p(b_{nk}) == v_p(b_n) for 1 <= k <= kmax."""
    _need(orbit, n * kmax)
    e = _positive(orbit, p, n)
    for k in range(2, kmax + 1):
        ek = vp(orbit.b(n * k), p)
        if ek != e:
            return CheckResult(False, {"p": p, "n": n, "k": k, "v_n": e, "v_nk": ek})
    return CheckResult(True)


def check_rds_property2(orbit: Orbit, p: int, m: int, n: int) -> CheckResult:
    """v_p(b_m) == v_p(b_n) == v_p(b_gcd(m, n)) when p divides b_m and b_n."""
    _need(orbit, max(m, n))
    em = _positive(orbit, p, m)
    en = _positive(orbit, p, n)
    g = gcd(m, n)
    eg = vp(orbit.b(g), p)
    if em == en == eg:
        return CheckResult(True)
    return CheckResult(
        False, {"p": p, "m": m, "n": n, "v_m": em, "v_n": en, "gcd": g, "v_gcd": eg}
    )


def check_congruence(orbit: Orbit, p: int, n: int, k: int, r: int) -> CheckResult:
    """b_{kn+r} == b_r (mod p^(e+1)) where e = v_p(b_n) > 0."""
    if k < 1 or r < 1:
        raise IndexOutOfRange(f"need k >= 1 and r >= 1, got k={k}, r={r}")
    _need(orbit, k * n + r)
    e = _positive(orbit, p, n)
    mod = mpz(p) ** (e + 1)
    lhs = orbit.b(k * n + r) % mod
    rhs = orbit.b(r) % mod
    if lhs == rhs:
        return CheckResult(True)
    return CheckResult(
        False, {"p": p, "n": n, "k": k, "r": r, "e": e, "lhs": int(lhs), "rhs": int(rhs)}
    )


@dataclass
class RDSReport:
    """Every admissible rigid divisibility instance over the first ``depth`` terms."""

    depth: int
    prime_limit: int
    primes: list[int] = field(default_factory=list)
    instances: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def dividing_primes(orbit: Orbit, depth: int, prime_limit: int) -> list[int]:
    """Primes <= prime_limit dividing at least one of b_1..b_depth."""
    hits = set()
    for n in range(1, depth + 1):
        t = abs(orbit.b(n))
        for chunk, prod in prime_blocks(prime_limit):
            g = gmpy2.gcd(t, prod)
            if g > 1:
                hits.update(p for p in chunk if g % p == 0)
    return sorted(hits)


def rds_suite(orbit: Orbit, depth: int = 8, prime_limit: int = 10**4) -> RDSReport:
    """Run property 1, property 2 and the congruence on every admissible instance."""
    depth = min(depth, len(orbit))
    report = RDSReport(depth, prime_limit)
    report.primes = dividing_primes(orbit, depth, prime_limit)

    def record(res: CheckResult, kind: str):
        report.instances += 1
        if not res:
            report.violations.append({"check": kind, **res.witness})

    for p in report.primes:
        support = [n for n in range(1, depth + 1) if vp(orbit.b(n), p) > 0]
        for n in support:
            record(check_rds_property1(orbit, p, n, depth // n), "property1")
            for k in range(1, depth // n + 1):
                for r in range(1, depth - k * n + 1):
                    record(check_congruence(orbit, p, n, k, r), "congruence")
        for i, m in enumerate(support):
            for n in support[i:]:
                record(check_rds_property2(orbit, p, m, n), "property2")
    return report
