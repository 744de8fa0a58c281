"""Primality testing and budgeted factorization.

Trial division runs as a gcd against products of prime blocks, so a cofactor
with hundreds of thousands of digits only costs one big remainder per block.
Whatever survives trial division is tested for primality and split with
Brent's variant of Pollard rho, seeded from the input value.
"""

from __future__ import annotations

import enum
import random
import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpz

TWO_64 = 1 << 64

# Deterministic Miller-Rabin witnesses below 318665857834031151167461 > 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_BLOCK = 256


class CofactorClass(enum.Enum):
    UNIT = "Unit"
    PROBABLE_PRIME = "ProbablePrime"
    COMPOSITE = "Composite"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class FactorBudget:
    """Limits for :func:`factor`.

    ``max_test_bits`` keeps primality tests and rho away from cofactors so
    large that a single modular exponentiation would dominate a sweep; such
    cofactors are reported as Unknown.
    """

    trial_limit: int = 10**6
    rho_iterations: int = 10**6
    wall_time_ms: int | None = None
    max_test_bits: int = 1 << 15

    def __post_init__(self):
        if self.trial_limit < 2:
            raise ValueError("trial_limit must be >= 2")
        if self.rho_iterations < 0:
            raise ValueError("rho_iterations must be >= 0")
        if self.wall_time_ms is not None and self.wall_time_ms < 0:
            raise ValueError("wall_time_ms must be >= 0")


@dataclass(frozen=True)
class FactorResult:
    input: int
    known_factors: tuple[tuple[int, int], ...]
    cofactor: int
    cofactor_class: CofactorClass
    # listed primes above 2^64: verdict is strong-probable-prime only
    probable_primes: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def product(self) -> int:
        out = mpz(self.cofactor)
        for p, e in self.known_factors:
            out *= mpz(p) ** e
        return out


@lru_cache(maxsize=8)
def small_primes(limit: int) -> tuple[int, ...]:
    """All primes <= limit by the sieve of Eratosthenes."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=8)
def prime_blocks(limit: int):
    primes = small_primes(limit)
    blocks = []
    for i in range(0, len(primes), _BLOCK):
        chunk = primes[i : i + _BLOCK]
        prod = mpz(1)
        for p in chunk:
            prod *= p
        blocks.append((chunk, prod))
    return tuple(blocks)


def _miller_rabin(n, a) -> bool:
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    x = pow(mpz(a), d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _strong_lucas(n) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1
    if gmpy2.is_square(n):
        return False
    D = 5
    while True:
        j = gmpy2.jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4

    d, s = n + 1, 0
    while not d & 1:
        d >>= 1
        s += 1

    U, V, Qk = mpz(1), mpz(P), mpz(Q) % n
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = P * U + V, D * U + P * V
            if U & 1:
                U += n
            if V & 1:
                V += n
            U, V = (U >> 1) % n, (V >> 1) % n
            Qk = Qk * Q % n

    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_probable_prime(x) -> bool:
    """Primality verdict for x >= 1.

    Exact below 2^64 (Miller-Rabin over the first twelve prime bases).
    Above 2^64 this is the Baillie-PSW test: no counterexample is known, but
    none is ruled out either, so callers label such primes as probable.
    """
    n = mpz(x)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < TWO_64:
        return all(_miller_rabin(n, a) for a in _MR_BASES)
    return _miller_rabin(n, 2) and _strong_lucas(n)


def _brent_rho(n, max_iter: int, rng: random.Random, deadline: float | None):
    """Return a nontrivial factor of composite ``n`` or None within ``max_iter`` steps."""
    used = 0
    while used < max_iter:
        y = mpz(rng.randrange(1, n))
        c = mpz(rng.randrange(1, n - 1))
        batch = 128
        g = r = q = mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            used += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gmpy2.gcd(q, n)
                k += batch
            used += min(r, k)
            r *= 2
            if used >= max_iter or (deadline is not None and time.monotonic() > deadline):
                break
        if g == n:
            # the batched product overshot; step back one at a time
            while True:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
                if g > 1:
                    break
        if 1 < g < n:
            return g
        if deadline is not None and time.monotonic() > deadline:
            return None
    return None


def _perfect_power(n):
    """Return (root, k) with root**k == n and k maximal, or None."""
    if not gmpy2.is_power(n):
        return None
    for k in range(n.bit_length(), 1, -1):
        root, exact = gmpy2.iroot(n, k)
        if exact:
            return root, k
    return None


def factor(x, budget: FactorBudget | None = None) -> FactorResult:
    """Factor ``x >= 1`` as far as ``budget`` allows.

    The result is a deterministic function of ``(x, budget)`` unless a wall
    time cap is set and actually hit.
    """
    budget = budget or FactorBudget()
    n = mpz(x)
    if n < 1:
        raise ValueError(f"factor expects a positive integer, got {x}")
    deadline = None
    if budget.wall_time_ms is not None:
        deadline = time.monotonic() + budget.wall_time_ms / 1000

    found: Counter = Counter()
    rest = n
    limit = budget.trial_limit
    for chunk, prod in prime_blocks(limit):
        if rest == 1:
            break
        if chunk[0] * chunk[0] > rest:
            break
        g = gmpy2.gcd(rest, prod)
        if g == 1:
            continue
        for p in chunk:
            if g % p == 0:
                rest, e = gmpy2.remove(rest, p)
                found[int(p)] += int(e)

    unresolved = []  # (value, class)
    probable = set()
    if rest > 1:
        smallest_unknown = limit + 1
        if rest < smallest_unknown * smallest_unknown:
            found[int(rest)] += 1
        else:
            rng = random.Random(int(n))
            stack = [rest]
            while stack:
                m = stack.pop()
                if m == 1:
                    continue
                if m.bit_length() > budget.max_test_bits or (
                    deadline is not None and time.monotonic() > deadline
                ):
                    unresolved.append((m, CofactorClass.UNKNOWN))
                    continue
                if is_probable_prime(m):
                    found[int(m)] += 1
                    if m >= TWO_64:
                        probable.add(int(m))
                    continue
                pw = _perfect_power(m)
                if pw is not None:
                    root, k = pw
                    stack.extend([root] * k)
                    continue
                f = _brent_rho(m, budget.rho_iterations, rng, deadline)
                if f is None:
                    unresolved.append((m, CofactorClass.COMPOSITE))
                else:
                    stack.extend([f, m // f])

    cofactor = mpz(1)
    for m, _ in unresolved:
        cofactor *= m
    if not unresolved:
        cls = CofactorClass.UNIT
    elif any(k is CofactorClass.UNKNOWN for _, k in unresolved):
        cls = CofactorClass.UNKNOWN
    else:
        cls = CofactorClass.COMPOSITE

    return FactorResult(
        input=int(n),
        known_factors=tuple(sorted(found.items())),
        cofactor=int(cofactor),
        cofactor_class=cls,
        probable_primes=tuple(sorted(probable)),
    )
