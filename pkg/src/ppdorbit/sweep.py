"""Parameter sweeps over (c, d): theorem, growth and rigid divisibility checks."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from gmpy2 import mpz

from .cache import CacheRecord, DecompositionCache
from .divisibility import rds_suite
from .errors import RigidityViolation
from .factor import FactorBudget
from .orbit import DEFAULT_DIGIT_CAP, MapParams, Orbit, classify, digits_of, verify_growth
from .primitive import DecompositionTable, primitive_primes, verify_theorem

log = logging.getLogger(__name__)

# recurrence fingerprint modulus for cached terms (Mersenne prime 2^61 - 1)
_FP_MOD = (1 << 61) - 1

_MPZ = type(mpz(0))


@dataclass(frozen=True)
class SweepSpec:
    c_min: int
    c_max: int
    d_min: int
    d_max: int
    n_max: int
    budget: FactorBudget = field(default_factory=FactorBudget)
    digit_cap: int = DEFAULT_DIGIT_CAP
    factor_primes: bool = False
    rds_depth: int = 8
    rds_prime_limit: int = 10**4

    def __post_init__(self):
        if self.c_min > self.c_max:
            raise ValueError(f"empty c range [{self.c_min}, {self.c_max}]")
        if self.d_min > self.d_max:
            raise ValueError(f"empty d range [{self.d_min}, {self.d_max}]")
        if self.d_min < 2:
            raise ValueError(f"d range must start at 2 or more, got {self.d_min}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.digit_cap < 1:
            raise ValueError("digit_cap must be positive")

    def points(self) -> list[tuple[int, int]]:
        return [
            (c, d)
            for c in range(self.c_min, self.c_max + 1)
            for d in range(self.d_min, self.d_max + 1)
        ]

    def to_json(self) -> dict:
        out = asdict(self)
        out["budget"] = asdict(self.budget)
        return out


@dataclass
class PointResult:
    c: int
    d: int
    terms: int
    truncated: bool
    theorem_ok: bool
    growth_ok: bool
    rds_ok: bool
    rds_instances: int
    records: list[CacheRecord] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        return {
            "c": self.c,
            "d": self.d,
            "terms": self.terms,
            "truncated": self.truncated,
            "theorem": self.theorem_ok,
            "growth": self.growth_ok,
            "rds": self.rds_ok,
            "rds_instances": self.rds_instances,
        }


def _stringify(obj):
    if isinstance(obj, dict):
        return {k: _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, _MPZ)):
        # small ints stay numeric; anything that might not survive a double is a string
        return int(obj) if abs(obj) < 2**53 else digits_of(obj)
    return obj


def cached_prefix(c: int, d: int, cached: dict, limit: int) -> tuple[list, list]:
    """Longest run b_1..b_k of cached terms whose recurrence fingerprint checks out."""
    terms, parts = [], []
    prev = 0
    for n in range(1, limit + 1):
        rec = cached.get((c, d, n))
        if rec is None:
            break
        b = mpz(rec.b)
        if b % _FP_MOD != (pow(mpz(prev), d, _FP_MOD) + c) % _FP_MOD:
            log.warning("cached b_%d for (c=%d, d=%d) fails the recurrence; ignoring", n, c, d)
            break
        terms.append(b)
        parts.append(mpz(rec.P))
        prev = b
    return terms, parts


def run_point(c: int, d: int, spec: SweepSpec, preload=None) -> PointResult:
    params = MapParams(c, d)
    table = DecompositionTable(params, spec.digit_cap)
    violations: list[dict] = []
    base = {"c": c, "d": d}
    if preload and preload[0]:
        try:
            table.preload(*preload)
        except RigidityViolation as exc:
            log.warning("discarding cached values for (c=%d, d=%d): %s", c, d, exc)
            table = DecompositionTable(params, spec.digit_cap)
    try:
        available = table.extend(spec.n_max, strict=False)
    except RigidityViolation as exc:
        violations.append({**base, "kind": "rigidity", "detail": str(exc)})
        return PointResult(c, d, len(table), True, False, False, False, 0, [], violations)

    theorem = verify_theorem(params, available, table)
    for v in theorem.violations:
        violations.append(
            {
                **base,
                "kind": "theorem",
                "n": v.n,
                "expected": v.expected,
                "observed": v.observed,
                "abs_term": v.abs_term,
                "P": v.primitive_part,
                "N": v.nonprimitive_part,
            }
        )

    orbit = Orbit(params, 0, tuple(table.term(n) for n in range(1, available + 1)))
    growth = verify_growth(orbit)
    for check, index in growth.failures:
        violations.append({**base, "kind": "growth", "check": check, "n": index})

    rds = rds_suite(orbit, spec.rds_depth, spec.rds_prime_limit)
    for w in rds.violations:
        violations.append({**base, "kind": "rds", **w})

    records = []
    for n in range(1, available + 1):
        if spec.factor_primes:
            dec = primitive_primes(params, n, spec.budget, table)
        else:
            dec = table.decomposition(n)
        records.append(CacheRecord.from_decomposition(c, d, table.term(n), dec))

    return PointResult(
        c=c,
        d=d,
        terms=available,
        truncated=available < spec.n_max,
        theorem_ok=theorem.ok,
        growth_ok=growth.ok,
        rds_ok=rds.ok,
        rds_instances=rds.instances,
        records=records,
        violations=[_stringify(v) for v in violations],
    )


def _run_point_args(args):
    return run_point(*args)


@dataclass
class SweepReport:
    spec: SweepSpec
    points: list[PointResult]
    skipped_preperiodic: list[tuple[int, int]]

    @property
    def violations(self) -> list[dict]:
        return [v for p in self.points for v in p.violations]

    def records(self):
        for p in self.points:
            yield from p.records

    @property
    def exit_code(self) -> int:
        if self.violations:
            return 2
        if not self.points:
            return 3
        return 0

    def write_json(self, fh) -> None:
        """Stream the report as one JSON object; key order is fixed."""
        fh.write('{"params":')
        fh.write(json.dumps(self.spec.to_json(), sort_keys=True))
        fh.write(',"points":')
        fh.write(json.dumps([p.summary() for p in self.points]))
        fh.write(',"records":[')
        for i, rec in enumerate(self.records()):
            if i:
                fh.write(",")
            fh.write(json.dumps(rec.to_json()))
        fh.write('],"violations":')
        fh.write(json.dumps(self.violations))
        fh.write(',"skipped_preperiodic":')
        fh.write(json.dumps([list(p) for p in self.skipped_preperiodic]))
        fh.write("}\n")


def run_sweep(
    spec: SweepSpec,
    cache: DecompositionCache | None = None,
    jobs: int = 1,
) -> SweepReport:
    """Run every wandering (c, d) of ``spec``; results are ordered by (c, d)."""
    cached = cache.load() if cache is not None else {}
    skipped, work = [], []
    for c, d in spec.points():
        if not classify(MapParams(c, d)).wandering:
            skipped.append((c, d))
            continue
        preload = cached_prefix(c, d, cached, spec.n_max) if cached else None
        work.append((c, d, spec, preload))

    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point_args, work))
    else:
        results = [_run_point_args(w) for w in work]
    results.sort(key=lambda r: (r.c, r.d))

    if cache is not None:
        fresh = (r for p in results for r in p.records if cached.get(r.key) != r)
        cache.append(fresh)
    return SweepReport(spec, results, sorted(skipped))
