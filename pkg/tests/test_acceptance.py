"""Exit criteria: full sweep c in [-50, 50], d in [2, 5], n_max = 10.

Every criterion is exact. Run alone with ``pytest tests/test_acceptance.py``;
the terminal summary prints one PASS/FAIL line per criterion.
"""

import contextlib
import filecmp
import time
from math import prod

import pytest
from gmpy2 import mpz

from conftest import ACCEPTANCE_RESULTS
from oracles import increasing_first_values, naive_orbit, primitive_by_history, revisits
from ppdorbit import DecompositionTable, FactorBudget, FactorStatus, MapParams, classify, primitive_primes
from ppdorbit.sweep import SweepSpec, run_sweep

pytestmark = pytest.mark.acceptance

C_RANGE = (-50, 50)
D_RANGE = (2, 5)
N_MAX = 10
RDS_DEPTH = 8
RDS_PRIME_LIMIT = 10**4
ORACLE_BOUND = 10**12
RUNTIME_LIMIT_S = 300

SPEC = SweepSpec(
    C_RANGE[0], C_RANGE[1], D_RANGE[0], D_RANGE[1], N_MAX,
    rds_depth=RDS_DEPTH, rds_prime_limit=RDS_PRIME_LIMIT,
)


@contextlib.contextmanager
def criterion(name):
    detail = {"text": ""}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_RESULTS.append((name, False, detail["text"] or "assertion failed"))
        raise
    ACCEPTANCE_RESULTS.append((name, True, detail["text"]))


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    start = time.perf_counter()
    report = run_sweep(SPEC)
    elapsed = time.perf_counter() - start
    path = tmp_path_factory.mktemp("acceptance") / "cold1.json"
    with path.open("w", encoding="utf-8") as fh:
        report.write_json(fh)
    return report, elapsed, path


def test_c1_theorem_conformance(sweep):
    report, elapsed, _ = sweep
    with criterion("1 theorem conformance") as info:
        theorem = [v for v in report.violations if v["kind"] in ("theorem", "rigidity")]
        assert theorem == []
        assert all(p.theorem_ok for p in report.points)
        # the sweep checked every n it could reach under the digit cap
        for p in report.points:
            assert p.terms == N_MAX or p.truncated
            assert len(p.records) == p.terms
            assert (mpz(p.records[0].P) > 1) == (abs(p.c) != 1)
            assert all(mpz(r.P) > 1 for r in p.records[1:])
        checked = sum(p.terms for p in report.points)
        assert elapsed < RUNTIME_LIMIT_S
        info["text"] = (
            f"{len(report.points)} wandering (c,d), {checked} terms, 0 violations, "
            f"{sum(p.truncated for p in report.points)} truncated by digit cap, {elapsed:.1f}s"
        )


def test_c2_preperiodic_classification(sweep):
    report, _, _ = sweep
    with criterion("2 preperiodic classification") as info:
        expected = {(0, d) for d in range(D_RANGE[0], D_RANGE[1] + 1)}
        expected |= {(-1, d) for d in range(D_RANGE[0], D_RANGE[1] + 1) if d % 2 == 0}
        expected |= {(-2, 2)}
        classified = set()
        for c in range(C_RANGE[0], C_RANGE[1] + 1):
            for d in range(D_RANGE[0], D_RANGE[1] + 1):
                pre = not classify(MapParams(c, d)).wandering
                if pre:
                    classified.add((c, d))
                    assert revisits(c, d, 10), (c, d)
                else:
                    assert increasing_first_values(c, d, 10), (c, d)
        assert classified == expected
        assert set(report.skipped_preperiodic) == expected
        info["text"] = f"{sorted(classified)} confirmed by 10-step simulation"


def test_c3_oracle_equivalence(sweep):
    report, _, _ = sweep
    with criterion("3 oracle equivalence") as info:
        budget = FactorBudget()
        instances = 0
        for p in report.points:
            params = MapParams(p.c, p.d)
            table = DecompositionTable(params)
            terms = []
            for n in range(1, p.terms + 1):
                b = mpz(p.records[n - 1].b)
                if abs(b) > ORACLE_BOUND:
                    break
                terms.append(int(b))
            assert terms == naive_orbit(p.c, p.d, len(terms))
            for n in range(1, len(terms) + 1):
                oracle = primitive_by_history(terms, n)
                dec = primitive_primes(params, n, budget, table)
                assert dec.factor_status is FactorStatus.COMPLETE, (p.c, p.d, n)
                assert dict(dec.primitive_primes) == oracle, (p.c, p.d, n)
                assert int(dec.primitive_part) == prod(q**e for q, e in oracle.items())
                assert int(p.records[n - 1].P) == dec.primitive_part
                instances += 1
        assert instances > 0
        info["text"] = f"{instances} (c,d,n) with |b_n| <= 1e12 match exactly"


def test_c4_rigid_divisibility(sweep):
    report, _, _ = sweep
    with criterion("4 rigid divisibility suite") as info:
        rds = [v for v in report.violations if v["kind"] == "rds"]
        assert rds == []
        assert all(p.terms >= RDS_DEPTH for p in report.points)
        assert all(p.rds_ok and p.rds_instances > 0 for p in report.points)
        total = sum(p.rds_instances for p in report.points)
        info["text"] = f"{total} instances (p <= 1e4, b_1..b_8), 0 violations"


def test_c5_growth(sweep):
    report, _, _ = sweep
    with criterion("5 growth suite") as info:
        assert [v for v in report.violations if v["kind"] == "growth"] == []
        assert all(p.growth_ok for p in report.points)
        info["text"] = f"all three inequalities hold on {len(report.points)} orbits"


def test_c6_golden_fixtures():
    with criterion("6 golden fixtures") as info:
        # frozen from tests/oracles.py (trial division + history exclusion)
        table = DecompositionTable(MapParams(1, 2))
        table.extend(6)
        assert [table.term(n) for n in range(1, 7)] == naive_orbit(1, 2, 6) == [1, 2, 5, 26, 677, 458330]
        assert [table.primitive_part(n) for n in range(1, 7)] == [1, 2, 5, 13, 677, 45833]
        assert [table.nonprimitive_part(n) for n in range(1, 7)] == [1, 1, 1, 2, 1, 10]
        t3 = DecompositionTable(MapParams(3, 2))
        assert (t3.primitive_part(4), t3.nonprimitive_part(4)) == (1801, 12)
        info["text"] = "c=1,d=2 orbit/P/N and c=3,d=2 P_4=1801, N_4=12"


def test_c7_determinism(sweep, tmp_path):
    _, _, first = sweep
    with criterion("7 determinism") as info:
        second = tmp_path / "cold2.json"
        with second.open("w", encoding="utf-8") as fh:
            run_sweep(SPEC).write_json(fh)
        size = first.stat().st_size
        try:
            assert filecmp.cmp(first, second, shallow=False)
        finally:
            # ~230 MB each; pytest would otherwise keep them around
            second.unlink()
            first.unlink()
        info["text"] = f"two cold runs byte-identical ({size} bytes)"
