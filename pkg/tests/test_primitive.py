from math import prod

import pytest
from gmpy2 import mpz
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_orbit, primitive_by_history
from ppdorbit import (
    DecompositionTable,
    DigitCapExceeded,
    FactorBudget,
    FactorStatus,
    MapParams,
    PreperiodicOrbit,
    RigidityViolation,
    classify,
    has_primitive_prime,
    nonprimitive_part,
    primitive_part,
    primitive_primes,
    verify_theorem,
)
from ppdorbit.primitive import proper_divisors

C1D2 = MapParams(1, 2)
C3D2 = MapParams(3, 2)


def test_proper_divisors():
    assert proper_divisors(1) == []
    assert proper_divisors(12) == [1, 2, 3, 4, 6]
    assert proper_divisors(49) == [1, 7]


@pytest.mark.parametrize("params, n, expected", [(C1D2, 1, 1), (C1D2, 6, 10), (C3D2, 4, 12)])
def test_nonprimitive_part_examples(params, n, expected):
    assert nonprimitive_part(params, n) == expected


@pytest.mark.parametrize("params, n, expected", [(C1D2, 4, 13), (C1D2, 1, 1), (C1D2, 6, 45833)])
def test_primitive_part_examples(params, n, expected):
    assert primitive_part(params, n) == expected


@pytest.mark.parametrize(
    "params, n, expected",
    [(C1D2, 1, False), (C1D2, 2, True), (C3D2, 1, True), (MapParams(-1, 3), 1, False)],
)
def test_has_primitive_prime_examples(params, n, expected):
    assert has_primitive_prime(params, n) is expected


def test_golden_c1_d2():
    table = DecompositionTable(C1D2)
    table.extend(6)
    assert [table.term(n) for n in range(1, 7)] == [1, 2, 5, 26, 677, 458330]
    assert [table.primitive_part(n) for n in range(1, 7)] == [1, 2, 5, 13, 677, 45833]
    assert [table.nonprimitive_part(n) for n in range(1, 7)] == [1, 1, 1, 2, 1, 10]


def test_golden_c3_d2():
    assert primitive_part(C3D2, 4) == 1801
    assert nonprimitive_part(C3D2, 4) == 12


@pytest.mark.parametrize(
    "params, n, P, primes",
    [(C1D2, 3, 5, ((5, 1),)), (C3D2, 3, 49, ((7, 2),)), (C1D2, 1, 1, ())],
)
def test_primitive_primes_examples(params, n, P, primes):
    dec = primitive_primes(params, n, FactorBudget())
    assert dec.primitive_part == P
    assert dec.primitive_primes == primes
    assert dec.factor_status is FactorStatus.COMPLETE


def test_primitive_primes_partial_under_tight_budget():
    # P_6 for z^2 + 7 is large; a tiny budget cannot finish it
    params = MapParams(7, 2)
    dec = primitive_primes(params, 6, FactorBudget(trial_limit=10, rho_iterations=0))
    assert dec.factor_status is FactorStatus.PARTIAL
    assert prod(mpz(p) ** e for p, e in dec.primitive_primes) * dec.unresolved == dec.primitive_part


def test_memo_is_reused_and_checked():
    table = DecompositionTable(C1D2)
    assert primitive_part(C1D2, 6, table) == 45833
    assert len(table) == 6
    with pytest.raises(ValueError):
        primitive_part(C3D2, 2, table)


@pytest.mark.parametrize("c, d", [(0, 2), (-1, 2), (-1, 6), (-2, 2)])
def test_preperiodic_rejected(c, d):
    with pytest.raises(PreperiodicOrbit):
        DecompositionTable(MapParams(c, d))
    with pytest.raises(PreperiodicOrbit):
        primitive_part(MapParams(c, d), 1)
    with pytest.raises(PreperiodicOrbit):
        verify_theorem(MapParams(c, d), 3)


def test_digit_cap_propagates_and_keeps_table_consistent():
    table = DecompositionTable(MapParams(10, 2), digit_cap=20)
    with pytest.raises(DigitCapExceeded):
        table.extend(8)
    assert len(table) == 5
    assert table.extend(8, strict=False) == 5


def test_preload_matches_fresh_computation():
    fresh = DecompositionTable(MapParams(5, 3))
    fresh.extend(5)
    warm = DecompositionTable(MapParams(5, 3))
    warm.preload([fresh.term(n) for n in range(1, 4)], [fresh.primitive_part(n) for n in range(1, 4)])
    warm.extend(5)
    for n in range(1, 6):
        assert warm.decomposition(n) == fresh.decomposition(n)


def test_preload_rejects_inconsistent_values():
    table = DecompositionTable(C1D2)
    with pytest.raises(RigidityViolation):
        table.preload([1, 2, 5, 26], [1, 2, 5, 26])


def test_rigidity_violation_is_loud():
    table = DecompositionTable(C1D2)
    table.extend(3)
    table._terms.append(mpz(27))  # corrupt b_4: N_4 = P_2 = 2 does not divide 27
    with pytest.raises(RigidityViolation):
        table.extend(4)


@pytest.mark.parametrize(
    "params, n_max, observed",
    [
        (C1D2, 6, [False, True, True, True, True, True]),
        (MapParams(-1, 3), 4, [False, True, True, True]),
        (MapParams(2, 2), 4, [True, True, True, True]),
    ],
)
def test_verify_theorem_examples(params, n_max, observed):
    report = verify_theorem(params, n_max)
    assert report.ok
    assert [report.observed[n] for n in range(1, n_max + 1)] == observed


def test_decomposition_examples_c_minus1_d3_and_c2_d2():
    assert [primitive_part(MapParams(-1, 3), n) for n in range(1, 5)] == [1, 2, 9, 365]
    assert [primitive_part(MapParams(2, 2), n) for n in range(1, 5)] == [2, 3, 19, 241]
    assert nonprimitive_part(MapParams(2, 2), 4) == 6


def _wandering(c, d):
    return classify(MapParams(c, d)).wandering


@settings(max_examples=80, deadline=None)
@given(c=st.integers(-30, 30), d=st.integers(2, 4))
def test_oracle_equivalence(c, d):
    if not _wandering(c, d):
        return
    params = MapParams(c, d)
    terms = naive_orbit(c, d, 8)
    table = DecompositionTable(params)
    budget = FactorBudget(trial_limit=10**4)
    for n, t in enumerate(terms, 1):
        if abs(t) > 10**12:
            break
        oracle = primitive_by_history(terms, n)
        dec = primitive_primes(params, n, budget, table)
        assert dec.factor_status is FactorStatus.COMPLETE
        assert dict(dec.primitive_primes) == oracle
        assert dec.primitive_part == prod(p**e for p, e in oracle.items())


@settings(max_examples=60, deadline=None)
@given(c=st.integers(-100, 100), d=st.integers(2, 5))
def test_multiplicativity_and_divisor_monotonicity(c, d):
    if not _wandering(c, d):
        return
    table = DecompositionTable(MapParams(c, d), digit_cap=20_000)
    k = table.extend(9, strict=False)
    for n in range(1, k + 1):
        assert table.primitive_part(n) * table.nonprimitive_part(n) == abs(table.term(n))
        for m in proper_divisors(n):
            assert table.nonprimitive_part(n) % table.primitive_part(m) == 0


@pytest.mark.parametrize("c, d", [(1, 2), (1, 3), (-1, 3), (-1, 5)])
def test_unit_edge(c, d):
    table = DecompositionTable(MapParams(c, d))
    assert table.primitive_part(1) == 1
    assert table.nonprimitive_part(1) == 1


def test_listed_primes_absent_from_history():
    params = MapParams(6, 2)
    terms = naive_orbit(6, 2, 5)
    for n in range(1, 6):
        dec = primitive_primes(params, n)
        for p, _ in dec.primitive_primes:
            assert all(t % p for t in terms[: n - 1])


def test_recomputation_is_deterministic():
    a = DecompositionTable(MapParams(-7, 3))
    b = DecompositionTable(MapParams(-7, 3))
    a.extend(7)
    b.extend(7)
    assert [a.decomposition(n) for n in range(1, 8)] == [b.decomposition(n) for n in range(1, 8)]
