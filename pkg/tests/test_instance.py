import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcdlab.instance import (
    GcdInstance,
    InstanceError,
    build_omega_gcd,
    build_omega_ratio,
    chase_diagonal_bound,
    count_pairs_geq_fast,
    count_pairs_geq_naive,
    instance_from_json,
    instance_to_json,
    prime_sets,
    theorem1_bound,
    theorem1_holds,
    theorem51_bound,
)


def test_build_omega_examples():
    inst = GcdInstance.build([1, 2, 3, 4], [1, 2, 3, 4], 2, 1, 1, check_ranges=False)
    om = build_omega_gcd(inst)
    edges = {(a.value, b.value) for a, b in om.edges}
    assert edges == {(2, 2), (2, 4), (4, 2), (4, 4), (3, 3)}
    assert om.delta == Fraction(5, 16)

    inst1 = GcdInstance.build([1, 2, 3, 4], [1, 2, 3, 4], 1, 1, 1, check_ranges=False)
    assert build_omega_gcd(inst1).delta == 1

    inst2 = GcdInstance.build([4, 6, 8], [4, 6, 8], 2, 4, 4)
    assert build_omega_gcd(inst2).delta == 1


def test_omega_predicate_reverified():
    inst = GcdInstance.build([4, 6, 8], [4, 6, 8], 2, 4, 4)
    assert build_omega_gcd(inst).verify_predicate()
    assert build_omega_ratio([2, 3, 6], [2, 3, 6], 6).verify_predicate()


def test_census_examples():
    assert count_pairs_geq_fast([1, 2, 3, 4], [1, 2, 3, 4], 2) == 5
    assert count_pairs_geq_fast([6, 12], [9, 18], 3) == 4
    # gcd can never exceed the smaller element
    assert count_pairs_geq_fast([5, 9], [7, 11], 23) == 0
    assert count_pairs_geq_naive([5, 9], [7, 11], 23) == 0


def test_census_oracle_equivalence_sample():
    rng = random.Random(23)
    for _ in range(30):
        A = sorted({rng.randint(1, 10**6) for _ in range(rng.randint(1, 64))})
        B = sorted({rng.randint(1, 10**6) for _ in range(rng.randint(1, 64))})
        for D in (2, 5, 17, 1000):
            assert count_pairs_geq_fast(A, B, D) == count_pairs_geq_naive(A, B, D)


def test_census_non_integral_threshold():
    # gcd >= 2.5 is the same census as gcd >= 3
    A = [4, 6, 9, 10]
    assert count_pairs_geq_fast(A, A, Fraction(5, 2)) == count_pairs_geq_naive(A, A, 3)


def test_delta_monotone_in_threshold():
    rng = random.Random(31)
    for _ in range(20):
        A = sorted({rng.randint(1, 500) for _ in range(12)})
        B = sorted({rng.randint(1, 500) for _ in range(12)})
        counts = [count_pairs_geq_fast(A, B, D) for D in range(1, 40)]
        assert all(x >= y for x, y in zip(counts, counts[1:]))


def test_prime_sets_examples():
    ps, psml = prime_sets([12, 35], 5)
    assert ps == frozenset({2, 3, 5, 7})
    assert psml == frozenset({2, 3, 5})
    assert prime_sets([1], 5) == (frozenset(), frozenset())
    assert prime_sets([2**10], 2) == (frozenset({2}), frozenset({2}))


@settings(max_examples=100, deadline=None)
@given(
    st.sets(st.integers(min_value=1, max_value=5000), min_size=1, max_size=8),
    st.integers(min_value=0, max_value=100),
    st.integers(min_value=0, max_value=100),
)
def test_prime_sets_monotone_in_p0(S, p0a, p0b):
    lo, hi = min(p0a, p0b), max(p0a, p0b)
    ps, small_lo = prime_sets(S, lo)
    _, small_hi = prime_sets(S, hi)
    assert small_lo <= small_hi <= ps


def test_theorem1_bound_examples():
    i1 = GcdInstance.build([1], [1], 1, 1, 1, check_ranges=False)
    assert theorem1_bound(i1, Fraction(1)) == pytest.approx(1000.0)

    i2 = GcdInstance.build([12], [18], 5, 10, 10, p0=3, check_ranges=False)
    assert theorem1_bound(i2, Fraction(1)) == pytest.approx(4e9)

    i3 = GcdInstance.build([1], [1], 1, 1, 1, epsilon=0.5, check_ranges=False)
    assert theorem1_bound(i3, Fraction(1, 2)) == pytest.approx(1000 * 2**2.5)
    assert theorem1_holds(i3, Fraction(1, 2))


def test_theorem1_rejects_zero_delta():
    inst = GcdInstance.build([1], [1], 1, 1, 1, check_ranges=False)
    with pytest.raises(ValueError):
        theorem1_bound(inst, Fraction(0))


def test_theorem1_no_overflow_at_many_small_primes():
    # 150 small primes would overflow a float bound; log form must survive
    from gcdlab.arith import primes_up_to

    A = primes_up_to(1000)[:150]
    inst = GcdInstance.build(A, A, 1, min(A), min(A), p0=1000, check_ranges=False)
    assert theorem1_holds(inst, Fraction(1, 100))


def test_chase_examples():
    assert chase_diagonal_bound([4, 6, 8], 4, 2) == (True, 3)
    assert chase_diagonal_bound([6], 6, 3) == (True, 3)
    # recomputed from the definitions: all pairwise gcds are 2, 3, 5 >= 2
    assert chase_diagonal_bound([6, 10, 15], 6, 2) == (True, 4)


def test_chase_rejects_low_gcd():
    with pytest.raises(ValueError):
        chase_diagonal_bound([4, 9], 4, 2)


def test_theorem51_examples():
    delta, bound, holds = theorem51_bound([2], [2], 1)
    assert delta == 1 and holds
    assert bound == pytest.approx(1000**2 / 4)

    delta, bound, holds = theorem51_bound([2, 3, 6], [2, 3, 6], 6)
    assert delta == 1 and holds

    delta, bound, holds = theorem51_bound([30], [77], 100)
    assert delta == 0 and holds and math.isinf(bound)


def test_theorem51_rejects_non_squarefree():
    with pytest.raises(ValueError):
        theorem51_bound([4], [3], 10)


def test_remark3_density_law_at_scale():
    # multiples of k with X/k = 1000: the share of pairs with gcd >= m*k
    # stays above 1/(2m) for m <= 10
    k, X = 3, 3000
    A = list(range(X, 2 * X + 1, k))
    assert len(A) >= 1000
    for m in range(1, 11):
        got = Fraction(count_pairs_geq_fast(A, A, m * k), len(A) ** 2)
        assert got >= Fraction(1, 2 * m), (m, got)


def test_build_validates_fields():
    with pytest.raises(InstanceError, match="A"):
        GcdInstance.build([], [2], 1, 2, 2)
    with pytest.raises(InstanceError, match="outside"):
        GcdInstance.build([5, 30], [7], 2, 5, 7)
    with pytest.raises(InstanceError, match="epsilon"):
        GcdInstance.build([2], [2], 1, 2, 2, epsilon=1.0)
    with pytest.raises(InstanceError, match="D"):
        GcdInstance.build([2], [2], 5, 2, 2)


def test_range_inference_is_checked():
    inst = GcdInstance.build([10, 15, 20], [10, 20], 5)
    assert inst.X == 10 and inst.Y == 10
    with pytest.raises(InstanceError, match="dyadic"):
        GcdInstance.build([10, 21], [10, 20], 5)


def test_instance_file_roundtrip():
    inst = GcdInstance.build([100, 110, 120], [100, 120], 10, 100, 100, epsilon=0.25, p0=7)
    text = instance_to_json(inst)
    back = instance_from_json(text)
    assert back == inst
    assert instance_to_json(back) == text


def test_instance_file_inference_and_big_ints():
    big = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31 * 37 * 41 * 43 * 47
    text = instance_to_json(
        GcdInstance.build([big, 2 * big], [big], big, check_ranges=True)
    )
    back = instance_from_json(text)
    assert back.A[0].value == big
    assert instance_to_json(back) == text


def test_instance_file_diagnostics():
    with pytest.raises(InstanceError, match="JSON"):
        instance_from_json("nope")
    with pytest.raises(InstanceError, match="field A"):
        instance_from_json('{"A": [], "B": ["2"], "D": "1"}')
    with pytest.raises(InstanceError, match=r"field B\[0\]"):
        instance_from_json('{"A": ["2"], "B": ["x"], "D": "1"}')
    with pytest.raises(InstanceError, match="field D"):
        instance_from_json('{"A": ["2"], "B": ["2"]}')
    with pytest.raises(InstanceError, match="epsilon"):
        instance_from_json('{"A": ["2"], "B": ["2"], "D": "1", "epsilon": "half"}')


def test_delta_stored_exact():
    inst = GcdInstance.build([1, 2, 3], [1, 2, 3], 2, 1, 1, check_ranges=False)
    om = build_omega_gcd(inst)
    assert isinstance(om.delta, Fraction)
    assert om.delta == Fraction(2, 9)
