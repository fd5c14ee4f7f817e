import random
from fractions import Fraction

import pytest

from gcdlab.instance import GcdInstance, PairSet, build_omega_gcd
from gcdlab.structure import (
    DefectError,
    StructuredInstance,
    check_pivotal,
    defect,
    defect_census,
    extract_witnesses,
    find_modulus,
    quad_identity_check,
    quad_identity_witnesses,
    structure_instance,
    valuation_measure,
)
from gcdlab.verify import random_pivotal_triple, random_structured_set


def test_valuation_measure_example():
    inst = GcdInstance.build([2, 3, 4], [2, 6], 2, 2, 2, check_ranges=False)
    om = build_omega_gcd(inst)
    assert {(a.value, b.value) for a, b in om.edges} == {
        (2, 2), (2, 6), (4, 2), (4, 6), (3, 6),
    }
    vm = valuation_measure(inst, om, 2)
    assert vm.alpha == {0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(1, 3)}
    assert vm.beta == {1: Fraction(1)}
    assert vm.mu == {(0, 1): Fraction(1, 5), (1, 1): Fraction(2, 5), (2, 1): Fraction(2, 5)}
    assert vm.check_sums()


def test_valuation_measure_point_cases():
    # all elements coprime to p: mass sits at (0, 0)
    inst = GcdInstance.build([3, 5], [3, 5], 1, 3, 3)
    om = build_omega_gcd(inst)
    vm = valuation_measure(inst, om, 2)
    assert vm.mu == {(0, 0): Fraction(1)}
    # all elements sharing v_p = 1: mass at (1, 1)
    inst2 = GcdInstance.build([6, 10], [6, 10], 2, 6, 6)
    om2 = build_omega_gcd(inst2)
    vm2 = valuation_measure(inst2, om2, 2)
    assert vm2.mu == {(1, 1): Fraction(1)}


def test_valuation_measure_sums_random():
    rng = random.Random(41)
    for _ in range(50):
        A = sorted({rng.randint(10, 20) for _ in range(rng.randint(1, 6))})
        B = sorted({rng.randint(10, 20) for _ in range(rng.randint(1, 6))})
        inst = GcdInstance.build(A, B, 1, 10, 10)
        om = build_omega_gcd(inst)
        for p in (2, 3, 5):
            assert valuation_measure(inst, om, p).check_sums()


def test_valuation_measure_rejects_empty():
    inst = GcdInstance.build([3], [5], 1, 3, 5, check_ranges=False)
    empty = PairSet((), 1, 1)
    with pytest.raises(ValueError):
        valuation_measure(inst, empty, 2)


def test_check_pivotal_examples():
    assert check_pivotal(12, 18, 6)
    assert not check_pivotal(4, 9, 6)
    assert check_pivotal(6, 6, 6)


def test_find_modulus_two_powers():
    inst = GcdInstance.build([2, 4], [2, 4], 1, 2, 2)
    ms = find_modulus(inst, build_omega_gcd(inst))
    assert ms.n.value == 2  # k = 1 and k = 2 tie at 3 pairs; smallest wins
    assert len(ms.omega_prime) == 3
    assert ms.fraction == Fraction(3, 4)
    assert ms.strategy == "exhaustive"


def test_find_modulus_constant_set():
    inst = GcdInstance.build([12], [12], 12, 12, 12)
    ms = find_modulus(inst, build_omega_gcd(inst))
    assert ms.n.value == 12
    assert ms.fraction == 1


def test_find_modulus_short_cofactor_window():
    # multiples of D with X/D < D: N locks onto D times the smallest
    # cofactor; the pivotal fraction lands below 1/2 on these non-minimal
    # instances (computed, not asserted against the 1/2 of the minimal case)
    for X, D, expect_n, expect_frac in [
        (50, 10, 50, Fraction(1, 4)),
        (24, 6, 36, Fraction(7, 25)),
    ]:
        A = list(range(X, 2 * X + 1, D))
        inst = GcdInstance.build(A, A, D, X, X)
        ms = find_modulus(inst, build_omega_gcd(inst))
        assert ms.n.value == expect_n
        assert ms.fraction == expect_frac


def test_find_modulus_greedy_fallback():
    # exhaustive_limit 1 forces the greedy path; the filter must still be
    # exactly the pivotal set of the returned N
    inst = GcdInstance.build([100, 110, 120, 150], [100, 120, 140], 10, 100, 100)
    om = build_omega_gcd(inst)
    ms = find_modulus(inst, om, exhaustive_limit=1)
    assert ms.strategy == "greedy"
    manual = [e for e in om.edges if check_pivotal(e[0], e[1], ms.n)]
    assert list(ms.omega_prime.edges) == manual


def test_exhaustive_at_least_greedy():
    rng = random.Random(43)
    for _ in range(25):
        A = sorted({rng.randint(8, 40) for _ in range(rng.randint(2, 7))})
        B = sorted({rng.randint(8, 40) for _ in range(rng.randint(2, 7))})
        inst = GcdInstance.build(A, B, 1, min(A), min(B), check_ranges=False)
        om = build_omega_gcd(inst)
        exact = find_modulus(inst, om)
        greedy = find_modulus(inst, om, exhaustive_limit=1)
        assert exact.fraction >= greedy.fraction


def test_defect_examples():
    d = defect(12, 6)
    assert (d.a_plus.value, d.a_minus.value, d.a_star.value) == (2, 1, 2)
    d = defect(3, 6)
    assert (d.a_plus.value, d.a_minus.value, d.a_star.value) == (1, 2, 2)
    d = defect(6, 6)
    assert (d.a_plus.value, d.a_minus.value, d.a_star.value) == (1, 1, 1)


def test_defect_rejects_high_valuation():
    with pytest.raises(DefectError):
        defect(24, 6)  # v_2(24/6) = 2


def test_defect_roundtrip_and_coprimality():
    rng = random.Random(47)
    for _ in range(500):
        a, b, N = random_pivotal_triple(rng)
        for v in (a, b):
            d = defect(v, N)
            assert N * d.a_plus.value == v * d.a_minus.value  # recover a from (a+, a-, N)
            from math import gcd

            assert gcd(d.a_plus.value, d.a_minus.value) == 1
            assert d.a_star.value == d.a_plus.value * d.a_minus.value


def test_quad_identity_examples():
    assert quad_identity_check(12, 18, 6)
    assert quad_identity_check(6, 6, 6)
    # sampled valid triple, frozen: a = 30030, b = 510510/77 with N = 2310
    a, b, N = 2310 * 13, 2310 * 17 // 7, 2310
    assert check_pivotal(a, b, N)
    assert quad_identity_check(a, b, N)


def test_quad_identity_rejects_non_pivotal():
    # (14, 21, 6) collides at p = 7: both valuations are +1
    assert not check_pivotal(14, 21, 6)
    with pytest.raises(ValueError):
        quad_identity_check(14, 21, 6)


def test_quad_identity_per_prime_table():
    rows = quad_identity_witnesses(12, 18, 6)
    assert all(r.ok for r in rows)
    assert {r.p for r in rows} == {2, 3}


def test_quad_identity_sampled_sweep():
    rng = random.Random(53)
    for _ in range(1000):
        a, b, N = random_pivotal_triple(rng)
        assert check_pivotal(a, b, N)
        assert quad_identity_check(a, b, N)
        assert all(r.ok for r in quad_identity_witnesses(a, b, N))


def test_defect_census_examples():
    c = defect_census([6], 6, 6, 1)
    assert c.count == 1 and c.holds and c.bound == 2

    # {12, 15, 18} in [12, 24] with N = 6: defects 2, 10, 3
    c = defect_census([12, 15, 18], 6, 12, 3)
    assert c.count == 2
    assert c.holds and c.range_ok
    stars = {r.value: r.a_star for r in c.rows}
    assert stars == {12: 2, 15: 10, 18: 3}


def test_defect_census_rejects_bad_window():
    with pytest.raises(ValueError, match="outside"):
        defect_census([12, 30], 6, 12, 3)


def test_defect_census_property_sweep():
    rng = random.Random(59)
    for _ in range(100):
        S, N, X = random_structured_set(rng)
        star_max = max(defect(a, N).a_star.value for a in S)
        T = Fraction(1)
        while T <= 2 * star_max:
            c = defect_census(S, N, X, T)
            assert c.holds and c.range_ok
            T *= 2


def test_extract_witnesses_remark2():
    A = list(range(100, 201, 10))
    inst = GcdInstance.build(A, A, 10, 100, 100)
    si, ms = structure_instance(inst)
    rep = extract_witnesses(si)
    assert rep.holds and rep.chain_ok
    assert rep.a_star >= rep.a_star_lower
    assert rep.b_star >= rep.b_star_lower
    assert Fraction(rep.quad_product) <= rep.quad_cap


def test_extract_witnesses_single_pair():
    inst = GcdInstance.build([4], [6], 2, 4, 6, check_ranges=False)
    si, _ = structure_instance(inst)
    rep = extract_witnesses(si)
    assert rep.delta_prime == 1
    assert (rep.a, rep.b) == (4, 6)
    assert rep.holds and rep.chain_ok


def test_extract_witnesses_random_sweep():
    from gcdlab.search import random_structured_instance

    rng = random.Random(61)
    for _ in range(100):
        si, _ = random_structured_instance(rng)
        rep = extract_witnesses(si)
        assert rep.holds and rep.chain_ok


def test_structured_instance_rejects_non_pivotal_edges():
    inst = GcdInstance.build([4, 9], [4, 9], 1, 4, 4, check_ranges=False)
    om = build_omega_gcd(inst)
    from gcdlab.arith import factorize

    bad = PairSet(((factorize(4), factorize(9)),), 2, 2)
    with pytest.raises(ValueError, match="pivotal"):
        StructuredInstance(inst, om, factorize(6), bad)
