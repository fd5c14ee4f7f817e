import math
import random
from fractions import Fraction

import pytest

from gcdlab.search import (
    SearchSpace,
    exhaustive_max,
    exhaustive_max_bruteforce,
    hunt_violations,
    max_pairwise_compatible,
    random_structured_instance,
)


def test_acceptance_witness():
    res = exhaustive_max(SearchSpace(X=4, Y=4, D=2))
    assert res.max_product == 9
    assert set(res.best_a) == {4, 6, 8} and set(res.best_b) == {4, 6, 8}
    assert res.optimal


def test_no_constraint_gives_full_intervals():
    res = exhaustive_max(SearchSpace(X=5, Y=7, D=1))
    assert res.max_product == 6 * 8


def test_degenerate_window():
    for D in (3, 5, 8):
        res = exhaustive_max(SearchSpace(X=D, Y=D, D=D))
        assert res.max_product == 4
        assert set(res.best_a) == {D, 2 * D}


def test_bnb_equals_bruteforce():
    for X, Y, D in [
        (3, 3, 2), (4, 5, 2), (5, 4, 3), (6, 6, 4), (7, 5, 2),
        (8, 8, 5), (9, 7, 3), (10, 10, 6), (10, 6, 4),
    ]:
        fast = exhaustive_max(SearchSpace(X=X, Y=Y, D=D))
        slow = exhaustive_max_bruteforce(SearchSpace(X=X, Y=Y, D=D))
        assert fast.max_product == slow.max_product, (X, Y, D)
        diag_fast = exhaustive_max(SearchSpace(X=X, Y=X, D=D, force_equal=True))
        diag_slow = exhaustive_max_bruteforce(SearchSpace(X=X, Y=X, D=D, force_equal=True))
        assert diag_fast.max_product == diag_slow.max_product, ("diag", X, D)


def test_bipartite_side_can_exceed_diagonal_cap():
    # A = {10, 12, 15, 20} vs B = {60} is feasible at D = 10 although the A
    # side exceeds floor(X/D) + 1 = 2, so the diagonal gap bound is not a
    # valid per-side prune in bipartite mode; the search must still agree
    # with plain enumeration on such windows
    A, b = [10, 12, 15, 20], 60
    assert all(math.gcd(a, b) >= 10 for a in A)
    assert len(A) > 10 // 10 + 1
    fast = exhaustive_max(SearchSpace(X=10, Y=60, D=10, exhaustive_limit=70))
    slow = exhaustive_max_bruteforce(SearchSpace(X=10, Y=60, D=10, exhaustive_limit=70))
    assert fast.max_product == slow.max_product


def test_threshold_mode_exact_matches_definition():
    target = Fraction(1, 2)
    sp = SearchSpace(X=4, Y=4, D=2, delta_target=target, mode="threshold-delta")
    res = exhaustive_max(sp)
    assert res.optimal
    ua = list(range(4, 9))
    best = 0
    for am in range(1, 1 << 5):
        A = [v for i, v in enumerate(ua) if am >> i & 1]
        for bm in range(1, 1 << 5):
            B = [v for i, v in enumerate(ua) if bm >> i & 1]
            good = sum(1 for a in A for b in B if math.gcd(a, b) >= 2)
            if Fraction(good) >= target * len(A) * len(B):
                best = max(best, len(A) * len(B))
    assert res.max_product == best


def test_threshold_mode_result_is_feasible():
    sp = SearchSpace(X=6, Y=6, D=3, delta_target=Fraction(2, 3), mode="threshold-delta")
    res = exhaustive_max(sp)
    good = sum(1 for a in res.best_a for b in res.best_b if math.gcd(a, b) >= 3)
    assert Fraction(good) >= Fraction(2, 3) * len(res.best_a) * len(res.best_b)


def test_threshold_mode_above_cap_is_lower_bound():
    sp = SearchSpace(X=15, Y=15, D=3, delta_target=Fraction(1, 2), mode="threshold-delta")
    res = exhaustive_max(sp, seed=5)
    assert not res.optimal
    good = sum(1 for a in res.best_a for b in res.best_b if math.gcd(a, b) >= 3)
    assert Fraction(good) >= Fraction(1, 2) * len(res.best_a) * len(res.best_b)


def test_universe_cap_enforced():
    with pytest.raises(ValueError, match="universe too large"):
        exhaustive_max(SearchSpace(X=40, Y=5, D=2))
    with pytest.raises(ValueError):
        exhaustive_max(SearchSpace(X=5, Y=5, D=2, force_equal=True, mode="nonsense"))


def test_diagonal_sharpness_at_multiples():
    # for X a multiple of D the gap bound floor(X/D) + 1 is attained, and
    # the multiples-of-D set is a witness
    for X, D in [(6, 2), (12, 3), (16, 4), (15, 5)]:
        best = max_pairwise_compatible(X, D)
        assert len(best) == X // D + 1
        witness = list(range(X, 2 * X + 1, D))
        assert len(witness) == X // D + 1
        assert all(
            math.gcd(a, b) >= D for a in witness for b in witness if a != b
        )


def test_structured_instance_generator():
    rng = random.Random(83)
    for _ in range(20):
        si, ms = random_structured_instance(rng)
        assert len(si.omega_prime) >= 1
        assert si.omega_prime.delta <= si.omega.delta


def test_hunt_small_run_clean():
    assert hunt_violations(scale_limit=10, seed=7, n_structured=150) == []


def test_hunt_is_deterministic():
    a = hunt_violations(scale_limit=6, seed=11, n_structured=40)
    b = hunt_violations(scale_limit=6, seed=11, n_structured=40)
    assert a == b
