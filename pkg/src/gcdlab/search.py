"""Exhaustive and branch-and-bound search for extremal sets on small dyadic
universes, plus a violation hunter for the sharp constituent bounds (the
diagonal gap bound and the delta^-2 product bound on structured instances).

The headline inequality with its 1000^(1+#P_sml) factor is deliberately not
hunted: at desk scale that constant makes the check vacuous, so the hunter
targets the bounds that are actually tight.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .instance import GcdInstance, build_omega_gcd
from .structure import InternalConsistencyError, extract_witnesses, find_modulus, StructuredInstance

__all__ = [
    "SearchResult",
    "SearchSpace",
    "Violation",
    "exhaustive_max",
    "exhaustive_max_bruteforce",
    "hunt_violations",
    "max_pairwise_compatible",
    "random_structured_instance",
]

EXHAUSTIVE_SIDE_LIMIT = 20  # integers per side for the exact searches
THRESHOLD_SIDE_LIMIT = 12  # stricter cap for the delta < 1 exact mode


@dataclass(frozen=True)
class SearchSpace:
    """Search domain: A ranges over subsets of [X, 2X], B over [Y, 2Y].

    mode "exact-delta-1" maximizes |A||B| with gcd(a, b) >= D required for
    every cross pair; "threshold-delta" requires only a delta_target
    fraction of good pairs.  force_equal restricts to A = B (diagonal case,
    needs X == Y)."""

    X: int
    Y: int
    D: int
    delta_target: Fraction | None = None
    mode: str = "exact-delta-1"
    force_equal: bool = False
    exhaustive_limit: int = EXHAUSTIVE_SIDE_LIMIT

    def universes(self) -> tuple[list[int], list[int]]:
        ua = list(range(self.X, 2 * self.X + 1))
        ub = list(range(self.Y, 2 * self.Y + 1))
        return ua, ub

    def check(self) -> None:
        if self.mode not in ("exact-delta-1", "threshold-delta"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.D < 1:
            raise ValueError("D must be >= 1")
        limit = self.exhaustive_limit
        if self.mode == "threshold-delta":
            if self.delta_target is None:
                raise ValueError("threshold-delta mode needs delta_target")
        if self.X + 1 > limit + 1 or self.Y + 1 > limit + 1:
            raise ValueError(
                f"universe too large: {self.X + 1} or {self.Y + 1} integers "
                f"per side exceeds the exhaustive limit {limit + 1}"
            )
        if self.force_equal and self.X != self.Y:
            raise ValueError("force_equal needs X == Y")


@dataclass(frozen=True)
class SearchResult:
    best_a: tuple[int, ...]
    best_b: tuple[int, ...]
    max_product: int
    optimal: bool


def _subset(universe: list[int], mask: int) -> tuple[int, ...]:
    return tuple(v for i, v in enumerate(universe) if mask >> i & 1)


def _compat_masks(ua: list[int], ub: list[int], D: int) -> list[int]:
    out = []
    for b in ub:
        m = 0
        for i, a in enumerate(ua):
            if math.gcd(a, b) >= D:
                m |= 1 << i
        out.append(m)
    return out


def _max_clique(universe: list[int], D: int, *, size_cap: int | None = None):
    """Largest subset with gcd >= D for every pair, by plain DFS with the
    popcount bound.  size_cap, when given, is a proven cap used only for an
    early exit once attained (the hunter passes None to keep its check
    non-vacuous)."""
    n = len(universe)
    adj = []
    for i in range(n):
        m = 0
        for j in range(n):
            if i != j and math.gcd(universe[i], universe[j]) >= D:
                m |= 1 << j
        adj.append(m)
    best_mask = 0
    best_size = 0

    def expand(cand: int, cur: int, size: int) -> None:
        nonlocal best_mask, best_size
        if size > best_size:
            best_size, best_mask = size, cur
        while cand:
            if size_cap is not None and best_size >= size_cap:
                return
            if size + cand.bit_count() <= best_size:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(cand & adj[v], cur | low, size + 1)

    expand((1 << n) - 1, 0, 0)
    return _subset(universe, best_mask)


def max_pairwise_compatible(X: int, D: int, *, use_cap: bool = False) -> tuple[int, ...]:
    """Largest A in [X, 2X] with pairwise gcd >= D."""
    universe = list(range(X, 2 * X + 1))
    cap = (X // D + 1) if use_cap else None
    return _max_clique(universe, D, size_cap=cap)


def _bipartite_max(ua: list[int], ub: list[int], D: int):
    """Max |A||B| with every cross pair compatible: enumerate B by DFS, the
    optimal A for a fixed B is everything compatible with all of B."""
    swap = len(ub) > len(ua)
    if swap:
        ua, ub = ub, ua
    compat = _compat_masks(ua, ub, D)
    full = (1 << len(ua)) - 1
    best = 0
    best_pair = ((), ())

    chosen: list[int] = []

    def dfs(idx: int, mask: int, size: int) -> None:
        nonlocal best, best_pair
        prod = mask.bit_count() * size
        if prod > best:
            best = prod
            best_pair = (_subset(ua, mask), tuple(ub[i] for i in chosen))
        if idx == len(ub):
            return
        if mask.bit_count() * (size + len(ub) - idx) <= best:
            return
        m2 = mask & compat[idx]
        if m2:
            chosen.append(idx)
            dfs(idx + 1, m2, size + 1)
            chosen.pop()
        dfs(idx + 1, mask, size)

    dfs(0, full, 0)
    a_side, b_side = best_pair
    if swap:
        a_side, b_side = b_side, a_side
    return a_side, b_side, best


def _good_degree(ua: list[int], b: int, amask: int, D: int) -> int:
    return sum(1 for i, a in enumerate(ua) if amask >> i & 1 and math.gcd(a, b) >= D)


def _threshold_exact(ua: list[int], ub: list[int], D: int, target: Fraction):
    """Exact delta-threshold search: enumerate A; for fixed A and |B| = m the
    best achievable good-pair count is the sum of the m largest degrees, so
    feasibility per m reduces to a prefix-sum test."""
    best = 0
    best_pair = ((), ())
    for amask in range(1, 1 << len(ua)):
        na = amask.bit_count()
        degs = sorted(
            ((_good_degree(ua, b, amask, D), -b) for b in ub), reverse=True
        )
        prefix = 0
        for m in range(1, len(ub) + 1):
            prefix += degs[m - 1][0]
            if Fraction(prefix) >= target * na * m and na * m > best:
                best = na * m
                chosen_b = tuple(sorted(-d[1] for d in degs[:m]))
                best_pair = (_subset(ua, amask), chosen_b)
    return best_pair[0], best_pair[1], best


def _threshold_local(
    ua: list[int], ub: list[int], D: int, target: Fraction, seed: int, iters: int = 4000
):
    """Randomized local search for the delta-threshold problem above the
    exact cap; the result is a lower bound, never claimed optimal."""
    rng = random.Random(seed)
    gcd = math.gcd

    def good(aset, bset):
        return sum(1 for a in aset for b in bset if gcd(a, b) >= D)

    def feasible(aset, bset):
        return aset and bset and Fraction(good(aset, bset)) >= target * len(aset) * len(bset)

    cur_a = {min(ua, key=lambda a: (a % D, a))}
    cur_b = {min(ub, key=lambda b: (b % D, b))}
    if feasible(cur_a, cur_b):
        best = len(cur_a) * len(cur_b)
        best_a, best_b = set(cur_a), set(cur_b)
    else:
        best = 0
        best_a, best_b = set(), set()
    for _ in range(iters):
        side, pool, cur = (
            ("a", ua, cur_a) if rng.random() < 0.5 else ("b", ub, cur_b)
        )
        v = rng.choice(pool)
        if v in cur:
            if len(cur) > 1:
                cur.discard(v)
        else:
            cur.add(v)
        if not feasible(cur_a, cur_b):
            # revert
            if v in cur:
                cur.discard(v)
            else:
                cur.add(v)
            continue
        prod = len(cur_a) * len(cur_b)
        if prod > best:
            best = prod
            best_a, best_b = set(cur_a), set(cur_b)
    return tuple(sorted(best_a)), tuple(sorted(best_b)), best


def exhaustive_max(space: SearchSpace, *, seed: int = 0) -> SearchResult:
    """Maximum of |A||B| over the search space.

    exact-delta-1 results are exact (branch and bound agreeing with plain
    enumeration); threshold-delta results are exact up to 12 integers per
    side and a labeled lower bound beyond that."""
    space.check()
    ua, ub = space.universes()
    if space.mode == "exact-delta-1":
        if space.force_equal:
            a = max_pairwise_compatible(space.X, space.D, use_cap=True)
            return SearchResult(a, a, len(a) ** 2, True)
        a, b, prod = _bipartite_max(ua, ub, space.D)
        return SearchResult(a, b, prod, True)
    target = space.delta_target
    if space.force_equal:
        raise ValueError("threshold-delta mode does not support force_equal")
    if len(ua) <= THRESHOLD_SIDE_LIMIT + 1 and len(ub) <= THRESHOLD_SIDE_LIMIT + 1:
        a, b, prod = _threshold_exact(ua, ub, space.D, target)
        return SearchResult(a, b, prod, True)
    a, b, prod = _threshold_local(ua, ub, space.D, target, seed)
    return SearchResult(a, b, prod, False)


def exhaustive_max_bruteforce(space: SearchSpace) -> SearchResult:
    """Independent oracle: plain enumeration with the optimal counterpart
    side computed from the definition.  Only for small spaces."""
    space.check()
    ua, ub = space.universes()
    if space.mode != "exact-delta-1":
        raise ValueError("oracle covers the exact-delta-1 mode")
    gcd = math.gcd
    best = 0
    best_pair = ((), ())
    if space.force_equal:
        for mask in range(1, 1 << len(ua)):
            sub = _subset(ua, mask)
            if all(
                gcd(sub[i], sub[j]) >= space.D
                for i in range(len(sub))
                for j in range(i + 1, len(sub))
            ):
                if len(sub) ** 2 > best:
                    best = len(sub) ** 2
                    best_pair = (sub, sub)
        return SearchResult(best_pair[0], best_pair[1], best, True)
    for mask in range(1, 1 << len(ua)):
        sub = _subset(ua, mask)
        bmax = tuple(b for b in ub if all(gcd(a, b) >= space.D for a in sub))
        prod = len(sub) * len(bmax)
        if prod > best:
            best = prod
            best_pair = (sub, bmax)
    return SearchResult(best_pair[0], best_pair[1], best, True)


# ---------------------------------------------------------------------------
# Violation hunting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: dict


def random_structured_instance(
    rng: random.Random,
    *,
    max_scale: int = 40,
    max_side: int = 10,
    exhaustive_limit: int = 4096,
):
    """One seeded random instance passed through the modulus search; retries
    deterministically until the pivotal pair set is nonempty.

    Sets always contain at least two multiples of D per side, so the gcd
    pair set is nonempty by construction."""
    while True:
        X = rng.randint(4, max_scale)
        Y = rng.randint(4, max_scale)
        D = rng.randint(2, min(X, Y))
        ua = list(range(X, 2 * X + 1))
        ub = list(range(Y, 2 * Y + 1))
        mult_a = [v for v in ua if v % D == 0]
        mult_b = [v for v in ub if v % D == 0]
        na = rng.randint(2, max_side)
        nb = rng.randint(2, max_side)
        A = set(rng.sample(mult_a, min(2, len(mult_a))))
        B = set(rng.sample(mult_b, min(2, len(mult_b))))
        while len(A) < min(na, len(ua)):
            A.add(rng.choice(ua))
        while len(B) < min(nb, len(ub)):
            B.add(rng.choice(ub))
        inst = GcdInstance.build(sorted(A), sorted(B), D, X, Y)
        omega = build_omega_gcd(inst)
        if not omega.edges:
            continue
        ms = find_modulus(inst, omega, exhaustive_limit=exhaustive_limit)
        if not ms.omega_prime.edges:
            continue
        return StructuredInstance(inst, omega, ms.n, ms.omega_prime), ms


def hunt_violations(
    scale_limit: int = 16,
    seed: int = 0,
    *,
    n_structured: int = 10000,
    max_scale: int = 40,
    exhaustive_limit: int = 4096,
) -> list[Violation]:
    """Hunt for counterexamples to the sharp bounds; the returned list is
    empty on success (violations are data, not errors).

    Part one sweeps every diagonal delta = 1 case X, D <= scale_limit with
    an unpruned exhaustive search, checking |A| <= floor(X/D) + 1.  Part
    two runs seeded structured instances through the witness chain and the
    filtered-density product bound 1000 * delta'^-2 * XY / D^2.
    """
    violations: list[Violation] = []
    for X in range(1, scale_limit + 1):
        for D in range(1, X + 1):
            best = max_pairwise_compatible(X, D, use_cap=False)
            allowed = X // D + 1
            if len(best) > allowed:
                violations.append(
                    Violation(
                        "diagonal-gap-bound",
                        {"X": X, "D": D, "set": list(best), "allowed": allowed},
                    )
                )
    rng = random.Random(seed)
    for _ in range(n_structured):
        si, ms = random_structured_instance(
            rng, max_scale=max_scale, exhaustive_limit=exhaustive_limit
        )
        inst = si.base
        dprime = si.delta_prime
        bound = 1000 * inst.X * inst.Y / (dprime * dprime * inst.D * inst.D)
        ok = Fraction(inst.size_product()) <= bound
        try:
            report = extract_witnesses(si)
            chain_ok = report.chain_ok and report.holds
        except InternalConsistencyError as exc:
            chain_ok = False
            report = None
        if not (ok and chain_ok):
            violations.append(
                Violation(
                    "structured-product-bound",
                    {
                        "A": [a.value for a in inst.A],
                        "B": [b.value for b in inst.B],
                        "X": str(inst.X),
                        "Y": str(inst.Y),
                        "D": str(inst.D),
                        "N": ms.n.value,
                        "delta_prime": str(dprime),
                        "bound": str(bound),
                        "size_product": inst.size_product(),
                    },
                )
            )
    return violations
