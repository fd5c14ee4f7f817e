"""Structural machinery around a GCD instance: per-prime valuation measures,
the search for a modulus N concentrating valuations, pivotal-pair filtering,
defect decompositions a = N * a_plus / a_minus, the defect-count census, and
extraction of a witness pair certifying the delta^-2 product bound.

All densities and comparisons are exact rationals; defect arithmetic is
exact integer arithmetic on factored values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import FactoredNat, as_factored, fraction_of, rational_valuations
from .instance import GcdInstance, PairSet, build_omega_gcd

__all__ = [
    "DefectCensus",
    "DefectDecomposition",
    "DefectError",
    "InternalConsistencyError",
    "ModulusSearch",
    "PrimeWitness",
    "StructuredInstance",
    "ValuationMeasure",
    "check_pivotal",
    "defect",
    "defect_census",
    "extract_witnesses",
    "find_modulus",
    "quad_identity_check",
    "quad_identity_witnesses",
    "structure_instance",
    "valuation_measure",
]

EXHAUSTIVE_LIMIT_DEFAULT = 10**6


class DefectError(ValueError):
    """Some |v_p(a/N)| >= 2, so the (a_plus, a_minus) split is undefined."""


class InternalConsistencyError(RuntimeError):
    """An unconditional counting guarantee failed; the implementation is wrong."""


# ---------------------------------------------------------------------------
# Valuation measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ValuationMeasure:
    """Relative densities at a prime p: alpha_i = |A_i|/|A| for the slices
    A_i = {a : v_p(a) = i}, beta_j likewise for B, and the edge measure
    mu(i, j) = |Omega restricted to A_i x B_j| / |Omega|."""

    p: int
    alpha: dict[int, Fraction]
    beta: dict[int, Fraction]
    mu: dict[tuple[int, int], Fraction]

    def check_sums(self) -> bool:
        one = Fraction(1)
        return (
            sum(self.alpha.values()) == one
            and sum(self.beta.values()) == one
            and sum(self.mu.values()) == one
        )


def valuation_measure(inst: GcdInstance, omega: PairSet, p: int) -> ValuationMeasure:
    """Exact (alpha, beta, mu) at prime p; omega must be nonempty."""
    if not omega.edges:
        raise ValueError("omega is empty: the edge measure is undefined")
    alpha: dict[int, Fraction] = {}
    for a in inst.A:
        i = a.valuation(p)
        alpha[i] = alpha.get(i, 0) + 1
    beta: dict[int, Fraction] = {}
    for b in inst.B:
        j = b.valuation(p)
        beta[j] = beta.get(j, 0) + 1
    mu: dict[tuple[int, int], Fraction] = {}
    for a, b in omega.edges:
        key = (a.valuation(p), b.valuation(p))
        mu[key] = mu.get(key, 0) + 1
    nA, nB, nE = len(inst.A), len(inst.B), len(omega.edges)
    return ValuationMeasure(
        p,
        {i: Fraction(c, nA) for i, c in sorted(alpha.items())},
        {j: Fraction(c, nB) for j, c in sorted(beta.items())},
        {k: Fraction(c, nE) for k, c in sorted(mu.items())},
    )


# ---------------------------------------------------------------------------
# Pivotal pairs and the modulus search
# ---------------------------------------------------------------------------


def check_pivotal(a, b, N) -> bool:
    """True iff |v_p(a/N)| + |v_p(b/N)| <= 1 at every prime."""
    a, b, N = as_factored(a), as_factored(b), as_factored(N)
    va = rational_valuations(a, N).as_dict()
    vb = rational_valuations(b, N).as_dict()
    return all(abs(va.get(p, 0)) + abs(vb.get(p, 0)) <= 1 for p in va.keys() | vb.keys())


@dataclass(frozen=True)
class ModulusSearch:
    """Outcome of the search for N = prod p^k_p maximizing the pivotal subset."""

    n: FactoredNat
    omega_prime: PairSet
    fraction: Fraction  # |Omega'| / |Omega|, reported rather than asserted >= 1/2
    exponents: tuple[tuple[int, int], ...]  # every pool prime, zeros included
    strategy: str  # "exhaustive" or "greedy"


def _per_prime_masks(inst: GcdInstance, omega: PairSet):
    elements = inst.A + inst.B
    pool = sorted({p for el in elements for p in el.primes()})
    edges = omega.edges
    out = []
    for p in pool:
        vals = [el.valuation(p) for el in elements]
        lo, hi = min(vals), max(vals)
        edge_vals = [(a.valuation(p), b.valuation(p)) for a, b in edges]
        masks = {}
        for k in range(lo, hi + 1):
            m = 0
            for idx, (i, j) in enumerate(edge_vals):
                if abs(i - k) + abs(j - k) <= 1:
                    m |= 1 << idx
            masks[k] = m
        freq: dict[int, int] = {}
        for v in vals:
            freq[v] = freq.get(v, 0) + 1
        out.append((p, lo, hi, masks, freq))
    return out


def _search_exhaustive(per_prime, full_mask: int) -> list[int]:
    best_count = -1
    best: list[int] = []

    def rec(i: int, mask: int, acc: list[int]) -> None:
        nonlocal best_count, best
        if mask.bit_count() <= best_count:
            return
        if i == len(per_prime):
            best_count = mask.bit_count()
            best = list(acc)
            return
        _, lo, hi, masks, _ = per_prime[i]
        for k in range(lo, hi + 1):
            acc.append(k)
            rec(i + 1, mask & masks[k], acc)
            acc.pop()

    rec(0, full_mask, [])
    return best


def _search_greedy(per_prime) -> list[int]:
    chosen = []
    for _, lo, hi, masks, freq in per_prime:
        counts = {k: masks[k].bit_count() for k in range(lo, hi + 1)}
        top = max(counts.values())
        cands = [k for k, c in counts.items() if c == top]
        if len(cands) > 1:
            # tie-break toward the mode of the valuation distribution
            top_freq = max(freq.get(k, 0) for k in cands)
            cands = [k for k in cands if freq.get(k, 0) == top_freq]
        chosen.append(min(cands))
    return chosen


def find_modulus(
    inst: GcdInstance,
    omega: PairSet,
    *,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT_DEFAULT,
) -> ModulusSearch:
    """Search for N = prod p^k_p over the primes of A u B maximizing the
    number of pairs with |v_p(a/N)| + |v_p(b/N)| <= 1 at every prime.

    Exact exhaustive search over k_p in [min valuation, max valuation] per
    prime while the product of range sizes stays within exhaustive_limit;
    otherwise greedy per prime (independently optimal centers, ties broken
    by the valuation mode, then smallest k).  The achieved |Omega'|/|Omega|
    is reported, never asserted to reach 1/2.
    """
    if not omega.edges:
        raise ValueError("omega is empty: nothing to structure")
    per_prime = _per_prime_masks(inst, omega)
    full_mask = (1 << len(omega.edges)) - 1
    total = 1
    for _, lo, hi, _, _ in per_prime:
        total *= hi - lo + 1
        if total > exhaustive_limit:
            break
    if total <= exhaustive_limit:
        strategy = "exhaustive"
        ks = _search_exhaustive(per_prime, full_mask)
    else:
        strategy = "greedy"
        ks = _search_greedy(per_prime)
    mask = full_mask
    for (p, lo, hi, masks, _), k in zip(per_prime, ks):
        mask &= masks[k]
    value = 1
    factors = []
    exponents = []
    for (p, *_), k in zip(per_prime, ks):
        exponents.append((p, k))
        if k > 0:
            value *= p**k
            factors.append((p, k))
    n = FactoredNat(value, tuple(factors))
    kept = tuple(e for idx, e in enumerate(omega.edges) if mask >> idx & 1)
    omega_prime = PairSet(kept, omega.n_left, omega.n_right, omega.kind, omega.threshold)
    return ModulusSearch(
        n,
        omega_prime,
        Fraction(len(kept), len(omega.edges)),
        tuple(exponents),
        strategy,
    )


@dataclass(frozen=True, eq=False)
class StructuredInstance:
    """An instance together with its pair set, modulus, and pivotal subset."""

    base: GcdInstance
    omega: PairSet
    n: FactoredNat
    omega_prime: PairSet

    def __post_init__(self) -> None:
        for a, b in self.omega_prime.edges:
            if not check_pivotal(a, b, self.n):
                raise ValueError(
                    f"pair ({a}, {b}) in omega_prime is not pivotal for N = {self.n}"
                )

    @property
    def delta_prime(self) -> Fraction:
        return self.omega_prime.delta


def structure_instance(
    inst: GcdInstance, *, exhaustive_limit: int = EXHAUSTIVE_LIMIT_DEFAULT
) -> tuple[StructuredInstance, ModulusSearch]:
    """Build Omega, search for N, and package the pivotal-filtered instance."""
    omega = build_omega_gcd(inst)
    ms = find_modulus(inst, omega, exhaustive_limit=exhaustive_limit)
    return StructuredInstance(inst, omega, ms.n, ms.omega_prime), ms


# ---------------------------------------------------------------------------
# Defects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DefectDecomposition:
    """a_plus = prod of primes with v_p(a/N) = +1, a_minus for -1, and their
    product a_star.  a_plus and a_minus are squarefree and coprime, and
    a_plus / a_minus = a / N as rationals."""

    a_plus: FactoredNat
    a_minus: FactoredNat
    a_star: FactoredNat

    def __post_init__(self) -> None:
        if any(e != 1 for _, e in self.a_plus.factors + self.a_minus.factors):
            raise ValueError("a_plus and a_minus must be squarefree")
        if math.gcd(self.a_plus.value, self.a_minus.value) != 1:
            raise ValueError("a_plus and a_minus must be coprime")
        if self.a_star.value != self.a_plus.value * self.a_minus.value:
            raise ValueError("a_star must equal a_plus * a_minus")


def defect(a, N) -> DefectDecomposition:
    """Defect decomposition of a relative to N; requires v_p(a/N) in
    {-1, 0, 1} at every prime (DefectError otherwise)."""
    a, N = as_factored(a), as_factored(N)
    plus, minus = [], []
    for p, v in rational_valuations(a, N).entries:
        if v == 1:
            plus.append(p)
        elif v == -1:
            minus.append(p)
        else:
            raise DefectError(f"v_{p}({a}/{N}) = {v} outside {{-1, 0, 1}}")
    a_plus = _squarefree_product(plus)
    a_minus = _squarefree_product(minus)
    a_star = _squarefree_product(sorted(plus + minus))
    if Fraction(a_plus.value, a_minus.value) != Fraction(a.value, N.value):
        raise InternalConsistencyError(
            f"ratio identity failed: {a_plus}/{a_minus} != {a}/{N}"
        )
    return DefectDecomposition(a_plus, a_minus, a_star)


def _squarefree_product(primes) -> FactoredNat:
    value = 1
    for p in primes:
        value *= p
    return FactoredNat(value, tuple((p, 1) for p in primes))


@dataclass(frozen=True)
class PrimeWitness:
    """One row of the per-prime defect-identity table."""

    p: int
    v_a_star: int
    v_b_star: int
    v_a_over_n: int
    v_b_over_n: int

    @property
    def ok(self) -> bool:
        return self.v_a_star + self.v_b_star == abs(self.v_a_over_n - self.v_b_over_n)


def quad_identity_witnesses(a, b, N) -> tuple[PrimeWitness, ...]:
    """Per-prime table certifying v_p(a*) + v_p(b*) = |v_p(a/N) - v_p(b/N)|.

    Requires (a, b) pivotal for N."""
    a, b, N = as_factored(a), as_factored(b), as_factored(N)
    if not check_pivotal(a, b, N):
        raise ValueError(f"pair ({a}, {b}) is not pivotal for N = {N}")
    da, db = defect(a, N), defect(b, N)
    va = rational_valuations(a, N).as_dict()
    vb = rational_valuations(b, N).as_dict()
    pool = sorted(set(va) | set(vb) | set(da.a_star.primes()) | set(db.a_star.primes()))
    return tuple(
        PrimeWitness(
            p,
            da.a_star.valuation(p),
            db.a_star.valuation(p),
            va.get(p, 0),
            vb.get(p, 0),
        )
        for p in pool
    )


def quad_identity_check(a, b, N) -> bool:
    """Whether a_star * b_star = ab / gcd(a,b)^2 exactly (always true when
    the pivotal precondition holds; kept as a tested invariant)."""
    a, b, N = as_factored(a), as_factored(b), as_factored(N)
    if not check_pivotal(a, b, N):
        raise ValueError(f"pair ({a}, {b}) is not pivotal for N = {N}")
    da, db = defect(a, N), defect(b, N)
    g = math.gcd(a.value, b.value)
    return da.a_star.value * db.a_star.value * g * g == a.value * b.value


# ---------------------------------------------------------------------------
# Defect census and witness extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    value: int
    a_plus: int
    a_minus: int
    a_star: int
    counted: bool  # a_star <= T
    plus_ok: bool  # a_plus <= sqrt(2XT/N), checked for counted rows
    minus_ok: bool  # a_minus <= sqrt(NT/X), checked for counted rows


@dataclass(frozen=True)
class DefectCensus:
    count: int
    bound: Fraction  # 2T
    holds: bool
    a_plus_cap_sq: Fraction  # 2XT/N
    a_minus_cap_sq: Fraction  # NT/X
    range_ok: bool
    rows: tuple[CensusRow, ...]


def defect_census(S, N, X, T) -> DefectCensus:
    """Count elements of S within [X, 2X] whose defect a_star is <= T; the
    count can never exceed 2T, and every counted element obeys the range
    caps a_plus^2 <= 2XT/N and a_minus^2 <= NT/X (verified exactly)."""
    N = as_factored(N)
    X, T = fraction_of(X), fraction_of(T)
    elems = sorted({as_factored(x) for x in S})
    for el in elems:
        if not X <= el.value <= 2 * X:
            raise ValueError(f"element {el.value} outside [{X}, {2 * X}]")
    plus_cap_sq = 2 * X * T / N.value
    minus_cap_sq = Fraction(N.value) * T / X
    rows = []
    count = 0
    range_ok = True
    for el in elems:
        d = defect(el, N)
        counted = d.a_star.value <= T
        plus_ok = minus_ok = True
        if counted:
            count += 1
            plus_ok = Fraction(d.a_plus.value**2) <= plus_cap_sq
            minus_ok = Fraction(d.a_minus.value**2) <= minus_cap_sq
            range_ok = range_ok and plus_ok and minus_ok
        rows.append(
            CensusRow(
                el.value, d.a_plus.value, d.a_minus.value, d.a_star.value,
                counted, plus_ok, minus_ok,
            )
        )
    return DefectCensus(
        count, 2 * T, count <= 2 * T, plus_cap_sq, minus_cap_sq, range_ok, tuple(rows)
    )


@dataclass(frozen=True)
class WitnessReport:
    """Witness pair (a, b) with large defects, plus the verified chain that
    forces |A||B| <= 1000 * delta'^-2 * XY/D^2 for the filtered density
    delta' = |Omega'| / (|A||B|)."""

    a: int
    b: int
    a_star: int
    b_star: int
    delta_prime: Fraction
    delta_omega: Fraction
    tilde_a_size: int
    tilde_a_lower: Fraction  # delta' |A| / 4
    deg_a: int
    deg_lower: Fraction  # delta' |B| / 4
    a_star_lower: Fraction  # delta' |A| / 8
    b_star_lower: Fraction  # delta' |B| / 8
    quad_product: int  # a_star * b_star
    quad_cap: Fraction  # 4XY/D^2
    size_product: int
    prop_bound: Fraction  # 1000 delta'^-2 XY/D^2
    holds: bool
    chain_ok: bool


def extract_witnesses(si: StructuredInstance) -> WitnessReport:
    """Run the finishing argument on a structured instance.

    Averaging gives a set of high-degree left elements of size at least
    delta'|A|/4; the defect census then forces one of them to have
    a_star >= delta'|A|/8, and symmetrically on the right within the
    neighborhood of the chosen a.  The resulting pair certifies
    |A||B| <= 1000 delta'^-2 XY/D^2.
    """
    if not si.omega_prime.edges:
        raise ValueError("omega_prime is empty: no witnesses exist")
    inst = si.base
    nA, nB = len(inst.A), len(inst.B)
    dprime = si.omega_prime.delta
    deg = si.omega_prime.degrees_left()
    deg_lower = dprime * nB / 4
    tilde_a = sorted(a for a, d in deg.items() if d >= deg_lower)
    tilde_a_lower = dprime * nA / 4
    if len(tilde_a) < tilde_a_lower:
        raise InternalConsistencyError(
            f"averaging failed: |tilde A| = {len(tilde_a)} < {tilde_a_lower}"
        )
    a_star_lower = dprime * nA / 8
    best_a = None
    best_a_star = None
    for a in tilde_a:
        d = defect(a, si.n)
        if d.a_star.value >= a_star_lower and (
            best_a_star is None or d.a_star.value > best_a_star
        ):
            best_a, best_a_star = a, d.a_star.value
    if best_a is None:
        raise InternalConsistencyError(
            f"no a in tilde A has a_star >= {a_star_lower}; "
            "the defect-count bound should make this impossible"
        )
    tilde_b = sorted(b for a, b in si.omega_prime.edges if a == best_a)
    b_star_lower = dprime * nB / 8
    best_b = None
    best_b_star = None
    for b in tilde_b:
        d = defect(b, si.n)
        if d.a_star.value >= b_star_lower and (
            best_b_star is None or d.a_star.value > best_b_star
        ):
            best_b, best_b_star = b, d.a_star.value
    if best_b is None:
        raise InternalConsistencyError(
            f"no b adjacent to {best_a} has b_star >= {b_star_lower}"
        )
    quad_cap = 4 * inst.X * inst.Y / (inst.D * inst.D)
    quad_product = best_a_star * best_b_star
    prop_bound = 1000 * inst.X * inst.Y / (dprime * dprime * inst.D * inst.D)
    chain_ok = (
        len(tilde_a) >= tilde_a_lower
        and deg[best_a] >= deg_lower
        and (best_a, best_b) in set(si.omega_prime.edges)
        and Fraction(quad_product) <= quad_cap
    )
    if not chain_ok:
        raise InternalConsistencyError("witness chain failed to verify")
    holds = Fraction(nA * nB) <= prop_bound
    return WitnessReport(
        a=best_a.value,
        b=best_b.value,
        a_star=best_a_star,
        b_star=best_b_star,
        delta_prime=dprime,
        delta_omega=si.omega.delta,
        tilde_a_size=len(tilde_a),
        tilde_a_lower=tilde_a_lower,
        deg_a=deg[best_a],
        deg_lower=deg_lower,
        a_star_lower=a_star_lower,
        b_star_lower=b_star_lower,
        quad_product=quad_product,
        quad_cap=quad_cap,
        size_product=nA * nB,
        prop_bound=prop_bound,
        holds=holds,
        chain_ok=chain_ok,
    )
