"""GCD-instance data model: sets in dyadic ranges, the pair set with its
exact density, prime sets, pair censuses (naive double loop as the oracle,
divisor recursion as the fast path), and the bound evaluators.

Densities are exact rationals throughout.  Bound comparisons at the
irrational exponent -2-epsilon happen in log space with a one-sided guard
band, so a reported violation is never a rounding artifact.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .arith import FactoredNat, _divisors_int, as_factored, fraction_of, is_squarefree

__all__ = [
    "GcdInstance",
    "InstanceError",
    "PairSet",
    "build_omega_gcd",
    "build_omega_ratio",
    "chase_diagonal_bound",
    "count_pairs_geq_fast",
    "count_pairs_geq_naive",
    "gcd_census",
    "instance_from_json",
    "instance_to_json",
    "prime_sets",
    "read_instance",
    "theorem1_bound",
    "theorem1_holds",
    "theorem1_log10_bound",
    "theorem51_bound",
    "write_instance",
]

# One-sided relative guard in log space: a bound violation is declared only
# if it survives rounding the bound down by this much.
LOG_GUARD = 1e-9


class InstanceError(ValueError):
    """Invalid instance data, with a field-level diagnostic message."""


def _coerce_elements(S, name: str) -> tuple[FactoredNat, ...]:
    try:
        elems = sorted({as_factored(x) for x in S})
    except ValueError as exc:
        raise InstanceError(f"field {name}: {exc}") from None
    if not elems:
        raise InstanceError(f"field {name}: set must be nonempty")
    return tuple(elems)


@dataclass(frozen=True)
class GcdInstance:
    """The tuple (A, B, X, Y, D, epsilon, p0) with A in [X,2X], B in [Y,2Y]."""

    A: tuple[FactoredNat, ...]
    B: tuple[FactoredNat, ...]
    X: Fraction
    Y: Fraction
    D: Fraction
    epsilon: float = 0.5
    p0: int = 100

    @classmethod
    def build(
        cls,
        A,
        B,
        D,
        X=None,
        Y=None,
        *,
        epsilon: float = 0.5,
        p0: int = 100,
        check_ranges: bool = True,
    ) -> "GcdInstance":
        """Validated constructor.  X (resp. Y) omitted means X = min(A),
        which errors if max(A) > 2*min(A); passing check_ranges=False skips
        the dyadic-range and D <= min(X,Y) checks (test harness use)."""
        A = _coerce_elements(A, "A")
        B = _coerce_elements(B, "B")
        if X is None:
            X = _infer_range(A, "A")
        if Y is None:
            Y = _infer_range(B, "B")
        if not 0 < epsilon < 1:
            raise InstanceError(f"field epsilon: {epsilon} not strictly inside (0, 1)")
        if p0 < 0:
            raise InstanceError(f"field p0: {p0} must be a natural number")
        inst = cls(A, B, fraction_of(X), fraction_of(Y), fraction_of(D), float(epsilon), int(p0))
        if check_ranges:
            inst.validate_ranges()
        return inst

    def validate_ranges(self) -> None:
        for name, S, R in (("A", self.A, self.X), ("B", self.B, self.Y)):
            if R <= 0:
                raise InstanceError(f"field {'X' if name == 'A' else 'Y'}: {R} must be positive")
            for i, el in enumerate(S):
                if not R <= el.value <= 2 * R:
                    raise InstanceError(
                        f"field {name}[{i}]: {el.value} outside [{R}, {2 * R}]"
                    )
        if self.D < 1:
            raise InstanceError(f"field D: {self.D} must be >= 1")
        if self.D > min(self.X, self.Y):
            raise InstanceError(
                f"field D: {self.D} exceeds min(X, Y) = {min(self.X, self.Y)}"
            )

    @property
    def q(self) -> float:
        return 2.0 + self.epsilon

    @property
    def q_prime(self) -> float:
        return (2.0 + self.epsilon) / (1.0 + self.epsilon)

    def size_product(self) -> int:
        return len(self.A) * len(self.B)


def _infer_range(S: tuple[FactoredNat, ...], name: str) -> Fraction:
    lo, hi = S[0].value, S[-1].value
    if hi > 2 * lo:
        raise InstanceError(
            f"field {name}: cannot infer a dyadic range, max {hi} > 2*min {2 * lo}"
        )
    return Fraction(lo)


@dataclass(frozen=True)
class PairSet:
    """A set of ordered pairs (a, b) in A x B with its exact density.

    kind records the predicate the edges were built from: "gcd_geq"
    (gcd(a,b) >= threshold) or "ratio_leq" (ab/gcd^2 <= threshold).
    """

    edges: tuple[tuple[FactoredNat, FactoredNat], ...]
    n_left: int
    n_right: int
    kind: str = "gcd_geq"
    threshold: Fraction = Fraction(1)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def delta(self) -> Fraction:
        return Fraction(len(self.edges), self.n_left * self.n_right)

    def degrees_left(self) -> dict[FactoredNat, int]:
        deg: dict[FactoredNat, int] = defaultdict(int)
        for a, _ in self.edges:
            deg[a] += 1
        return dict(deg)

    def degrees_right(self) -> dict[FactoredNat, int]:
        deg: dict[FactoredNat, int] = defaultdict(int)
        for _, b in self.edges:
            deg[b] += 1
        return dict(deg)

    def restricted_to(self, keep) -> "PairSet":
        return replace(self, edges=tuple(e for e in self.edges if keep(e)))

    def verify_predicate(self) -> bool:
        if self.kind == "gcd_geq":
            t = _gcd_threshold(self.threshold)
            return all(math.gcd(a.value, b.value) >= t for a, b in self.edges)
        if self.kind == "ratio_leq":
            return all(
                Fraction(a.value * b.value, math.gcd(a.value, b.value) ** 2)
                <= self.threshold
                for a, b in self.edges
            )
        raise ValueError(f"unknown pair-set kind {self.kind!r}")


def _gcd_threshold(D) -> int:
    # gcds are integers, so gcd >= D is the same test as gcd >= ceil(D)
    return max(1, math.ceil(fraction_of(D)))


def build_omega_gcd(inst: GcdInstance) -> PairSet:
    """All pairs (a, b) in A x B with gcd(a, b) >= D, density exact."""
    t = _gcd_threshold(inst.D)
    edges = tuple(
        (a, b) for a in inst.A for b in inst.B if math.gcd(a.value, b.value) >= t
    )
    return PairSet(edges, len(inst.A), len(inst.B), "gcd_geq", fraction_of(inst.D))


def build_omega_ratio(A, B, Q) -> PairSet:
    """All pairs with ab/gcd(a,b)^2 <= Q (the squarefree-theorem predicate)."""
    A = _coerce_elements(A, "A")
    B = _coerce_elements(B, "B")
    Q = fraction_of(Q)
    edges = tuple(
        (a, b)
        for a in A
        for b in B
        if Fraction(a.value * b.value, math.gcd(a.value, b.value) ** 2) <= Q
    )
    return PairSet(edges, len(A), len(B), "ratio_leq", Q)


def _values(S) -> tuple[int, ...]:
    return tuple(sorted(int(x) for x in S))


def count_pairs_geq_naive(A, B, D) -> int:
    """Oracle census: plain double loop over A x B."""
    t = _gcd_threshold(D)
    av, bv = _values(A), _values(B)
    gcd = math.gcd
    return sum(1 for a in av for b in bv if gcd(a, b) >= t)


@lru_cache(maxsize=64)
def _exact_gcd_distribution(
    avals: tuple[int, ...], bvals: tuple[int, ...]
) -> tuple[tuple[int, int], ...]:
    """(d, #pairs with gcd exactly d) for every d with a nonzero count.

    c(d) = (#multiples of d in A) * (#multiples of d in B) counts pairs with
    d | gcd; descending over the common divisors, e(d) = c(d) - sum of e(d')
    over proper multiples d' of d isolates the exact-gcd counts.
    """
    da: Counter[int] = Counter()
    for a in avals:
        for d in _divisors_int(a):
            da[d] += 1
    db: Counter[int] = Counter()
    for b in bvals:
        for d in _divisors_int(b):
            db[d] += 1
    common = sorted(set(da) & set(db))
    cset = set(common)
    pending: dict[int, int] = defaultdict(int)
    exact: dict[int, int] = {}
    for d in reversed(common):
        e = da[d] * db[d] - pending[d]
        if e:
            exact[d] = e
            for d2 in _divisors_int(d):
                if d2 != d and d2 in cset:
                    pending[d2] += e
    return tuple(sorted(exact.items()))


def gcd_census(A, B) -> tuple[tuple[int, int], ...]:
    """Exact distribution of gcd(a, b) over A x B as (value, count) pairs."""
    return _exact_gcd_distribution(_values(A), _values(B))


def count_pairs_geq_fast(A, B, D) -> int:
    """Census by divisor grouping; exactly equals the naive double loop."""
    t = _gcd_threshold(D)
    dist = _exact_gcd_distribution(_values(A), _values(B))
    return sum(e for d, e in dist if d >= t)


def prime_sets(S, p0: int) -> tuple[frozenset[int], frozenset[int]]:
    """(P(S), P_sml(S)): primes dividing some element, and those <= p0."""
    ps = frozenset(p for el in S for p in as_factored(el).primes())
    return ps, frozenset(p for p in ps if p <= p0)


def _log_fraction(q: Fraction) -> float:
    q = fraction_of(q)
    return math.log(q.numerator) - math.log(q.denominator)


def _theorem1_log_bound(inst: GcdInstance, delta: Fraction) -> float:
    delta = fraction_of(delta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    n_small = len(prime_sets(inst.A + inst.B, inst.p0)[1])
    return (
        (1 + n_small) * math.log(1000.0)
        - (2.0 + inst.epsilon) * _log_fraction(delta)
        + _log_fraction(inst.X * inst.Y / (inst.D * inst.D))
    )


def theorem1_bound(inst: GcdInstance, delta) -> float:
    """1000^(1+#P_sml(A u B)) * delta^(-2-epsilon) * XY/D^2 (may be inf)."""
    try:
        return math.exp(_theorem1_log_bound(inst, delta))
    except OverflowError:
        return math.inf


def theorem1_log10_bound(inst: GcdInstance, delta) -> float:
    return _theorem1_log_bound(inst, delta) / math.log(10.0)


def theorem1_holds(inst: GcdInstance, delta) -> bool:
    """Whether |A||B| <= the main bound; the bound is rounded down before a
    violation is declared, so False is never float noise."""
    lhs = math.log(inst.size_product())
    return lhs <= _theorem1_log_bound(inst, delta) + LOG_GUARD


def chase_diagonal_bound(A, X, D) -> tuple[bool, int]:
    """The trivial diagonal bound: pairwise gcd >= D forces gaps >= D, so a
    set in [X, 2X] has at most floor(X/D) + 1 elements.

    Raises ValueError if some pair has gcd < D (caller precondition).
    Returns (holds, max_allowed).
    """
    vals = _values(A)
    X = fraction_of(X)
    D = fraction_of(D)
    t = _gcd_threshold(D)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            g = math.gcd(vals[i], vals[j])
            if g < t:
                raise ValueError(
                    f"precondition violated: gcd({vals[i]}, {vals[j]}) = {g} < {D}"
                )
    for u, v in zip(vals, vals[1:]):
        if v - u < D:
            raise RuntimeError(f"gap {v - u} below {D} despite pairwise gcd >= {D}")
    max_allowed = int(X / D) + 1
    return len(vals) <= max_allowed, max_allowed


def theorem51_bound(A, B, Q, epsilon: float = 0.5, p0: int = 100):
    """Squarefree-set analogue: density of pairs with ab/gcd^2 <= Q, the
    bound 1000^(1+#P_sml) * delta^(-2-eps) * Q/4, and whether it holds.

    Returns (delta, bound, holds); all elements must be squarefree.
    """
    A = _coerce_elements(A, "A")
    B = _coerce_elements(B, "B")
    for name, S in (("A", A), ("B", B)):
        for el in S:
            if not is_squarefree(el):
                raise ValueError(f"element {el.value} of {name} is not squarefree")
    Q = fraction_of(Q)
    omega = build_omega_ratio(A, B, Q)
    delta = omega.delta
    if delta == 0:
        return delta, math.inf, True
    n_small = len(prime_sets(A + B, p0)[1])
    log_bound = (
        (1 + n_small) * math.log(1000.0)
        - (2.0 + epsilon) * _log_fraction(delta)
        + _log_fraction(Q / 4)
    )
    try:
        bound = math.exp(log_bound)
    except OverflowError:
        bound = math.inf
    holds = math.log(len(A) * len(B)) <= log_bound + LOG_GUARD
    return delta, bound, holds


# ---------------------------------------------------------------------------
# Instance file format: JSON with decimal-string integers (primorials exceed
# 64 bits), canonical key order, bit-exact round trip.
# ---------------------------------------------------------------------------


def instance_to_json(inst: GcdInstance) -> str:
    doc = {
        "A": [str(a.value) for a in inst.A],
        "B": [str(b.value) for b in inst.B],
        "D": str(inst.D),
        "X": str(inst.X),
        "Y": str(inst.Y),
        "epsilon": inst.epsilon,
        "p0": inst.p0,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _parse_int_list(doc, name: str) -> list[int]:
    raw = doc.get(name)
    if not isinstance(raw, list) or not raw:
        raise InstanceError(f"field {name}: expected a nonempty array of decimal strings")
    out = []
    for i, s in enumerate(raw):
        try:
            v = int(s)
        except (TypeError, ValueError):
            raise InstanceError(f"field {name}[{i}]: {s!r} is not a decimal integer") from None
        if v < 1:
            raise InstanceError(f"field {name}[{i}]: {v} must be >= 1")
        out.append(v)
    return out


def _parse_fraction(doc, name: str, required: bool):
    raw = doc.get(name)
    if raw is None:
        if required:
            raise InstanceError(f"field {name}: missing")
        return None
    try:
        return Fraction(raw) if isinstance(raw, str) else fraction_of(raw)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InstanceError(f"field {name}: {raw!r} is not a number") from None


def instance_from_json(text: str) -> GcdInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    A = _parse_int_list(doc, "A")
    B = _parse_int_list(doc, "B")
    D = _parse_fraction(doc, "D", required=True)
    X = _parse_fraction(doc, "X", required=False)
    Y = _parse_fraction(doc, "Y", required=False)
    epsilon = doc.get("epsilon", 0.5)
    if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool):
        raise InstanceError(f"field epsilon: {epsilon!r} is not a number")
    p0 = doc.get("p0", 100)
    if not isinstance(p0, int) or isinstance(p0, bool) or p0 < 0:
        raise InstanceError(f"field p0: {p0!r} is not a natural number")
    return GcdInstance.build(A, B, D, X, Y, epsilon=float(epsilon), p0=p0)


def write_instance(inst: GcdInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))


def read_instance(path) -> GcdInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(fh.read())
