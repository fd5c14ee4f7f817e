"""Command-line front end.

Subcommands: stats, structure, defect, measure, family {remark2, remark3,
sec5, squarefree}, search {exhaustive, hunt}, verify all.  Every run emits
one structured report document (JSON, or CSV with one row per record) on
standard output.  Exit codes: 0 success, 1 a violation or internal
inconsistency was found, 2 invalid input.

The same seed and configuration always produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arith import as_factored, fraction_of, rational_valuations
from .instance import (
    GcdInstance,
    InstanceError,
    build_omega_gcd,
    instance_to_json,
    prime_sets,
    read_instance,
    theorem1_bound,
    theorem1_holds,
    theorem1_log10_bound,
)
from .families import remark2_family, remark3_family, sec5_family, squarefree_instance
from .measure import (
    Measure2D,
    WeightPair,
    concentration_report,
    from_valuation_measure,
    min_admissible_c,
    random_admissible_config,
)
from .reports import make_report, render
from .search import SearchSpace, exhaustive_max, hunt_violations
from .structure import (
    DefectError,
    InternalConsistencyError,
    defect,
    check_pivotal,
    extract_witnesses,
    find_modulus,
    quad_identity_check,
    quad_identity_witnesses,
    structure_instance,
    valuation_measure,
)
from .verify import run_all

__all__ = ["main", "RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 0.5
    p0: int = 100
    seed: int = 0
    format: str = "json"
    exhaustive_limit: int = 20

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "p0": self.p0,
            "seed": self.seed,
            "format": self.format,
            "exhaustive_limit": self.exhaustive_limit,
        }


def _config(args) -> RunConfig:
    if not 0 < args.epsilon < 1:
        raise InstanceError(f"field epsilon: {args.epsilon} not strictly inside (0, 1)")
    return RunConfig(args.epsilon, args.p0, args.seed, args.format, args.exhaustive_limit)


def _load(path: str, cfg: RunConfig) -> GcdInstance:
    inst = read_instance(path)
    # command-line epsilon/p0 are defaults; the file's values win
    return inst


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (document, exit_code)
# ---------------------------------------------------------------------------


def cmd_stats(args) -> tuple[dict, int]:
    cfg = _config(args)
    inst = _load(args.instance, cfg)
    omega = build_omega_gcd(inst)
    pset, psml = prime_sets(inst.A + inst.B, inst.p0)
    summary = {
        "n_a": len(inst.A),
        "n_b": len(inst.B),
        "size_product": inst.size_product(),
        "X": inst.X,
        "Y": inst.Y,
        "D": inst.D,
        "epsilon": inst.epsilon,
        "p0": inst.p0,
        "delta": omega.delta,
        "omega_size": len(omega),
        "primes": sorted(pset),
        "primes_small": sorted(psml),
    }
    if omega.delta == 0:
        summary["notice"] = "empty pair set; bound check skipped"
        summary["bound"] = None
        summary["bound_log10"] = None
        summary["holds"] = None
    else:
        bound = theorem1_bound(inst, omega.delta)
        summary["bound"] = bound if math.isfinite(bound) else None
        summary["bound_log10"] = theorem1_log10_bound(inst, omega.delta)
        summary["holds"] = theorem1_holds(inst, omega.delta)
    return make_report("stats", cfg.as_dict(), summary), 0


def cmd_structure(args) -> tuple[dict, int]:
    cfg = _config(args)
    inst = _load(args.instance, cfg)
    omega = build_omega_gcd(inst)
    if not omega.edges:
        raise InstanceError("pair set is empty; nothing to structure")
    si, ms = structure_instance(inst)
    records = []
    for side, elems in (("A", inst.A), ("B", inst.B)):
        deg = si.omega_prime.degrees_left() if side == "A" else si.omega_prime.degrees_right()
        for el in elems:
            if deg.get(el, 0) > 0:
                d = defect(el, si.n)
                records.append(
                    {
                        "side": side,
                        "value": str(el.value),
                        "a_plus": str(d.a_plus.value),
                        "a_minus": str(d.a_minus.value),
                        "a_star": str(d.a_star.value),
                        "degree": deg[el],
                    }
                )
    witness = extract_witnesses(si)
    summary = {
        "N": str(ms.n.value),
        "N_factors": [[p, e] for p, e in ms.n.factors],
        "strategy": ms.strategy,
        "omega_size": len(omega),
        "omega_prime_size": len(si.omega_prime),
        "fraction": ms.fraction,
        "delta": omega.delta,
        "delta_prime": si.delta_prime,
        "witness": witness,
        "holds": witness.holds,
    }
    if ms.fraction < Fraction(1, 2):
        summary["warning"] = "pivotal fraction below 1/2 (possible for non-minimal instances)"
    return make_report("structure", cfg.as_dict(), summary, records), 0


def cmd_defect(args) -> tuple[dict, int]:
    cfg = _config(args)
    try:
        d = defect(args.a, args.n)
    except DefectError as exc:
        raise InstanceError(str(exc)) from None
    summary = {
        "a": str(args.a),
        "N": str(args.n),
        "a_plus": str(d.a_plus.value),
        "a_minus": str(d.a_minus.value),
        "a_star": str(d.a_star.value),
    }
    records = []
    if args.b is not None:
        pivotal = check_pivotal(args.a, args.b, args.n)
        summary["b"] = str(args.b)
        summary["pivotal"] = pivotal
        if pivotal:
            summary["quad_identity"] = quad_identity_check(args.a, args.b, args.n)
            for row in quad_identity_witnesses(args.a, args.b, args.n):
                records.append(
                    {
                        "p": row.p,
                        "v_a_star": row.v_a_star,
                        "v_b_star": row.v_b_star,
                        "v_a_over_n": row.v_a_over_n,
                        "v_b_over_n": row.v_b_over_n,
                        "ok": row.ok,
                    }
                )
        else:
            summary["quad_identity"] = None
            va = rational_valuations(args.a, args.n).as_dict()
            vb = rational_valuations(args.b, args.n).as_dict()
            for p in sorted(va.keys() | vb.keys()):
                records.append(
                    {
                        "p": p,
                        "v_a_over_n": va.get(p, 0),
                        "v_b_over_n": vb.get(p, 0),
                        "sum_abs": abs(va.get(p, 0)) + abs(vb.get(p, 0)),
                    }
                )
    return make_report("defect", cfg.as_dict(), summary, records), 0


def _measure_summary(rep) -> dict:
    return {
        "c_min": rep.c_min,
        "c_interval": list(rep.c_interval) if rep.c_interval else None,
        "c_lower_ok": rep.c_lower_ok,
        "k": rep.k,
        "tail": rep.tail,
        "ratio": rep.ratio,
        "lambda": rep.lam,
        "q": rep.q,
        "epsilon": rep.epsilon,
        "gamma": rep.gamma,
        "sigma": [float(s) for s in rep.sigma.sigma],
    }


def cmd_measure(args) -> tuple[dict, int]:
    cfg = _config(args)
    records = []
    if args.point_mass is not None:
        i, j = args.point_mass
        if args.lam is None:
            raise InstanceError("--lambda is required with --point-mass")
        mu = Measure2D.point_mass(i, j)
        qp = (2 + cfg.epsilon) / (1 + cfg.epsilon)
        w = WeightPair.from_weights({i: 1.0}, {j: 1.0}, qp)
        rep = concentration_report(mu, w, args.lam, epsilon=cfg.epsilon)
        summary = _measure_summary(rep)
        summary["source"] = f"point-mass ({i}, {j})"
    elif args.instance is not None:
        if args.prime is None:
            raise InstanceError("--prime is required with --instance")
        inst = _load(args.instance, cfg)
        omega = build_omega_gcd(inst)
        if not omega.edges:
            raise InstanceError("pair set is empty; the edge measure is undefined")
        vm = valuation_measure(inst, omega, args.prime)
        mu, w, lam = from_valuation_measure(vm, epsilon=cfg.epsilon)
        rep = concentration_report(mu, w, lam, epsilon=cfg.epsilon, p=args.prime)
        summary = _measure_summary(rep)
        summary["source"] = f"valuation measure at p = {args.prime}"
        records = [
            {"i": i, "j": j, "weight": w_} for (i, j), w_ in vm.mu.items()
        ]
    elif args.random:
        import random as _random

        rng = _random.Random(cfg.seed)
        worst_c = math.inf
        worst_ratio = 0.0
        all_ok = True
        for _ in range(args.random):
            mu, w, lam = random_admissible_config(rng, epsilon=cfg.epsilon)
            rep = concentration_report(mu, w, lam, epsilon=cfg.epsilon)
            worst_c = min(worst_c, rep.c_min)
            worst_ratio = max(worst_ratio, rep.ratio)
            all_ok = all_ok and rep.c_lower_ok
        summary = {
            "source": f"random sweep ({args.random} configs)",
            "min_c_seen": worst_c,
            "max_ratio_seen": worst_ratio,
            "all_c_lower_ok": all_ok,
        }
    else:
        raise InstanceError("give one of --point-mass, --instance, or --random")
    return make_report("measure", cfg.as_dict(), summary, records), 0


def _family_doc(report, A, B, cfg: RunConfig):
    summary = {
        "family": report.family,
        "parameters": report.parameters,
        "n_a": report.set_sizes[0],
        "n_b": report.set_sizes[1],
        "measured_delta": report.measured_delta,
        "extremal_ratio": report.extremal_ratio,
        "checks_passed": list(report.checks_passed),
        "details": report.details,
    }
    records = []
    if len(A) <= 64 and (B is None or len(B) <= 64):
        records.append({"set": "A", "elements": [str(v) for v in A]})
        if B is not None:
            records.append({"set": "B", "elements": [str(v) for v in B]})
    return make_report("family", cfg.as_dict(), summary, records)


def _emit_set(path: str, A, B, D, cfg: RunConfig) -> None:
    try:
        inst = GcdInstance.build(A, B, D, epsilon=cfg.epsilon, p0=cfg.p0)
    except InstanceError:
        # not a dyadic instance; write the sets without X, Y so readers see
        # the range diagnostics on load
        inst = GcdInstance.build(
            A, B, D, min(A), min(B), epsilon=cfg.epsilon, p0=cfg.p0, check_ranges=False
        )
        text = instance_to_json(inst)
        import json as _json

        doc = _json.loads(text)
        del doc["X"]
        del doc["Y"]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))


def cmd_family(args) -> tuple[dict, int]:
    cfg = _config(args)
    if args.family == "remark2":
        A, B, report = remark2_family(args.X, args.Y if args.Y else args.X, args.D)
        D = args.D
    elif args.family == "remark3":
        A, B, report = remark3_family(args.X, args.D, Fraction(args.delta))
        D = args.D
    elif args.family == "sec5":
        A, report = sec5_family(args.X)
        B = None
        D = 1
    else:
        A, B, report = squarefree_instance(args.n, fraction_of(args.Q))
        D = 1
    if args.emit_set:
        _emit_set(args.emit_set, A, B if B is not None else A, D, cfg)
    return _family_doc(report, A, B, cfg), 0


def cmd_search(args) -> tuple[dict, int]:
    cfg = _config(args)
    if args.action == "exhaustive":
        space = SearchSpace(
            X=args.X,
            Y=args.Y if args.Y else args.X,
            D=args.D,
            delta_target=Fraction(args.delta_target) if args.delta_target else None,
            mode=args.mode,
            force_equal=args.force_equal,
            exhaustive_limit=cfg.exhaustive_limit,
        )
        try:
            res = exhaustive_max(space, seed=cfg.seed)
        except ValueError as exc:
            raise InstanceError(str(exc)) from None
        summary = {
            "mode": space.mode,
            "X": space.X,
            "Y": space.Y,
            "D": space.D,
            "best_a": [str(v) for v in res.best_a],
            "best_b": [str(v) for v in res.best_b],
            "max_product": res.max_product,
            "optimal": res.optimal,
        }
        if not res.optimal:
            summary["notice"] = "above the exact cap: value is a lower bound, not a maximum"
        return make_report("search", cfg.as_dict(), summary), 0
    violations = hunt_violations(
        args.scale_limit, cfg.seed, n_structured=args.structured
    )
    summary = {
        "scale_limit": args.scale_limit,
        "structured_instances": args.structured,
        "violations_found": len(violations),
    }
    records = [{"kind": v.kind, **v.detail} for v in violations]
    return make_report("hunt", cfg.as_dict(), summary, records), (1 if violations else 0)


def cmd_verify(args) -> tuple[dict, int]:
    cfg = _config(args)
    results = run_all(quick=args.quick)
    records = [
        {"check": r.name, "ok": r.ok, "detail": r.detail} for r in results
    ]
    ok = all(r.ok for r in results)
    summary = {
        "checks": len(results),
        "passed": sum(1 for r in results if r.ok),
        "all_ok": ok,
        "mode": "quick" if args.quick else "full",
    }
    return make_report("verify", cfg.as_dict(), summary, records), (0 if ok else 1)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, default=0.5, help="exponent offset in (0, 1)")
    common.add_argument("--p0", type=int, default=100, help="small-prime threshold")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomized sweeps")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--exhaustive-limit",
        type=int,
        default=20,
        dest="exhaustive_limit",
        help="max integers per side for exact searches",
    )

    parser = argparse.ArgumentParser(
        prog="gcdlab",
        description="Exact census, structure, and search laboratory for GCD-pair statistics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="pair census and bound check")
    p.add_argument("instance", help="instance file (JSON)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("structure", parents=[common], help="modulus search, defects, witnesses")
    p.add_argument("instance")
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("defect", parents=[common], help="defect decomposition of a relative to N")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", "--N", type=int, required=True, dest="n")
    p.add_argument("--b", type=int, default=None, help="optional partner for the pair identity")
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("measure", parents=[common], help="concentration numerics")
    p.add_argument("--point-mass", nargs=2, type=int, metavar=("I", "J"), default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--instance", default=None, help="derive the edge measure from an instance")
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--random", type=int, default=0, help="seeded random sweep of n configs")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("family", parents=[common], help="construct and verify an example family")
    fam = p.add_subparsers(dest="family", required=True)
    f2 = fam.add_parser("remark2", parents=[common])
    f2.add_argument("--X", type=int, required=True)
    f2.add_argument("--Y", type=int, default=None)
    f2.add_argument("--D", type=int, required=True)
    f2.add_argument("--emit-set", default=None, help="write the sets as an instance file")
    f2.set_defaults(func=cmd_family)
    f3 = fam.add_parser("remark3", parents=[common])
    f3.add_argument("--X", type=int, required=True)
    f3.add_argument("--D", type=int, required=True)
    f3.add_argument("--delta", required=True, help="target density, e.g. 1/3")
    f3.add_argument("--emit-set", default=None)
    f3.set_defaults(func=cmd_family)
    f5 = fam.add_parser("sec5", parents=[common])
    f5.add_argument("--X", type=int, required=True)
    f5.add_argument("--emit-set", default=None)
    f5.set_defaults(func=cmd_family)
    fsq = fam.add_parser("squarefree", parents=[common])
    fsq.add_argument("--n", type=int, required=True)
    fsq.add_argument("--Q", required=True)
    fsq.add_argument("--emit-set", default=None)
    fsq.set_defaults(func=cmd_family)

    p = sub.add_parser("search", parents=[common], help="extremal search and violation hunt")
    act = p.add_subparsers(dest="action", required=True)
    ex = act.add_parser("exhaustive", parents=[common])
    ex.add_argument("--X", type=int, required=True)
    ex.add_argument("--Y", type=int, default=None)
    ex.add_argument("--D", type=int, required=True)
    ex.add_argument("--mode", choices=("exact-delta-1", "threshold-delta"), default="exact-delta-1")
    ex.add_argument("--delta-target", default=None, dest="delta_target")
    ex.add_argument("--force-equal", action="store_true", dest="force_equal")
    ex.set_defaults(func=cmd_search)
    hv = act.add_parser("hunt", parents=[common])
    hv.add_argument("--scale-limit", type=int, default=16, dest="scale_limit")
    hv.add_argument("--structured", type=int, default=1000)
    hv.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", parents=[common], help="run the built-in verification battery")
    p.add_argument("what", choices=("all",))
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.func(args)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DefectError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(render(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
