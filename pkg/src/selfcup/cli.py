"""Command line: ``selfcup verify-core | theta-check | frobenius-scan``.

Exit codes: 0 all checks pass, 1 a check failed (first witness printed),
2 bad input or an undetermined Galois group.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .cohomology import DEFAULT_H2_CAP, DEFAULT_SEED
from .galois_frobenius import CERTIFIED_FULL, DEFAULT_PRIME_BOUND, PolyError, degree, frobenius_scan, parse_poly
from .gmodule import ModuleError, make_module
from .grid import (
    bockstein_suite,
    commutator_suite,
    corollary_suite,
    cyclic_rank_suite,
    duality_suite,
    grid_groups,
    selfcup_suite,
    threads,
)
from .perm_group import GroupSizeError, PermError, PermGroup, parse_generators, symmetric_group
from .theta_model import build_theta, jacobian_identity_check, local_report, theta_class
from .u_construction import selfcup_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _seed(text: str) -> int:
    return int(text, 0)


def _positive(text: str) -> int:
    v = int(text, 0)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="selfcup", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
        p.add_argument("--h2-cap", type=_positive, default=DEFAULT_H2_CAP)
        p.add_argument("--json", action="store_true", help="machine-readable output")

    v = sub.add_parser("verify-core", help="run the cohomology verification grid")
    common(v)
    v.add_argument("--grid", help="comma-separated group names, e.g. Z2,V4")
    v.add_argument("--module", help="JSON file describing one extra (G, M) cell")
    v.add_argument("--corrupt-cup", action="store_true", help="negative control: drop the g-action in the cup")

    t = sub.add_parser("theta-check", help="theta torsor report for a genus-g curve")
    common(t)
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="ascending integer coefficients, e.g. 6,1,0,0,0,0,1")
    src.add_argument("--generators", help='1-based cycles, e.g. "(1 2)(5 6), (3 4)(5 6)"')
    t.add_argument("--genus", type=_positive)
    t.add_argument("--prime-bound", type=_positive, default=DEFAULT_PRIME_BOUND)

    f = sub.add_parser("frobenius-scan", help="Frobenius cycle types of f mod p")
    f.add_argument("--poly", required=True)
    f.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    f.add_argument("--json", action="store_true")
    return ap


# -- verify-core -------------------------------------------------------------------


def load_module(path: str):
    """``{"n": 3, "generators": "(1 2 3)", "m": 2, "matrices": [[[...]]]}``."""
    with open(path) as fh:
        cell = json.load(fh)
    G = PermGroup(int(cell["n"]), parse_generators(cell.get("generators", ""), int(cell["n"])))
    return make_module(G, int(cell["m"]), cell["matrices"], name=cell.get("name", path))


def _first_failure(report: dict):
    for suite, rows in report["suites"].items():
        for row in rows:
            if not row["passed"]:
                return suite, row
    return None


def run_verify_core(args) -> tuple[int, dict]:
    names = None
    if args.grid:
        names = [s.strip() for s in args.grid.split(",") if s.strip()]
        unknown = sorted(set(names) - set(grid_groups()))
        if unknown:
            raise ModuleError(f"unknown grid groups {unknown}; choose from {sorted(grid_groups())}")
    suites = {
        "selfcup": selfcup_suite(names, seed=args.seed, corrupt=args.corrupt_cup, h2_cap=args.h2_cap),
        "bockstein": bockstein_suite(names, seed=args.seed),
        "commutator": commutator_suite(names, seed=args.seed),
        "duality": duality_suite(names, with_theta=names is None),
        "corollary": corollary_suite(names, seed=args.seed),
    }
    if names is None:
        suites["cyclic_rank"] = cyclic_rank_suite(seed=args.seed)
    if args.module:
        M = load_module(args.module)
        row = selfcup_check(M, seed=args.seed, h2_cap=args.h2_cap).as_dict()
        row["group"] = "file"
        suites["selfcup"].append(row)
    report = {
        "command": "verify-core",
        "seed": args.seed,
        "threads": threads(),
        "corrupt_cup": args.corrupt_cup,
        "cochain_order": "classes are coordinate vectors over non-identity group elements in lexicographic order",
        "suites": suites,
        "summary": {k: {"cells": len(v), "passed": sum(r["passed"] for r in v)} for k, v in suites.items()},
    }
    fail = _first_failure(report)
    report["passed"] = fail is None
    if fail:
        report["first_failure"] = {"suite": fail[0], **fail[1]}
    return (EXIT_OK if fail is None else EXIT_FAIL), report


def render_verify(report: dict) -> str:
    lines = [f"verify-core  seed={report['seed']:#x}  corrupt_cup={report['corrupt_cup']}"]
    for suite, rows in report["suites"].items():
        s = report["summary"][suite]
        lines.append(f"  {suite:12s} {s['passed']}/{s['cells']} cells pass")
    for row in report["suites"]["selfcup"]:
        lines.append(
            f"    {row['group']:4s} {row['module']:16s} |H1|={row['order_H1']:<4d} "
            f"classes={row['classes_checked']:<3d} {'ok' if row['passed'] else 'FAIL'}"
        )
    if not report["passed"]:
        lines.append("FIRST FAILURE: " + json.dumps(report["first_failure"]))
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


# -- theta-check -------------------------------------------------------------------


def run_theta_check(args) -> tuple[int, dict]:
    report: dict = {"command": "theta-check"}
    if args.poly:
        f = parse_poly(args.poly)
        n = degree(f)
        if n < 4 or n % 2:
            raise PolyError("theta-check needs an even degree 2g+2 >= 4")
        genus = (n - 2) // 2
        if args.genus and args.genus != genus:
            raise PolyError(f"degree {n} means genus {genus}, not {args.genus}")
        scan = frobenius_scan(f, args.prime_bound, threads=threads())
        report["discriminant"] = scan["discriminant"]
        report["certification"] = scan["verdict"]
        report["observed_cycle_types"] = scan["observed"]
        if scan["verdict"] != CERTIFIED_FULL:
            report["error"] = "group undetermined"
            return EXIT_INPUT, report
        G = symmetric_group(n)
    else:
        genus = args.genus or 2
        n = 2 * genus + 2
        G = PermGroup(n, parse_generators(args.generators, n))
    data = build_theta(genus, G)
    tc = theta_class(data)
    report.update(local_report(data, tc))
    jac = jacobian_identity_check(data, tc, h2_cap=args.h2_cap, seed=args.seed)
    report["identity_checked"] = jac["identity_checked"]
    report["jacobian"] = jac
    ok = jac["obstruction_matches"] and jac.get("identity_holds", True)
    return (EXIT_OK if ok else EXIT_FAIL), report


def render_theta(report: dict) -> str:
    if "error" in report:
        return f"certification {report['certification']}: {report['error']}"
    lines = []
    if "discriminant" in report:
        lines.append(f"discriminant {report['discriminant']}  certification {report['certification']}")
    lines.append(f"genus {report['genus']}  |G| = {report['group_order']}")
    lines.append(f"c_T {'trivial' if report['c_T_trivial'] else 'NONTRIVIAL'}  fixed points {report['fixed_points']}")
    for row in report["cyclic_table"]:
        lines.append(f"  <{row['generator_cycles']}>  order {row['order']}  {'trivial' if row['trivial'] else 'nontrivial'}")
    lines.append(f"locally trivial at cyclic subgroups: {report['locally_trivial']}  sha_style: {report['sha_style']}")
    jac = report["jacobian"]
    lines.append(f"obstruction = lambda(c_T): {jac['obstruction_matches']}")
    if jac["identity_checked"]:
        lines.append(f"x u x ~ x u c_T on {jac['classes_checked']} classes: {jac['identity_holds']}")
    else:
        lines.append(f"cup identity skipped ({jac['reason']})")
    lines.append(f"note: {report['note']}")
    return "\n".join(lines)


# -- frobenius-scan ---------------------------------------------------------------------


def run_frobenius(args) -> tuple[int, dict]:
    f = parse_poly(args.poly)
    if degree(f) < 1:
        raise PolyError("need a nonconstant polynomial")
    return EXIT_OK, frobenius_scan(f, args.prime_bound, threads=threads())


def render_frobenius(report: dict) -> str:
    lines = [
        f"f = {report['polynomial']}",
        f"discriminant {report['discriminant']}",
        f"ramified primes <= {report['prime_bound']}: {report['ramified']}",
    ]
    for row in report["table"]:
        lines.append(f"  p={row['p']:<6d} {row['cycle_type']}")
    lines.append(f"verdict {report['verdict']}")
    return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serialisable: {type(obj)}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    runners = {
        "verify-core": (run_verify_core, render_verify),
        "theta-check": (run_theta_check, render_theta),
        "frobenius-scan": (run_frobenius, render_frobenius),
    }
    run, render = runners[args.command]
    try:
        code, report = run(args)
    except (PermError, ModuleError, PolyError, GroupSizeError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, default=_jsonable))
    else:
        print(render(report))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
