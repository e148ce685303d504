"""Command-line front end.

Machine-first output: every command prints JSON (or JSON-lines for
``ball``) on stdout; ``--pretty`` only reformats it.  Exit codes:
0 success, 1 verification failure, 2 usage error.  Identical
invocations produce byte-identical payloads.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys

from .tree import AddressError, SpecError, TreeSpec
from .rays import UndecidableFamilyError
from .product import HeightMismatch, HoroProduct, product_dist
from .boundary import evaluate, parse_point, require_valid_point
from .limits import (
    NOT_DECIDED,
    classify,
    empirical_pointwise_check,
    family_from_json,
    stabilization_bound,
)
from .walk import WalkConfig, drift_report, simulate, write_trace_csv
from . import verify


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_specs(path: str) -> list[tuple[str, TreeSpec]]:
    data = _load_json(path)
    if "family" in data:
        return [("tree", TreeSpec.from_json(data))]
    if "tree1" in data and "tree2" in data:
        return [("tree1", TreeSpec.from_json(data["tree1"])),
                ("tree2", TreeSpec.from_json(data["tree2"]))]
    raise UsageError(f"{path} holds neither a tree nor a product description")


def _load_product(path: str) -> HoroProduct:
    data = _load_json(path)
    if "spec" in data:
        data = data["spec"]
    if "tree1" not in data or "tree2" not in data:
        raise UsageError(f"{path} does not describe a product of two trees")
    return HoroProduct(TreeSpec.from_json(data["tree1"]),
                       TreeSpec.from_json(data["tree2"]))


def _emit(payload, pretty: bool) -> None:
    print(json.dumps(payload, indent=2 if pretty else None, sort_keys=True))


def cmd_validate(args) -> int:
    results = {}
    failed = False
    for label, spec in _load_specs(args.spec):
        violation = spec.validate()
        if violation is None:
            results[label] = {"ok": True}
        else:
            failed = True
            results[label] = {"ok": False, **violation.payload()}
    _emit(results, args.pretty)
    return 1 if failed else 0


def cmd_ball(args) -> int:
    product = _load_product(args.spec)
    for v in product.ball(args.radius):
        print(json.dumps(str(v)))
    return 0


def cmd_dist(args) -> int:
    product = _load_product(args.spec)
    v = product.parse_vertex(args.v)
    w = product.parse_vertex(args.w)
    formula = product_dist(v, w)
    payload = {"v": str(v), "w": str(w), "dist": formula}
    code = 0
    if args.oracle:
        cap = args.radius if args.radius is not None else formula + 2
        bfs = product.dist_bfs(v, w, cap)
        payload["bfs"] = bfs if bfs is not None else "out_of_range"
        payload["oracle_agrees"] = bfs == formula
        if bfs != formula:
            code = 1
    _emit(payload, args.pretty)
    return code


def cmd_busemann(args) -> int:
    product = _load_product(args.spec)
    if ":" in args.function:  # vertex forms never contain a colon
        anchor = parse_point(args.function)
        require_valid_point(product, anchor)
    else:
        anchor = product.parse_vertex(args.function)
    at = product.parse_vertex(args.at)
    _emit({"function": str(anchor), "at": str(at),
           "value": evaluate(anchor, at)}, args.pretty)
    return 0


def cmd_classify(args) -> int:
    data = _load_json(args.family)
    if "spec" not in data or "family" not in data:
        raise UsageError("family file needs 'spec' and 'family' entries")
    try:
        product = HoroProduct(TreeSpec.from_json(data["spec"]["tree1"]),
                              TreeSpec.from_json(data["spec"]["tree2"]))
        family = family_from_json(data["family"])
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad family file: {exc}") from exc
    report = classify(product, family)
    payload = {"symbolic": report.payload()}
    code = 0
    if report.status == NOT_DECIDED:
        payload["agreement"] = None
    else:
        if args.window:
            n0, n1 = args.window
        else:
            n0 = stabilization_bound(product, family, args.radius)
            n1 = n0 + 55
        target = report.busemann
        emp = empirical_pointwise_check(product, family, (n0, n1),
                                        args.radius, target)
        payload["empirical"] = emp.payload()
        if report.status in ("interior", "boundary"):
            agreed = emp.convergent and emp.matched_target is True
        else:
            agreed = not emp.convergent
        payload["agreement"] = agreed
        if not agreed:
            code = 1
    _emit(payload, args.pretty)
    return code


def cmd_verify(args) -> int:
    suite_fn = verify.SUITES.get(args.suite)
    if suite_fn is None:
        raise UsageError(f"unknown suite {args.suite!r}; choose from "
                         + ", ".join(sorted(verify.SUITES)))
    kwargs = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.radius is not None:
        if args.suite == "metric-oracle":
            kwargs["radius33"] = args.radius
            kwargs["radius34"] = max(args.radius - 1, 1)
        elif args.suite == "fset":
            kwargs["max_radius"] = args.radius
        else:
            kwargs["radius"] = args.radius
    if args.steps is not None:
        kwargs["steps"] = args.steps
    if args.trajectories is not None:
        kwargs["trajectories"] = args.trajectories
    accepted = inspect.signature(suite_fn).parameters
    kwargs = {k: v for k, v in kwargs.items() if k in accepted}
    result = suite_fn(**kwargs)
    print(f"{'PASS' if result.ok else 'FAIL'} {result.name} "
          f"({result.seconds:.1f}s)", file=sys.stderr)
    _emit(result.payload(), args.pretty)
    return 0 if result.ok else 1


def cmd_walk(args) -> int:
    data = _load_json(args.config)
    try:
        config = WalkConfig.from_json(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad walk config: {exc}") from exc
    if args.max_total_steps is not None:
        config = WalkConfig(config.product, config.p_up, config.steps,
                            config.seed, config.trajectories, config.probes,
                            config.record_stride, args.max_total_steps)
    result = simulate(config)
    if args.csv:
        if config.record_stride == 0:
            raise UsageError("config has record_stride 0, nothing to trace")
        for stats in result.trajectories:
            path = (args.csv if config.trajectories == 1
                    else f"{args.csv}.{stats.index}")
            write_trace_csv(path, stats, len(config.probes))
    report = drift_report(result)
    _emit(report, args.pretty)
    return 1 if result.partial else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horoprod",
        description="Exact geometry of horospheric products of pointed trees")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true",
                       help="JSON output (the default; accepted for scripts)")
        p.add_argument("--pretty", action="store_true",
                       help="indent the JSON output")
        return p

    p = add("validate", cmd_validate, "check degree rules of a tree or product")
    p.add_argument("--spec", required=True, help="tree or product JSON file")

    p = add("ball", cmd_ball, "stream a product ball as JSON-lines")
    p.add_argument("--spec", required=True)
    p.add_argument("--radius", type=int, required=True)

    p = add("dist", cmd_dist, "closed-form distance, optionally BFS-checked")
    p.add_argument("--spec", required=True)
    p.add_argument("v", help="product vertex, e.g. '0;0|1;'")
    p.add_argument("w")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--radius", type=int, help="breadth-first search cap")

    p = add("busemann", cmd_busemann, "evaluate a boundary or vertex function")
    p.add_argument("--spec", required=True)
    p.add_argument("function",
                   help="'C1:<ray>', 'C2:<ray>', 'T1:<vertex>', 'T2:<vertex>',"
                        " 'Z:<k>', or a product vertex for interior anchors")
    p.add_argument("at", help="product vertex to evaluate at")

    p = add("classify", cmd_classify, "limit classification of a family file")
    p.add_argument("--family", required=True, help="JSON with spec and family")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--window", type=_parse_window,
                   help="explicit empirical window 'n0:n1'")

    p = add("verify", cmd_verify, "run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--radius", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--trajectories", type=int)

    p = add("walk", cmd_walk, "simulate biased walks from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--csv", help="trace output path (suffixed per trajectory)")
    p.add_argument("--max-total-steps", type=int,
                   help="resource cap; exceeding it flags a partial result")
    return parser


def _parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window must look like 'n0:n1'") from exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AddressError, SpecError, HeightMismatch, UndecidableFamilyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
