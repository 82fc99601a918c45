"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage/parse error.  Errors
go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .builder import GenParams, random_network
from .gfp import FieldSpec
from .io import FormatError, dumps_network, load_network, paths_from_result, result_to_dict, to_dot
from .network import NetworkError
from .oracle import DEFAULT_LIMIT, OracleSizeError, brute_force_capacity, li_path_capacity, verify_paths
from .solver import SolverConfig, capacity

BENCH_COLUMNS = (
    "seed", "L", "M", "V_x", "E", "p", "C", "wall_ns",
    "eliminations", "type1_visits", "type2_visits", "backward_rewirings",
)


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = 2, **extra):
        super().__init__(message)
        self.kind, self.code, self.extra = kind, code, extra


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def _load(path):
    try:
        return load_network(path)
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    except NetworkError as exc:
        raise CliError("invalid_network", str(exc), errors=exc.errors) from None
    except FormatError as exc:
        raise CliError("parse", str(exc)) from None


def _load_result(path, net):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return doc, paths_from_result(doc, net)
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    except (json.JSONDecodeError, FormatError) as exc:
        raise CliError("parse", f"result file: {exc}") from None


def cmd_capacity(args) -> int:
    net = _load(args.network)
    cfg = SolverConfig(legacy_backward=args.legacy_backward, legacy_same_layer=args.legacy_same_layer)
    res = capacity(net, cfg)
    _emit(result_to_dict(res.capacity, res.paths if args.paths else None, res.counters if args.counters else None))
    return 0


def cmd_oracle(args) -> int:
    net = _load(args.network)
    try:
        res = brute_force_capacity(net, limit=args.limit)
    except OracleSizeError as exc:
        raise CliError("size_limit", str(exc)) from None
    cut = [n.id for n in net.nodes if n.id in res.argmin_cut.omega]
    counters = {"cuts_examined": res.cuts_examined}
    if args.li_paths:
        try:
            second = li_path_capacity(net)
        except OracleSizeError as exc:
            raise CliError("size_limit", str(exc)) from None
        if second != res.capacity:
            raise CliError("oracle_disagreement", f"cut oracle {res.capacity} vs path search {second}", code=1)
        counters["li_path_capacity"] = second
    _emit(result_to_dict(res.capacity, None, counters, cut))
    return 0


def cmd_verify(args) -> int:
    net = _load(args.network)
    doc, paths = _load_result(args.result, net)
    problems = verify_paths(net, paths)
    if not problems and doc["capacity"] != len(paths):
        problems = [f"claimed capacity {doc['capacity']} but {len(paths)} paths given"]
    _emit({"ok": not problems, "violations": problems})
    if problems:
        raise CliError("verification_failed", problems[0], code=1)
    return 0


def _gen_params(args) -> GenParams:
    gp = GenParams(
        layers=args.layers,
        max_nodes_per_layer=args.max_nodes,
        max_levels_per_node=args.max_levels,
        edge_density=args.density,
        p=args.field,
        seed=args.seed,
        min_nodes_per_layer=args.min_nodes,
        min_levels_per_node=args.min_levels,
    )
    try:
        gp.check()
        FieldSpec(gp.p)
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None
    return gp


def cmd_gen(args) -> int:
    text = dumps_network(random_network(_gen_params(args)))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def bench_rows(sizes, trials, seed, nodes=3, levels=3, density=0.5, p=2):
    """One dict per (size, trial); seeds are ``seed + running index``."""
    n = 0
    for L in sizes:
        for _ in range(trials):
            s = seed + n
            n += 1
            net = random_network(GenParams(L, nodes, levels, density, p, s))
            t0 = time.perf_counter_ns()
            res = capacity(net)
            wall = time.perf_counter_ns() - t0
            st = net.stats()
            c = res.counters
            yield {
                "seed": s, "L": st["L"], "M": st["M"], "V_x": st["V_x"], "E": st["E"], "p": p,
                "C": res.capacity, "wall_ns": wall, "eliminations": c["eliminations"],
                "type1_visits": c["type1_visits"], "type2_visits": c["type2_visits"],
                "backward_rewirings": c["backward_rewirings"],
            }


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise CliError("usage", f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    if any(s < 2 for s in sizes) or args.trials < 0:
        raise CliError("usage", "sizes must be >= 2 and trials >= 0")
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for row in bench_rows(sizes, args.trials, args.seed, args.nodes, args.levels, args.density, args.field):
            w.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_export_dot(args) -> int:
    net = _load(args.network)
    paths = _load_result(args.result, net)[1] if args.result else None
    sys.stdout.write(to_dot(net, paths))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adtcap", description="Unicast capacity of layered linear deterministic networks.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("capacity", help="solve for the unicast capacity")
    c.add_argument("network")
    c.add_argument("--paths", action="store_true", help="include the linearly independent path set")
    c.add_argument("--counters", action="store_true", help="include exploration counters")
    c.add_argument("--legacy-backward", action="store_true", help="use the original phi backward rule")
    c.add_argument("--legacy-same-layer", action="store_true", help="allow one same-layer visit per input")
    c.set_defaults(func=cmd_capacity)

    o = sub.add_parser("oracle", help="brute-force minimum cut")
    o.add_argument("network")
    o.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="max intermediate nodes to enumerate")
    o.add_argument("--li-paths", action="store_true", help="also run the exhaustive path search (<= 8 nodes)")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check a result file against a network")
    v.add_argument("network")
    v.add_argument("result")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a seeded random network")
    g.add_argument("--layers", type=int, default=4)
    g.add_argument("--max-nodes", type=int, default=3)
    g.add_argument("--min-nodes", type=int, default=1)
    g.add_argument("--max-levels", type=int, default=3)
    g.add_argument("--min-levels", type=int, default=1)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("--field", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="timed solver runs with counter columns, as CSV")
    b.add_argument("--sizes", default="4,6,8", help="comma-separated layer counts")
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", help="output path (default stdout)")
    b.add_argument("--nodes", type=int, default=3, help="max nodes per layer")
    b.add_argument("--levels", type=int, default=3, help="max levels per node")
    b.add_argument("--density", type=float, default=0.5)
    b.add_argument("--field", type=int, default=2)
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("export-dot", help="render a network (and optional result paths) as DOT")
    d.add_argument("network")
    d.add_argument("result", nargs="?")
    d.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "message": str(exc), **exc.extra}) + "\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
