"""Command-line front end. JSON reports go to stdout, logs to stderr.

Exit codes: 0 success, 2 validation or parse error, 3 instance too large.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import generators
from .bs_statistics import NeighborhoodDistribution, mtp_check, psi, sample_psi, tv_distance
from .graph import Graph, InstanceTooLarge, format_edge_list, parse_edge_list
from .local_transfer import apply_transfer, selection_table, train_transfer
from .partitioners import (
    brute_force_optimal_cut,
    format_cut,
    grid_block_cut,
    greedy_ball_partition,
    random_shifted_partition,
    verify_partition,
)
from .rooted_graphs import rooted_distance


EXIT_OK, EXIT_INVALID, EXIT_TOO_LARGE = 0, 2, 3


def _frac(x) -> str | float | None:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _read_graph(path: str | None) -> Graph:
    if path is None:
        raise ValueError("--input is required")
    return parse_edge_list(Path(path).read_text())


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def cmd_gen(args) -> dict:
    fam = args.family
    if fam == "path":
        g = generators.path(args.n)
    elif fam == "cycle":
        g = generators.cycle(args.n)
    elif fam == "torus":
        g = generators.torus(args.n)
    elif fam == "binary-tree":
        g = generators.binary_tree(args.depth)
    elif fam == "random-regular":
        g = generators.random_regular(args.d, args.n, args.seed)
    else:
        raise ValueError(f"unknown family {fam!r}")
    text = format_edge_list(g)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return {"n": g.n, "m": g.num_edges, "M": g.M}


def _distribution(g: Graph, args) -> NeighborhoodDistribution:
    if args.samples:
        return sample_psi(g, args.r, args.samples, args.seed, jobs=args.jobs)
    return psi(g, args.r, jobs=args.jobs)


def cmd_stats(args) -> dict:
    d = _distribution(_read_graph(args.input), args)
    _write(args.output, d.dumps())
    return d.to_json()


def cmd_distance(args) -> dict:
    ga, gb = _read_graph(args.input), _read_graph(args.other)
    out: dict = {}
    if args.root_a is not None or args.root_b is not None:
        rho = rooted_distance((ga, args.root_a or 0), (gb, args.root_b or 0), args.r_max)
        out["rho"] = None if math.isinf(rho.value) else rho.value
        out["rho_infinite"] = math.isinf(rho.value)
        out["rho_resolved"] = rho.resolved
        out["agree_radius"] = rho.agree_radius
    tv = tv_distance(_distribution(ga, args), _distribution(gb, args))
    out["tv"] = _frac(tv)
    out["tv_float"] = float(tv)
    return out


def cmd_mtp(args) -> dict:
    res = mtp_check(_read_graph(args.input), args.f, exact=args.exact)
    return {
        "f": args.f,
        "exact": res.exact,
        "lhs": _frac(res.lhs),
        "rhs": _frac(res.rhs),
        "discrepancy": _frac(res.discrepancy),
    }


def _cut_result(g: Graph, cut, k: int, args) -> dict:
    q = verify_partition(g, cut, k)
    _write(args.output, format_cut(g, cut))
    return {"quality": q.to_json(), "cut_fraction_exact": _frac(q.cut_fraction), "cut": [list(e) for e in sorted(cut)]}


def _torus_side(g: Graph) -> int:
    side = math.isqrt(g.n)
    if side * side != g.n or side < 3 or g != generators.torus(side):
        raise ValueError("grid-block partition needs a torus produced by `gen torus`")
    return side


def cmd_partition(args) -> dict:
    g = _read_graph(args.input)
    k = args.k
    if args.method == "greedy":
        cut = greedy_ball_partition(g, k)
    elif args.method == "random":
        cut = random_shifted_partition(g, k, args.seed)
    elif args.method == "grid-block":
        block = math.isqrt(k)
        if block * block != k:
            raise ValueError("grid-block needs k to be a perfect square")
        cut = grid_block_cut(_torus_side(g), block)
    elif args.method == "oracle":
        cut = brute_force_optimal_cut(g, k)
    else:
        raise ValueError(f"unknown method {args.method!r}")
    return _cut_result(g, cut, k, args)


def cmd_oracle(args) -> dict:
    g = _read_graph(args.input)
    return _cut_result(g, brute_force_optimal_cut(g, args.k), args.k, args)


def cmd_transfer(args) -> dict:
    source = _read_graph(args.input)
    target = _read_graph(args.target) if args.target else source
    model = train_transfer(source, args.k, args.samples or 10, args.R_max, args.roots, args.seed)
    if args.stats_output and model.stats is not None:
        _write(args.stats_output, model.stats.dumps())
    table = selection_table(target, model.stats, model.eps0) if model.stats is not None else None
    runs = []
    for i in range(args.runs):
        report = apply_transfer(model, target, args.seed + i, table=table)
        runs.append(report.to_json())
    return {
        "radius_discrepancies": {str(r): d for r, d in (model.radius.discrepancies.items() if model.radius else [])},
        "runs": runs,
        "mean_cut_fraction": sum(r["quality"]["cut_fraction"] for r in runs) / len(runs),
        "mean_uncovered_fraction": sum(r["uncovered_fraction"] for r in runs) / len(runs),
    }


def cmd_report(args) -> dict:
    """Re-run the configuration embedded in a report and compare results."""
    if args.input is None:
        raise ValueError("--input is required")
    saved = json.loads(Path(args.input).read_text())
    config = dict(saved["config"])
    command = config.pop("command")
    if command == "report":
        raise ValueError("a report of a report cannot be replayed")
    # replay computes only; artifacts written by the original run are left alone
    for key in ("output", "stats_output"):
        if key in config:
            config[key] = None
    config.setdefault("jobs", 1)
    if command == "gen":
        config["output"] = "/dev/null"
    fresh = json.loads(json.dumps(COMMANDS[command](argparse.Namespace(**config, command=command))))
    return {"command": command, "reproduced": fresh == saved["result"]}


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "distance": cmd_distance,
    "mtp": cmd_mtp,
    "partition": cmd_partition,
    "oracle": cmd_oracle,
    "transfer": cmd_transfer,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input")
    common.add_argument("--output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hyperfinite", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="emit a graph family as an edge list")
    p.add_argument("family", choices=["path", "cycle", "torus", "binary-tree", "random-regular"])
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--depth", type=int, default=3)

    for name, text in (("stats", "neighbourhood distribution"), ("distance", "distance between two graphs")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--r", type=int, default=1)
        p.add_argument("--samples", type=int, default=None, help="Monte-Carlo roots instead of every vertex")
    p.add_argument("--other", required=True)
    p.add_argument("--root-a", type=int, default=None)
    p.add_argument("--root-b", type=int, default=None)
    p.add_argument("--r-max", type=int, default=10)

    p = sub.add_parser("mtp", parents=[common], help="mass transport identity check")
    p.add_argument("--f", default="deg_edge")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None)
    mode.add_argument("--float", dest="exact", action="store_false")

    p = sub.add_parser("partition", parents=[common], help="bounded-component cut")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["greedy", "random", "grid-block", "oracle"], default="greedy")

    p = sub.add_parser("oracle", parents=[common], help="exact minimum cut (small instances)")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("transfer", parents=[common], help="learn pattern statistics and cut a target")
    p.add_argument("--target")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--R-max", dest="R_max", type=int, default=None)
    p.add_argument("--roots", type=int, default=None)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--stats-output")

    sub.add_parser("report", parents=[common], help="replay the configuration embedded in a report")
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("verbose", "jobs")}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "transfer" and args.R_max is None:
        args.R_max = args.k + 2
    try:
        result = COMMANDS[args.command](args)
    except InstanceTooLarge as exc:
        print(f"hyperfinite: instance too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (ValueError, OSError, KeyError) as exc:
        print(f"hyperfinite: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = {"config": {"command": args.command, **_config(args)}, "result": result}
    if args.command == "gen" and not args.output:
        return EXIT_OK
    json.dump(report, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
