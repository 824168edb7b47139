"""``orientdiam`` command line.

Exit codes: 0 success, 1 proven negative, 2 inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from orientdiam import __version__
from orientdiam._parallel import default_workers
from orientdiam.exact import DEFAULT_EDGE_BUDGET, exists_diam2_orientation
from orientdiam.extremal import (
    DEFAULT_MAX_K,
    InstanceTooLarge,
    asymptotics_csv,
    asymptotics_table,
    build_gk,
    verify_witnesses,
)
from orientdiam.graph import (
    GeneratorExhausted,
    GraphFormatError,
    min_degree,
    parse_graph,
    random_graph_with_min_degree,
    serialize_graph,
    underlying_diameter,
)
from orientdiam.orientation import (
    diameter,
    format_distance,
    is_strong,
    parse_orientation,
    serialize_orientation,
    violation_report,
)
from orientdiam.random_orient import (
    DEFAULT_MAX_ATTEMPTS,
    expected_violations,
    las_vegas_orient,
    orientation_report,
    sufficient_threshold,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text_lines: Optional[list[str]] = None) -> None:
    payload = {"tool": "orientdiam", "version": __version__, "command": args.command, **payload}
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines if text_lines is not None else [f"{k}: {v}" for k, v in payload.items()]:
            print(line)


def _read_graph(path: str):
    try:
        return parse_graph(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (GraphFormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from exc


def cmd_gen(args) -> int:
    if args.family == "gk":
        try:
            g, desc = build_gk(args.k, max_k=args.max_k)
        except (ValueError, InstanceTooLarge) as exc:
            raise UsageError(str(exc)) from exc
        text = serialize_graph(g, desc.header())
        extra = {"gk": desc.to_dict()}
    else:
        try:
            g = random_graph_with_min_degree(args.n, args.p, args.min_degree, args.seed, args.max_tries)
        except GeneratorExhausted as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        text = serialize_graph(g, [f"G(n={args.n}, p={args.p}) min degree >= {args.min_degree} seed={args.seed}"])
        extra = {"seed": args.seed}
    _write(args.output, text)
    summary = {"n": g.n, "m": g.m, "min_degree": min_degree(g), **extra}
    if args.output in (None, "-"):
        # graph went to stdout
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    else:
        _emit(args, summary, [f"n={g.n} m={g.m} min_degree={summary['min_degree']}"])
    return EXIT_OK


def cmd_stats(args) -> int:
    g = _read_graph(args.graph)
    th = sufficient_threshold(g.n, g)
    payload = {
        "n": g.n,
        "m": g.m,
        "min_degree": min_degree(g),
        "underlying_diameter": format_distance(underlying_diameter(g)),
        "mu": expected_violations(g),
        "threshold": th.sufficient_threshold,
        "f_n": th.f_n,
        "mu_bound": th.mu_bound,
        "hypothesis_met": th.hypothesis_met,
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_orient(args) -> int:
    g = _read_graph(args.graph)
    if args.method == "las-vegas":
        outcome = las_vegas_orient(g, args.max_attempts, args.seed, args.workers)
        payload = {**orientation_report(g, outcome), "method": "las-vegas"}
        d = outcome.orientation
        code = {"found": EXIT_OK, "impossible": EXIT_NEGATIVE, "exhausted": EXIT_INCONCLUSIVE}[outcome.status]
    else:
        res = exists_diam2_orientation(g, args.edge_budget, args.workers)
        payload = {"n": g.n, "m": g.m, "method": "exact", **res.to_dict()}
        payload.pop("orientation", None)
        d = res.orientation
        code = {"found": EXIT_OK, "none_exists": EXIT_NEGATIVE, "limit_reached": EXIT_INCONCLUSIVE}[res.status]
    if d is not None:
        text = serialize_orientation(d)
        if args.output:
            _write(args.output, text)
        else:
            payload["orientation"] = text
    _emit(args, payload)
    return code


def cmd_check(args) -> int:
    g = _read_graph(args.graph)
    try:
        d = parse_orientation(Path(args.orientation).read_text(), g)
    except OSError as exc:
        raise UsageError(f"cannot read {args.orientation}: {exc}") from exc
    except (GraphFormatError, ValueError) as exc:
        raise UsageError(f"{args.orientation}: {exc}") from exc
    diam = diameter(d)
    report = violation_report(d, limit=args.pair_limit)
    payload = {
        "n": g.n,
        "m": g.m,
        "diameter": format_distance(diam),
        "X": report.x_count,
        "far_count": report.far_count,
        "strong": is_strong(d),
        "violations": report.to_dict(),
    }
    _emit(args, payload, [
        f"diameter: {payload['diameter']}",
        f"X: {report.x_count}",
        f"far pairs: {report.far_count}",
        f"strong: {payload['strong']}",
    ])
    return EXIT_OK if diam <= 2 else EXIT_NEGATIVE


def cmd_verify_gk(args) -> int:
    try:
        g, desc = build_gk(args.k, max_k=args.max_k)
    except (ValueError, InstanceTooLarge) as exc:
        raise UsageError(str(exc)) from exc
    if args.mode == "brute":
        if g.m > args.edge_budget:
            raise UsageError(f"G_{args.k} has {g.m} edges, over the edge budget {args.edge_budget}")
        res = exists_diam2_orientation(g, args.edge_budget, args.workers)
        payload = {"k": args.k, "mode": "brute", "gk": desc.to_dict(), **res.to_dict()}
        _emit(args, payload)
        return {"none_exists": EXIT_OK, "found": EXIT_NEGATIVE}.get(res.status, EXIT_INCONCLUSIVE)
    summary = verify_witnesses(args.k, args.trials, args.seed, args.workers)
    payload = {"mode": "witness", "gk": desc.to_dict(), **summary.to_dict()}
    _emit(args, payload, [
        f"k={args.k} witnesses verified: {summary.verified}/{summary.trials}",
        f"forward={summary.forward} backward={summary.backward} min distance={payload['min_distance']}",
    ])
    return EXIT_OK if summary.all_verified else EXIT_NEGATIVE


def cmd_asymptotics(args) -> int:
    try:
        rows = asymptotics_table(args.k_min, args.k_max, args.stride)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.output, asymptotics_csv(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: $ORIENTDIAM_WORKERS or CPU count)")

    parser = _Parser(prog="orientdiam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"orientdiam {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a graph file")
    fam = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    gk = fam.add_parser("gk", parents=[common], help="extremal graph G_k")
    gk.add_argument("--k", type=int, required=True)
    gk.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    gk.add_argument("-o", "--output")
    rnd = fam.add_parser("random", parents=[common], help="G(n,p) conditioned on minimum degree")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--p", type=float, required=True)
    rnd.add_argument("--min-degree", type=int, default=0)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--max-tries", type=int, default=1000)
    rnd.add_argument("-o", "--output")

    st = sub.add_parser("stats", parents=[common], help="degree, diameter and expectation summary")
    st.add_argument("graph")

    orient = sub.add_parser("orient", parents=[common], help="find a diameter-two orientation")
    orient.add_argument("graph")
    orient.add_argument("--method", choices=["las-vegas", "exact"], default="las-vegas")
    orient.add_argument("--seed", type=int, default=0)
    orient.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)
    orient.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    orient.add_argument("-o", "--output")

    chk = sub.add_parser("check", parents=[common], help="diameter and violations of an orientation")
    chk.add_argument("graph")
    chk.add_argument("orientation")
    chk.add_argument("--pair-limit", type=int, default=1000)

    ver = sub.add_parser("verify-gk", parents=[common], help="refute diameter two on G_k")
    ver.add_argument("--k", type=int, required=True)
    ver.add_argument("--mode", choices=["brute", "witness"], default="witness")
    ver.add_argument("--trials", type=int, default=1000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--edge-budget", type=int, default=DEFAULT_EDGE_BUDGET)
    ver.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)

    asy = sub.add_parser("asymptotics", parents=[common], help="CSV of the size estimates per k")
    asy.add_argument("--k-min", type=int, default=1)
    asy.add_argument("--k-max", type=int, default=100)
    asy.add_argument("--stride", type=int, default=1)
    asy.add_argument("-o", "--output")
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "orient": cmd_orient,
    "check": cmd_check,
    "verify-gk": cmd_verify_gk,
    "asymptotics": cmd_asymptotics,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.workers is None:
        args.workers = default_workers()
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
