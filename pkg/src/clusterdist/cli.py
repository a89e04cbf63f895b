"""Command-line entry point: ``clusterdist {sweep,verify-marginals,conjecture,partitions}``.

Exit codes: 0 success, 1 configuration error (bad graph, error string, metric,
missing file, size limit), 2 computation failure or failed verification.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import experiments
from .catalog import CATALOG, verify_marginals
from .exceptions import ClusterDistError, ErrorSpecError, GraphError, LimitError, MetricError
from .graphs import cluster_state
from .noise import apply
from .pauli import DENSE_LIMIT
from .weighted import TIE_TOL, Metric, block_distance_table

log = logging.getLogger("clusterdist")

EXIT_CONFIG = 1
EXIT_COMPUTE = 2
THREADS_ENV = "CLUSTERDIST_MAX_THREADS"


class ConfigError(Exception):
    pass


def _metrics(value: str) -> list[Metric]:
    if value.lower() == "both":
        return [Metric.BURES, Metric.HILBERT_SCHMIDT]
    return [Metric.parse(v) for v in value.split(",")]


def _jobs(requested: int) -> int:
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            return max(1, min(requested, int(cap)))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, requested)


def _emit(text: str, output: str | None):
    """Write to stdout, or atomically to ``output`` (temp file + rename)."""
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _graph_list(values: list[str] | None, default: list[str]) -> list[str]:
    out = []
    for v in values or default:
        out.extend(x for x in v.split(",") if x)
    return out


def cmd_sweep(args) -> int:
    cfg = experiments.ExperimentConfig(
        graphs=_graph_list(args.graph, ["line3"]),
        errors=args.errors,
        metrics=_metrics(args.metric),
        output=args.format,
        dense_limit=args.dense_limit,
        tolerance=args.tolerance,
        self_test=args.self_test,
        seed=args.seed,
        jobs=_jobs(args.jobs),
    )
    # resolve everything up front so configuration problems exit with code 1
    for spec in cfg.graphs:
        g = experiments.resolve_graph(spec)
        experiments.resolve_errors(cfg.errors, g.n, cfg.seed)
        if g.n > min(cfg.dense_limit, 12):
            raise LimitError(f"graph {spec!r} has {g.n} qubits, above the limit")
    try:
        sweeps = experiments.run_sweep(cfg)
    except ClusterDistError as exc:
        raise ComputeError(str(exc)) from exc
    text = experiments.to_json(sweeps) if cfg.output == "json" else experiments.to_markdown(sweeps)
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    names = _graph_list(args.graph, list(CATALOG))
    for name in names:
        if name.lower() not in CATALOG:
            raise ConfigError(f"no marginal catalog for {name!r}; choose from {sorted(CATALOG)}")
    reports = [verify_marginals(name) for name in names]
    text = "\n".join(r.format() for r in reports) + "\n"
    _emit(text, args.output)
    return 0 if all(r.ok for r in reports) else EXIT_COMPUTE


def cmd_conjecture(args) -> int:
    metric = Metric.parse(args.metric)
    if not 3 <= args.n_min <= args.n_max <= experiments.CONJECTURE_MAX:
        raise LimitError(f"need 3 <= n_min <= n_max <= {experiments.CONJECTURE_MAX}")
    try:
        rows = experiments.run_conjecture_sweep(args.n_max, metric, n_min=args.n_min)
    except ClusterDistError as exc:
        raise ComputeError(str(exc)) from exc
    if args.format == "json":
        text = json.dumps(experiments.conjecture_to_dicts(rows, metric), indent=2) + "\n"
    else:
        text = experiments.conjecture_to_markdown(rows, metric)
    _emit(text, args.output)
    return 0


def cmd_partitions(args) -> int:
    graphs = _graph_list(args.graph, ["line3"])
    if len(graphs) != 1:
        raise ConfigError("partitions takes exactly one graph")
    g = experiments.resolve_graph(graphs[0])
    errors = experiments.resolve_errors(args.errors, g.n, args.seed)
    if len(errors) != 1:
        raise ConfigError("partitions takes exactly one error, e.g. --errors Z1")
    metric = Metric.parse(args.metric)
    rho = cluster_state(g)
    sigma = rho if args.self_test else apply(rho, errors[0])
    try:
        table = block_distance_table(rho, sigma, metric, dense_limit=args.dense_limit)
    except ClusterDistError as exc:
        raise ComputeError(str(exc)) from exc
    if args.format == "json":
        doc = {"graph": g.name or graphs[0], "error": errors[0].label, "metric": metric.value,
               "blocks": [{"qubits": list(k), "distance": experiments.round_sig(v),
                           "exact": experiments.exact_form(v)} for k, v in table.items()]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"### Block distances: {g.name or graphs[0]}, {errors[0].label}, {metric.value}",
                 "", "| block | distance | weighted term |", "|---|---|---|"]
        for k, v in table.items():
            lines.append(f"| {{{','.join(map(str, k))}}} | {experiments._display(v)} "
                         f"| {experiments._display(v / len(k))} |")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0


class ComputeError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterdist",
        description="Weighted Bures / Hilbert-Schmidt distances between cluster states "
                    "and their images under single-qubit errors.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, metric_default="bures"):
        p.add_argument("--graph", action="append",
                       help="preset (line3, line4, ring4, line5, lineN, ringN, gridRxC) "
                            "or edge-list file; repeat or comma-separate for several")
        p.add_argument("--metric", default=metric_default,
                       help="bures, hilbert_schmidt (hs), or both")
        p.add_argument("--format", choices=("json", "markdown"), default="json")
        p.add_argument("--output", help="write here instead of stdout (atomic)")

    p = sub.add_parser("sweep", help="weighted distance for each error on each graph")
    common(p)
    p.add_argument("--errors", default="all", help="'all' or a list such as X1,Z2; R<q> = random channel")
    p.add_argument("--seed", type=int, default=None, help="seed for R<q> random channels")
    p.add_argument("--self-test", action="store_true", help="compare each state with itself")
    p.add_argument("--dense-limit", type=int, default=DENSE_LIMIT)
    p.add_argument("--tolerance", type=float, default=TIE_TOL, help="value grouping tolerance")
    p.add_argument("--jobs", type=int, default=1, help=f"worker threads (capped by ${THREADS_ENV})")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-marginals", help="check the catalogued reference marginals")
    p.add_argument("--graph", action="append", help="line3, line4, ring4, line5 (default: all)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("conjecture", help="Z-error position profile on chains")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--metric", default="bures")
    p.add_argument("--format", choices=("json", "markdown"), default="markdown")
    p.add_argument("--output")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("partitions", help="dump the per-block distance table")
    common(p)
    p.add_argument("--errors", default="Z1")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--self-test", action="store_true")
    p.add_argument("--dense-limit", type=int, default=DENSE_LIMIT)
    p.set_defaults(func=cmd_partitions)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ComputeError as exc:
        _fail(f"computation failed: {exc}")
        return EXIT_COMPUTE
    except (ConfigError, GraphError, ErrorSpecError, MetricError, LimitError,
            FileNotFoundError, ValueError, KeyError) as exc:
        _fail(f"configuration error: {exc}")
        return EXIT_CONFIG


def _fail(message: str):
    log.debug("%s", message, exc_info=True)
    print(f"clusterdist: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
