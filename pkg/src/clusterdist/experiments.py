"""Error sweeps over cluster states, value grouping, and JSON / markdown reports."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exceptions import ErrorSpecError, LimitError
from .graphs import Graph, cluster_state, line, load_edge_list, preset
from .noise import ErrorSpec, all_single_qubit_paulis, apply, parse_error, random_single_qubit_channel
from .pauli import DENSE_LIMIT, PauliSum
from .weighted import (MAX_QUBITS, TIE_TOL, BlockTerm, DistanceReport, Metric, Partition,
                       block_distance_table, report_from_table)

CONJECTURE_MAX = 10
EXACT_TOL = 1e-12
SIG_DIGITS = 12


def resolve_graph(spec: str | Graph) -> Graph:
    """A preset name (``line3``, ``ring4``, ``line:7``...) or a path to an edge-list file."""
    if isinstance(spec, Graph):
        return spec
    path = Path(spec)
    if path.suffix or path.exists():
        if not path.exists():
            raise FileNotFoundError(f"graph file {spec!r} not found")
        return load_edge_list(path)
    return preset(spec)


def resolve_errors(errors: str | list[str], n: int, seed: int | None = None) -> list[ErrorSpec]:
    """Expand ``"all"`` or parse tokens like ``Z2``; ``R<q>`` draws a random channel on qubit q."""
    if isinstance(errors, str):
        errors = [e for e in errors.replace(",", " ").split() if e]
    if not errors or [e.lower() for e in errors] == ["all"]:
        return all_single_qubit_paulis(n)
    out = []
    for k, token in enumerate(errors):
        if token[:1].upper() == "R" and token[1:].isdigit():
            out.append(random_single_qubit_channel((seed or 0) + k, int(token[1:])))
        else:
            out.append(parse_error(token))
        if not 1 <= out[-1].qubit <= n:
            raise ErrorSpecError(f"error {token!r} targets a qubit outside 1..{n}")
    return out


def exact_form(value: float, tol: float = EXACT_TOL) -> str | None:
    """Closed form ``p/q``, ``p*pi/q`` or ``p*sqrt(2)/q`` matching ``value``, if any."""
    if abs(value) <= tol:
        return "0"
    for unit, name in ((1.0, ""), (math.pi, "pi"), (math.sqrt(2.0), "sqrt(2)")):
        frac = Fraction(value / unit).limit_denominator(64)
        if frac.numerator == 0 or abs(frac.numerator * unit / frac.denominator - value) > tol:
            continue
        p, q = frac.numerator, frac.denominator
        if not name:
            return str(p) if q == 1 else f"{p}/{q}"
        head = {1: name, -1: f"-{name}"}.get(p, f"{p}*{name}")
        return head if q == 1 else f"{head}/{q}"
    return None


def parse_exact(form: str) -> float:
    """Inverse of :func:`exact_form`: ``"3*pi/4"`` -> ``2.356...``."""
    sign = -1.0 if form.startswith("-") else 1.0
    head, _, den = form.lstrip("-").partition("/")
    num, _, unit = head.rpartition("*") if "*" in head else ("", "", head)
    units = {"pi": math.pi, "sqrt(2)": math.sqrt(2.0)}
    value = units[unit] * (int(num) if num else 1) if unit in units else float(int(unit))
    return sign * (value / int(den) if den else value)


def round_sig(value: float, digits: int = SIG_DIGITS) -> float:
    return float(f"{value:.{digits}g}")


@dataclass
class ErrorResult:
    error: str
    reports: dict[Metric, DistanceReport]


@dataclass
class ValueGroup:
    value: float
    exact: str | None
    errors: list[str]


@dataclass
class SweepResult:
    graph: str
    n: int
    metrics: list[Metric]
    results: list[ErrorResult] = field(default_factory=list)
    tolerance: float = TIE_TOL

    def standard_values(self, metric: Metric) -> dict[str, float]:
        return {r.error: r.reports[metric].standard_value for r in self.results}

    def groups(self, metric: Metric | str) -> list[ValueGroup]:
        metric = Metric.parse(metric)
        return group_by_value([(r.error, r.reports[metric].weighted_value)
                               for r in self.results], self.tolerance)


def group_by_value(pairs: list[tuple[str, float]], tol: float = TIE_TOL) -> list[ValueGroup]:
    """Group labels whose values lie within ``tol`` of the group's smallest value."""
    groups: list[ValueGroup] = []
    for label, value in sorted(pairs, key=lambda kv: kv[1]):
        if groups and value - groups[-1].value < tol:
            groups[-1].errors.append(label)
        else:
            groups.append(ValueGroup(value, exact_form(value), [label]))
    return groups


@dataclass
class ExperimentConfig:
    graphs: list[str]
    errors: str | list[str] = "all"
    metrics: list[Metric] = field(default_factory=lambda: [Metric.BURES])
    output: str = "json"
    dense_limit: int = DENSE_LIMIT
    tolerance: float = TIE_TOL
    self_test: bool = False
    seed: int | None = None
    jobs: int = 1

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("at least one graph is required")
        self.metrics = [Metric.parse(m) for m in self.metrics]
        if not self.metrics:
            raise ValueError("at least one metric is required")
        if self.output not in ("json", "markdown"):
            raise ValueError(f"unknown output format {self.output!r}")


def _evaluate(rho: PauliSum, error: ErrorSpec, cfg: ExperimentConfig) -> ErrorResult:
    sigma = rho if cfg.self_test else apply(rho, error)
    reports = {}
    for metric in cfg.metrics:
        table = block_distance_table(rho, sigma, metric, dense_limit=cfg.dense_limit)
        reports[metric] = report_from_table(table, rho.n, metric)
    return ErrorResult(error.label, reports)


def run_sweep(cfg: ExperimentConfig) -> list[SweepResult]:
    """One :class:`SweepResult` per configured graph, errors in configured order."""
    out = []
    for spec in cfg.graphs:
        g = resolve_graph(spec)
        if g.n > MAX_QUBITS or g.n > cfg.dense_limit:
            raise LimitError(f"graph {spec!r} has {g.n} qubits; limit is "
                             f"{min(MAX_QUBITS, cfg.dense_limit)}")
        errors = resolve_errors(cfg.errors, g.n, cfg.seed)
        rho = cluster_state(g)
        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(lambda e: _evaluate(rho, e, cfg), errors))
        else:
            results = [_evaluate(rho, e, cfg) for e in errors]
        out.append(SweepResult(g.name or str(spec), g.n, list(cfg.metrics), results,
                               cfg.tolerance))
    return out


# -- serialization ---------------------------------------------------------------------------

def _number(value: float) -> dict:
    out = {"value": round_sig(value)}
    form = exact_form(value)
    if form is not None:
        out["exact"] = form
    return out


def sweep_to_dicts(sweep: SweepResult) -> list[dict]:
    """One JSON document per metric: ``{graph, metric, results, groups}``."""
    docs = []
    for metric in sweep.metrics:
        results = []
        for r in sweep.results:
            rep = r.reports[metric]
            results.append({
                "error": r.error,
                "standard": _number(rep.standard_value),
                "weighted": _number(rep.weighted_value),
                "optimal_partition": rep.optimal_partition.as_lists(),
                "blocks": [{"qubits": list(b.qubits), "distance": round_sig(b.distance),
                            "weight": round_sig(b.weight), "term": round_sig(b.term)}
                           for b in rep.block_contributions],
            })
        groups = [{"value": round_sig(g.value), "exact": g.exact, "errors": g.errors}
                  for g in sweep.groups(metric)]
        docs.append({"graph": sweep.graph, "n": sweep.n, "metric": metric.value,
                     "tolerance": sweep.tolerance, "results": results, "groups": groups})
    return docs


def to_json(sweeps: list[SweepResult]) -> str:
    docs = [doc for s in sweeps for doc in sweep_to_dicts(s)]
    payload = docs[0] if len(docs) == 1 else docs
    return json.dumps(payload, indent=2) + "\n"


def _read_number(d: dict) -> float:
    """The numeric field, refined to full precision by a consistent exact form."""
    value = d["value"]
    if d.get("exact"):
        exact = parse_exact(d["exact"])
        if abs(exact - value) <= 10.0 ** (1 - SIG_DIGITS) * max(1.0, abs(value)):
            return exact
    return value


def from_json(text: str) -> list[SweepResult]:
    """Inverse of :func:`to_json`.

    Values with an exact form come back at full precision, the rest at 12
    significant digits, so emitting the result again reproduces the input.
    """
    payload = json.loads(text)
    docs = payload if isinstance(payload, list) else [payload]
    sweeps: dict[str, SweepResult] = {}
    for doc in docs:
        metric = Metric.parse(doc["metric"])
        sweep = sweeps.setdefault(doc["graph"], SweepResult(doc["graph"], doc["n"], [], [],
                                                           doc.get("tolerance", TIE_TOL)))
        sweep.metrics.append(metric)
        by_error = {r.error: r for r in sweep.results}
        for item in doc["results"]:
            blocks = tuple(BlockTerm(tuple(b["qubits"]), b["distance"], b["weight"], b["term"])
                           for b in item["blocks"])
            rep = DistanceReport(metric, doc["n"], _read_number(item["standard"]),
                                 _read_number(item["weighted"]),
                                 Partition.of(item["optimal_partition"], doc["n"]), blocks)
            if item["error"] not in by_error:
                by_error[item["error"]] = ErrorResult(item["error"], {})
                sweep.results.append(by_error[item["error"]])
            by_error[item["error"]].reports[metric] = rep
    return list(sweeps.values())


def _display(value: float) -> str:
    form = exact_form(value)
    return f"{value:.6f}" if form is None else f"{form} ({value:.6f})"


def to_markdown(sweeps: list[SweepResult]) -> str:
    """One table per metric; a row for each (graph, weighted value) group."""
    metrics = []
    for s in sweeps:
        metrics.extend(m for m in s.metrics if m not in metrics)
    chunks = []
    for metric in metrics:
        title = "Weighted Bures length" if metric is Metric.BURES else "Weighted Hilbert-Schmidt distance"
        lines = [f"### {title}", "",
                 "| Cluster state | Weighted value | Errors | Standard value |",
                 "|---|---|---|---|"]
        for s in sweeps:
            if metric not in s.metrics:
                continue
            std = s.standard_values(metric)
            for g in s.groups(metric):
                stds = group_by_value([(e, std[e]) for e in g.errors], s.tolerance)
                std_text = ", ".join(_display(v.value) for v in stds)
                lines.append(f"| {s.graph} | {_display(g.value)} | {', '.join(g.errors)} | {std_text} |")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


# -- conjecture sweep ------------------------------------------------------------------------

@dataclass
class ConjectureRow:
    n: int
    error: str
    weighted: float
    partition: Partition

    @property
    def partition_size(self) -> int:
        return len(self.partition)

    @property
    def exploratory(self) -> bool:
        # sizes beyond the hand-checked 3..5 qubit chains
        return self.n > 5


def run_conjecture_sweep(n_max: int, metric: Metric | str = Metric.BURES,
                         n_min: int = 3) -> list[ConjectureRow]:
    """Weighted distance of every Z_i error on chains of ``n_min..n_max`` qubits."""
    if not 3 <= n_min <= n_max <= CONJECTURE_MAX:
        raise LimitError(f"need 3 <= n_min <= n_max <= {CONJECTURE_MAX}, got {n_min}..{n_max}")
    metric = Metric.parse(metric)
    rows = []
    for n in range(n_min, n_max + 1):
        rho = cluster_state(line(n))
        for q in range(1, n + 1):
            e = parse_error(f"Z{q}")
            table = block_distance_table(rho, apply(rho, e), metric)
            rep = report_from_table(table, n, metric)
            rows.append(ConjectureRow(n, e.label, rep.weighted_value, rep.optimal_partition))
    return rows


def conjecture_to_dicts(rows: list[ConjectureRow], metric: Metric | str) -> dict:
    return {"metric": Metric.parse(metric).value,
            "rows": [{"n": r.n, "error": r.error, "weighted": _number(r.weighted),
                      "partition_size": r.partition_size,
                      "optimal_partition": r.partition.as_lists(),
                      "exploratory": r.exploratory} for r in rows]}


def conjecture_to_markdown(rows: list[ConjectureRow], metric: Metric | str) -> str:
    lines = [f"### Z-error position profile ({Metric.parse(metric).value})", "",
             "| n | error | weighted value | partition size | optimal partition | note |",
             "|---|---|---|---|---|---|"]
    for r in rows:
        flag = "exploratory" if r.exploratory else ""
        lines.append(f"| {r.n} | {r.error} | {_display(r.weighted)} | {r.partition_size} "
                     f"| {r.partition} | {flag} |")
    return "\n".join(lines) + "\n"
