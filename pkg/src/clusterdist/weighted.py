"""Weighted distances: best 1/k-weighted sum of block distances over all set partitions.

For states ``rho`` and ``sigma`` of ``n`` qubits and a block distance ``d``,

    D(rho, sigma) = max over partitions {B_1, ..., B_m} of {1..n} of
                    sum_a d(rho_{B_a}, sigma_{B_a}) / |B_a|,

where ``rho_B`` is the marginal on block ``B``. The objective is additive over
blocks, so it is maximized exactly by a dynamic program over subsets in
``O(3**n)``; plain enumeration of all Bell(n) partitions is kept as an
independent check.
"""
from __future__ import annotations

import enum
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from . import linalg
from .exceptions import DimensionError, LimitError, MetricError
from .pauli import DENSE_LIMIT, PauliSum, overlap, partial_trace, to_dense

MAX_QUBITS = 12
TIE_TOL = 1e-9


class Metric(str, enum.Enum):
    BURES = "bures"
    HILBERT_SCHMIDT = "hilbert_schmidt"

    @classmethod
    def parse(cls, value: str | Metric) -> Metric:
        if isinstance(value, Metric):
            return value
        key = value.strip().lower().replace("-", "_")
        aliases = {"b": "bures", "hs": "hilbert_schmidt", "hilbertschmidt": "hilbert_schmidt"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise MetricError(f"unknown metric {value!r}") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Partition:
    """Disjoint sorted blocks covering ``1..n``, ordered by their smallest element."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]], n: int | None = None) -> Partition:
        canon = tuple(sorted(tuple(sorted(b)) for b in blocks))
        flat = [q for b in canon for q in b]
        if any(not b for b in canon):
            raise DimensionError("partition blocks must be nonempty")
        size = len(flat) if n is None else n
        if sorted(flat) != list(range(1, size + 1)):
            raise DimensionError(f"blocks {blocks} do not partition 1..{size}")
        return cls(canon)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self):
        return " ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


class BlockTerm(NamedTuple):
    qubits: tuple[int, ...]
    distance: float
    weight: float
    term: float


@dataclass(frozen=True)
class DistanceReport:
    metric: Metric
    n: int
    standard_value: float
    weighted_value: float
    optimal_partition: Partition
    block_contributions: tuple[BlockTerm, ...]


def _check_n(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise LimitError(f"qubit count {n} outside 1..{MAX_QUBITS}")


def enumerate_partitions(n: int) -> Iterator[Partition]:
    """All set partitions of ``1..n`` in restricted-growth-string order.

    A restricted growth string ``a`` has ``a[0] = 0`` and
    ``a[i] <= 1 + max(a[:i])``; qubit ``i + 1`` goes into block ``a[i]``. Strings
    are produced in lexicographic order, starting from the single block.
    """
    _check_n(n)
    a = [0] * n
    while True:
        blocks: list[list[int]] = []
        for q, label in enumerate(a, start=1):
            if label == len(blocks):
                blocks.append([])
            blocks[label].append(q)
        yield Partition(tuple(tuple(b) for b in blocks))
        # increment the rightmost position that still has room to grow
        i = n - 1
        while i > 0 and a[i] > max(a[:i]):
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0


def _mask_qubits(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def _qubits_mask(qubits: Sequence[int]) -> int:
    return sum(1 << (q - 1) for q in qubits)


def block_distance(rho_block: PauliSum, sigma_block: PauliSum, metric: Metric | str,
                   *, shortcuts: bool = True, dense_limit: int = DENSE_LIMIT) -> float:
    """Distance between two marginal states given as Pauli sums.

    With ``shortcuts`` enabled, two exact cases skip the dense computation:
    identical operators are at distance 0, and for Bures, states with zero
    overlap ``Tr(rho sigma)`` have orthogonal supports and sit at ``pi/2``.
    """
    metric = Metric.parse(metric)
    if shortcuts:
        if rho_block.isclose(sigma_block):
            return 0.0
        if metric is Metric.BURES and abs(overlap(rho_block, sigma_block)) < 1e-14:
            return math.pi / 2
    r = to_dense(rho_block, dense_limit)
    s = to_dense(sigma_block, dense_limit)
    if metric is Metric.BURES:
        return linalg.bures_length(r, s)
    return linalg.hs_distance(r, s)


def block_distance_table(rho: PauliSum, sigma: PauliSum, metric: Metric | str,
                         *, shortcuts: bool = True,
                         dense_limit: int = DENSE_LIMIT) -> dict[tuple[int, ...], float]:
    """Distance between the marginals of ``rho`` and ``sigma`` on every nonempty subset.

    Keys are sorted tuples of 1-based qubit labels, in increasing bit-mask order.
    """
    if rho.n != sigma.n:
        raise DimensionError(f"qubit counts differ: {rho.n} vs {sigma.n}")
    _check_n(rho.n)
    metric = Metric.parse(metric)
    table = {}
    for mask in range(1, 1 << rho.n):
        keep = _mask_qubits(mask)
        table[keep] = block_distance(partial_trace(rho, keep), partial_trace(sigma, keep),
                                     metric, shortcuts=shortcuts, dense_limit=dense_limit)
    return table


def _weights(table: Mapping[tuple[int, ...], float], n: int) -> list[float]:
    w = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        w[mask] = table[_mask_qubits(mask)] / mask.bit_count()
    return w


def maximize_partition(table: Mapping[tuple[int, ...], float], n: int,
                       tol: float = TIE_TOL) -> tuple[float, Partition]:
    """Subset DP: ``f(S) = max_{T subset S, min(S) in T} w(T) + f(S \\ T)``.

    Among partitions within ``tol`` of the optimum the one with the fewest
    blocks wins, then the lexicographically smallest block list.
    """
    _check_n(n)
    w = _weights(table, n)
    full = (1 << n) - 1
    best = [0.0] * (full + 1)
    choice: list[tuple] = [(0, ())] * (full + 1)  # (block count, canonical blocks)
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        candidates = []
        sub = rest
        while True:
            t = sub | low
            candidates.append((w[t] + best[s ^ t], t))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        top = max(v for v, _ in candidates)
        best[s] = top
        keys = []
        for v, t in candidates:
            if v >= top - tol:
                count, blocks = choice[s ^ t]
                keys.append((count + 1, (_mask_qubits(t),) + blocks))
        choice[s] = min(keys)
    return best[full], Partition(choice[full][1])


def maximize_partition_exhaustive(table: Mapping[tuple[int, ...], float], n: int,
                                  tol: float = TIE_TOL) -> tuple[float, Partition]:
    """Same contract as :func:`maximize_partition`, by scoring every set partition."""
    scored = [(sum(table[b] / len(b) for b in p.blocks), p) for p in enumerate_partitions(n)]
    top = max(v for v, _ in scored)
    winner = min((p for v, p in scored if v >= top - tol),
                 key=lambda p: (len(p.blocks), p.blocks))
    return top, winner


def report_from_table(table: Mapping[tuple[int, ...], float], n: int, metric: Metric | str,
                      method: str = "dp") -> DistanceReport:
    if method == "dp":
        _, part = maximize_partition(table, n)
    elif method == "exhaustive":
        _, part = maximize_partition_exhaustive(table, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    terms = tuple(BlockTerm(b, table[b], 1.0 / len(b), table[b] / len(b)) for b in part.blocks)
    return DistanceReport(
        metric=Metric.parse(metric),
        n=n,
        standard_value=table[tuple(range(1, n + 1))],
        weighted_value=math.fsum(t.term for t in terms),
        optimal_partition=part,
        block_contributions=terms,
    )


def weighted_distance(rho: PauliSum, sigma: PauliSum, metric: Metric | str = Metric.BURES,
                      *, method: str = "dp", shortcuts: bool = True,
                      dense_limit: int = DENSE_LIMIT) -> DistanceReport:
    """Weighted distance between two states, with the maximizing partition.

    Args:
        rho, sigma: density operators on the same number of qubits (at most 12).
        metric: ``"bures"`` or ``"hilbert_schmidt"``.
        method: ``"dp"`` (subset dynamic program) or ``"exhaustive"``.
        shortcuts: allow the exact equal / zero-overlap shortcuts of
            :func:`block_distance`.
    """
    table = block_distance_table(rho, sigma, metric, shortcuts=shortcuts,
                                 dense_limit=dense_limit)
    return report_from_table(table, rho.n, metric, method)


def cost_lower_bound(report: DistanceReport, n: int | None = None) -> float:
    """Smallest admissible energy-time product ``E * t`` for turning one state into the other.

    Only defined for the weighted Bures length: ``N E t >= D_B``.
    """
    if report.metric is not Metric.BURES:
        raise MetricError("cost bound is defined for the weighted Bures length only")
    n = report.n if n is None else n
    if n < 1:
        raise DimensionError(f"qubit count must be >= 1, got {n}")
    return report.weighted_value / n
