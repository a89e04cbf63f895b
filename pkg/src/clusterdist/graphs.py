"""Graph (cluster) states in stabilizer form.

The state of a simple graph on vertices ``1..n`` is the common +1 eigenstate of
the generators ``g_i = X_i prod_{j in N(i)} Z_j``; as a density operator it is

    rho = prod_i (I + g_i) / 2 = 2**-n * sum over all subset products of generators.
"""
from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

from .exceptions import GraphError, LimitError
from .pauli import PauliString, PauliSum, multiply

SYMBOLIC_LIMIT = 20

REFERENCE_PRESETS = ("line3", "line4", "ring4", "line5")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges are stored as sorted ``(i, j)`` with ``i < j``."""

    n: int
    edges: frozenset[tuple[int, int]]
    name: str = ""

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]], name: str = "") -> Graph:
        if n < 1:
            raise GraphError(f"vertex count must be >= 1, got {n}")
        seen: set[tuple[int, int]] = set()
        for edge in edges:
            i, j = tuple(edge)
            if i == j:
                raise GraphError(f"self-loop on vertex {i}")
            for v in (i, j):
                if not 1 <= v <= n:
                    raise GraphError(f"vertex {v} outside 1..{n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen), name)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return tuple(sorted({j for i, j in self.edges if i == v} |
                            {i for i, j in self.edges if j == v}))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def line(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"line graph needs n >= 1, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)], name=f"line{n}")


def ring(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"ring graph needs n >= 3, got {n}")
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)], name=f"ring{n}")


def grid(rows: int, cols: int) -> Graph:
    """Open-boundary rectangular lattice, vertices numbered row by row."""
    if rows < 1 or cols < 1:
        raise GraphError(f"invalid grid size {rows}x{cols}")
    idx = lambda r, c: r * cols + c + 1  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return Graph.from_edges(rows * cols, edges, name=f"grid{rows}x{cols}")


_PRESET_RE = re.compile(r"^(line|ring)[:(]?(\d+)\)?$|^grid[:(]?(\d+)[x,](\d+)\)?$")


def preset(name: str) -> Graph:
    """Look up a named topology.

    Accepted forms: ``line3``, ``line4``, ``line5``, ``ring4`` and generally
    ``lineN`` / ``line:N`` / ``line(N)``, ``ringN``, ``gridRxC`` / ``grid:R,C``.
    """
    m = _PRESET_RE.match(name.strip().lower())
    if not m:
        raise GraphError(f"unknown graph preset {name!r}")
    if m.group(1):
        n = int(m.group(2))
        return line(n) if m.group(1) == "line" else ring(n)
    return grid(int(m.group(3)), int(m.group(4)))


def parse_edge_list(text: str, name: str = "") -> Graph:
    """Parse the edge-list format: a line ``n <count>``, then one ``i j`` pair per line.

    Blank lines and anything after ``#`` are ignored.
    """
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise GraphError(f"line {lineno}: expected 'n <count>', got {body!r}")
            try:
                n = int(fields[1])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex count {fields[1]!r}") from None
            continue
        if len(fields) != 2:
            raise GraphError(f"line {lineno}: expected 'i j', got {body!r}")
        try:
            edges.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex in {body!r}") from None
    if n is None:
        raise GraphError("edge list has no 'n <count>' header")
    return Graph.from_edges(n, edges, name=name)


def load_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(encoding="utf-8"), name=path.stem)


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def stabilizer_generators(g: Graph) -> list[PauliString]:
    """Generator ``i`` (list index ``i - 1``) is X on vertex ``i`` and Z on its neighbours."""
    gens = []
    for v in range(1, g.n + 1):
        z = 0
        for u in g.neighbours(v):
            z |= 1 << (u - 1)
        gens.append(PauliString(g.n, 1 << (v - 1), z))
    return gens


def cluster_state(g: Graph, symbolic_limit: int = SYMBOLIC_LIMIT) -> PauliSum:
    """Full stabilizer-group expansion of the graph state of ``g``.

    Subsets of generators are visited in Gray-code order so that each step is a
    single multiplication by one generator.
    """
    if g.n > symbolic_limit:
        raise LimitError(f"{g.n} qubits exceeds the symbolic limit of {symbolic_limit}")
    gens = stabilizer_generators(g)
    coeff = 2.0 ** -g.n
    current = PauliString(g.n)
    sign = 1
    terms = {current: coeff}
    for step in range(1, 1 << g.n):
        # bit flipped between consecutive Gray codes
        flip = (step & -step).bit_length() - 1
        phase, current = multiply(current, gens[flip])
        # generators commute, so every group element is Hermitian
        assert phase.is_real
        if phase.k == 2:
            sign = -sign
        terms[current] = sign * coeff
    return PauliSum(g.n, terms)


def stabilizes(generator: PauliString, rho: PauliSum) -> bool:
    """True when ``generator @ rho == rho`` and ``rho @ generator == rho`` term by term."""
    g = PauliSum.from_string(generator)
    return (g @ rho).isclose(rho) and (rho @ g).isclose(rho)
