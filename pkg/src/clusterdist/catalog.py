"""Reference global and marginal states of the small cluster states, with a checker.

Each fixture is written the way it is usually printed: either as a product of
commuting stabilizer factors, ``2**-k prod (I + S)``, or as an explicit signed
list of Pauli words times ``2**-k``. Qubit labels in the words are the global
labels of the parent state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import cluster_state, preset
from .pauli import PRUNE_TOL, PauliString, PauliSum, partial_trace, product


@dataclass(frozen=True)
class Fixture:
    keep: tuple[int, ...]
    factors: tuple[str, ...] | None = None
    terms: tuple[str, ...] | None = None
    note: str = ""

    @property
    def label(self) -> str:
        form = "expanded" if self.terms is not None else "factored"
        return f"rho_{''.join(map(str, self.keep))} ({form})"


def _factored(keep: str, *factors: str) -> Fixture:
    return Fixture(tuple(int(c) for c in keep), factors=factors)


def _shared(keeps: str, *factors: str) -> list[Fixture]:
    return [_factored(k, *factors) for k in keeps.split()]


LINE3 = [
    _factored("123", "X1 Z2", "Z1 X2 Z3", "Z2 X3"),
    Fixture((1, 2, 3), terms=(
        "I", "Z2 X3", "X1 Z2", "X1 X3",
        "Z1 X2 Z3", "Z1 Y2 Y3", "Y1 Y2 Z3", "-Y1 X2 Y3")),
    _factored("12", "X1 Z2"),
    _factored("13", "X1 X3"),
    _factored("23", "Z2 X3"),
]

LINE4 = [
    _factored("1234", "X1 Z2", "Z1 X2 Z3", "Z2 X3 Z4", "Z3 X4"),
    Fixture((1, 2, 3, 4), terms=(
        "I", "Z3 X4", "X1 Z2", "Z2 X3 Z4", "Z2 Y3 Y4",
        "Z1 X2 Z3", "Z1 X2 X4", "X1 X3 Z4", "X1 Y3 Y4",
        "Y1 Y2 Z3", "Y1 Y2 X4", "Z1 Y2 Y3 Z4", "-Z1 Y2 X3 Y4",
        "X1 Z2 Z3 X4", "-Y1 X2 Y3 Z4", "Y1 X2 X3 Y4")),
    _factored("123", "X1 Z2", "Z1 X2 Z3"),
    _factored("124", "X1 Z2", "Z1 X2 X4"),
    _factored("134", "Z3 X4", "X1 X3 Z4"),
    _factored("234", "Z2 X3 Z4", "Z3 X4"),
    _factored("12", "X1 Z2"),
    _factored("34", "Z3 X4"),
    *_shared("13 14 23 24"),
]

RING4 = [
    _factored("1234", "Z4 X1 Z2", "Z1 X2 Z3", "Z2 X3 Z4", "Z1 X4 Z3"),
    Fixture((1, 2, 3, 4), terms=(
        "I", "X1 X3", "X2 X4", "Z1 X4 Z3", "Z2 X3 Z4",
        "-Y2 X3 Y4", "X1 Z2 Z4", "-Y1 Y3 X4", "-X1 Y2 Y4",
        "-Y1 X2 Y3", "Z1 X2 Z3", "Z1 Z2 Y3 Y4", "Z1 Y2 Y3 Z4",
        "Y1 Z2 Z3 Y4", "Y1 Y2 Z3 Z4", "X1 X2 X3 X4"),
        note="printed as '- Y_2 X_3 Z_4'; the factored form of the same state "
             "and its x-support {2,3} force '- Y_2 X_3 Y_4'"),
    _factored("123", "Z1 X2 Z3", "X1 X3"),
    _factored("124", "Z4 X1 Z2", "X2 X4"),
    _factored("134", "Z1 X4 Z3", "X1 X3"),
    _factored("234", "Z2 X3 Z4", "X2 X4"),
    _factored("13", "X1 X3"),
    _factored("24", "X2 X4"),
    *_shared("12 14 23 34"),
]

LINE5 = [
    _factored("12345", "X1 Z2", "Z1 X2 Z3", "Z2 X3 Z4", "Z3 X4 Z5", "Z4 X5"),
    Fixture((1, 2, 3, 4, 5), terms=(
        "I", "Z4 X5", "X1 Z2", "Z3 X4 Z5", "Z3 Y4 Y5",
        "Z2 X3 Z4", "Z2 X3 X5", "Z1 X2 Z3", "X1 X3 Z4",
        "X1 X3 X5", "Y1 Y2 Z3", "Z2 Y3 Y4 Z5",
        "-Z2 Y3 X4 Y5", "Z1 X2 X4 Z5", "Z1 X2 Y4 Y5",
        "Z1 Y2 Y3 Z4", "Z1 Y2 Y3 X5", "X1 Z2 Z4 X5",
        "X1 Y3 Y4 Z5", "-X1 Y3 X4 Y5", "Y1 Y2 X4 Z5",
        "Y1 Y2 Y4 Y5", "-Y1 X2 Y3 Z4", "-Y1 X2 Y3 X5",
        "Z1 X2 Z3 Z4 X5", "-Z1 Y2 X3 Y4 Z5", "Z1 Y2 X3 X4 Y5",
        "X1 Z2 Z3 X4 Z5", "X1 Z2 Z3 Y4 Y5", "Y1 Y2 Z3 Z4 X5",
        "Y1 X2 X3 Y4 Z5", "-Y1 X2 X3 X4 Y5")),
    _factored("1234", "X1 Z2", "Z1 X2 Z3", "Z2 X3 Z4"),
    _factored("1235", "X1 Z2", "Z1 X2 Z3", "Z2 X3 X5"),
    _factored("1245", "X1 Z2", "Z4 X5", "Z1 X2 X4 Z5"),
    _factored("1345", "Z3 X4 Z5", "Z4 X5", "X1 X3 Z4"),
    _factored("2345", "Z2 X3 Z4", "Z3 X4 Z5", "Z4 X5"),
    _factored("123", "X1 Z2", "Z1 X2 Z3"),
    *_shared("124 125", "X1 Z2"),
    _factored("134", "X1 X3 Z4"),
    _factored("135", "X1 X3 X5"),
    *_shared("145 245", "Z4 X5"),
    _factored("234", "Z2 X3 Z4"),
    _factored("235", "Z2 X3 X5"),
    _factored("345", "Z3 X4 Z5", "Z4 X5"),
    _factored("12", "X1 Z2"),
    _factored("45", "Z4 X5"),
    *_shared("13 14 15 23 24 25 34 35"),
]

CATALOG = {"line3": LINE3, "line4": LINE4, "ring4": RING4, "line5": LINE5}


def _local_word(word: str, keep: tuple[int, ...]) -> tuple[float, PauliString]:
    """Parse a signed word in global labels into a string on ``len(keep)`` qubits."""
    word = word.strip()
    sign = 1.0
    if word[0] in "+-":
        sign = -1.0 if word[0] == "-" else 1.0
        word = word[1:].strip()
    tokens = []
    for token in word.split():
        if token == "I":
            continue
        letter, q = token[0], int(token[1:])
        tokens.append(f"{letter}{keep.index(q) + 1}")
    return sign, PauliString.from_sparse(" ".join(tokens), len(keep))


def expected_state(fx: Fixture) -> PauliSum:
    """The operator a fixture denotes, as a Pauli sum on ``len(fx.keep)`` qubits."""
    k = len(fx.keep)
    scale = 2.0 ** -k
    if fx.terms is not None:
        pairs = []
        for word in fx.terms:
            sign, p = _local_word(word, fx.keep)
            pairs.append((p, sign * scale))
        return PauliSum.from_terms(k, pairs)
    state = PauliSum.maximally_mixed(k)
    ident = PauliString(k)
    for word in fx.factors:
        sign, p = _local_word(word, fx.keep)
        state = product(state, PauliSum(k, {ident: 1.0, p: sign}))
    return state


@dataclass
class FixtureResult:
    fixture: Fixture
    ok: bool
    mismatches: list[tuple[str, float, float]] = field(default_factory=list)


@dataclass
class MarginalReport:
    graph: str
    results: list[FixtureResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def format(self) -> str:
        lines = [f"marginal catalog for {self.graph}: {'PASS' if self.ok else 'FAIL'}"]
        for r in self.results:
            lines.append(f"  {'ok  ' if r.ok else 'FAIL'} {r.fixture.label}")
            if r.fixture.note:
                lines.append(f"       note: {r.fixture.note}")
            for word, want, got in r.mismatches:
                lines.append(f"       {word}: expected {want:+.6g}, computed {got:+.6g}")
        return "\n".join(lines)


def compare(computed: PauliSum, expected: PauliSum,
            atol: float = PRUNE_TOL) -> list[tuple[str, float, float]]:
    """Term-level differences ``(word, expected, computed)`` larger than ``atol``."""
    out = []
    for p in sorted(computed.terms.keys() | expected.terms.keys(),
                    key=lambda s: (s.weight, s.label)):
        want, got = expected.coefficient(p), computed.coefficient(p)
        if abs(want - got) > atol:
            out.append((str(p), want, got))
    return out


def verify_marginals(name: str) -> MarginalReport:
    """Compare every catalogued marginal of a preset with the computed partial trace."""
    key = name.strip().lower()
    if key not in CATALOG:
        raise KeyError(f"no marginal catalog for {name!r}; choose from {sorted(CATALOG)}")
    rho = cluster_state(preset(key))
    results = []
    for fx in CATALOG[key]:
        mismatches = compare(partial_trace(rho, fx.keep), expected_state(fx))
        results.append(FixtureResult(fx, not mismatches, mismatches))
    return MarginalReport(key, results)
