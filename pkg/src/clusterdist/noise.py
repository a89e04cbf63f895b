"""Single-qubit errors acting on Pauli-sum states.

Pauli errors are applied exactly by sign flips. Unitaries and Kraus channels act
through their 4x4 real Pauli transfer matrix

    R[b, a] = Tr(P_b  Lambda(P_a)) / 2,    P = (I, X, Y, Z),

applied to the letter of every term on the affected qubit, so states never need to
be densified.
"""
from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ErrorSpecError
from .pauli import PRUNE_TOL, PauliString, PauliSum, conjugate_by_pauli

UNITARY_TOL = 1e-10

PAULI_MATRICES = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_LETTERS = "IXYZ"
_LETTER_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))

_ERROR_RE = re.compile(r"^([XYZ])(\d+)$")


@dataclass(frozen=True, eq=False)
class ErrorSpec:
    """A single-qubit error: a Pauli letter, a 2x2 unitary, or a list of Kraus operators.

    Use :func:`pauli_error`, :func:`unitary_error` or :func:`channel_error` to
    build validated instances.
    """

    kind: str
    qubit: int
    letter: str | None = None
    kraus: tuple[np.ndarray, ...] = field(default=(), repr=False)

    @property
    def label(self) -> str:
        if self.kind == "pauli":
            return f"{self.letter}{self.qubit}"
        return f"{'U' if self.kind == 'unitary' else 'K'}{self.qubit}"

    def __eq__(self, other):
        if not isinstance(other, ErrorSpec):
            return NotImplemented
        return (self.kind == other.kind and self.qubit == other.qubit
                and self.letter == other.letter
                and len(self.kraus) == len(other.kraus)
                and all(np.array_equal(a, b) for a, b in zip(self.kraus, other.kraus)))

    def __hash__(self):
        return hash((self.kind, self.qubit, self.letter, len(self.kraus)))

    def __str__(self):
        return self.label


def pauli_error(letter: str, qubit: int) -> ErrorSpec:
    letter = letter.upper()
    if letter not in ("X", "Y", "Z"):
        raise ErrorSpecError(f"Pauli error letter must be X, Y or Z, got {letter!r}")
    if qubit < 1:
        raise ErrorSpecError(f"qubit index must be >= 1, got {qubit}")
    return ErrorSpec("pauli", qubit, letter, (PAULI_MATRICES[letter],))


def unitary_error(matrix, qubit: int) -> ErrorSpec:
    u = np.asarray(matrix, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ErrorSpecError(f"unitary must be 2x2, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
        raise ErrorSpecError("matrix is not unitary")
    if qubit < 1:
        raise ErrorSpecError(f"qubit index must be >= 1, got {qubit}")
    return ErrorSpec("unitary", qubit, None, (u,))


def channel_error(kraus: Sequence, qubit: int) -> ErrorSpec:
    ops = tuple(np.asarray(k, dtype=np.complex128) for k in kraus)
    if not ops or any(k.shape != (2, 2) for k in ops):
        raise ErrorSpecError("Kraus operators must be a nonempty list of 2x2 matrices")
    total = sum(k.conj().T @ k for k in ops)
    if np.max(np.abs(total - np.eye(2))) > UNITARY_TOL:
        raise ErrorSpecError("Kraus operators are not trace preserving")
    if qubit < 1:
        raise ErrorSpecError(f"qubit index must be >= 1, got {qubit}")
    return ErrorSpec("channel", qubit, None, ops)


def parse_error(text: str) -> ErrorSpec:
    """Parse a letter followed by a 1-based qubit index, e.g. ``"Z2"`` or ``"X14"``."""
    m = _ERROR_RE.match(text.strip().upper())
    if not m:
        raise ErrorSpecError(f"cannot parse error {text!r}; expected e.g. 'Z2'")
    return pauli_error(m.group(1), int(m.group(2)))


def all_single_qubit_paulis(n: int) -> list[ErrorSpec]:
    """``X1, Y1, Z1, X2, ...`` in qubit-major order."""
    return [pauli_error(letter, q) for q in range(1, n + 1) for letter in "XYZ"]


def transfer_matrix(kraus: Sequence[np.ndarray]) -> np.ndarray:
    """Real 4x4 Pauli transfer matrix of a single-qubit channel, basis order I, X, Y, Z."""
    basis = [PAULI_MATRICES[ch] for ch in _LETTERS]
    out = np.zeros((4, 4))
    for a, pa in enumerate(basis):
        image = sum(k @ pa @ k.conj().T for k in kraus)
        for b, pb in enumerate(basis):
            out[b, a] = np.trace(pb @ image).real / 2
    return out


def _letter_index(p: PauliString, bit: int) -> int:
    return _LETTER_BITS.index(((p.x >> bit) & 1, (p.z >> bit) & 1))


def apply_transfer(state: PauliSum, ptm: np.ndarray, qubit: int) -> PauliSum:
    """Act with a single-qubit transfer matrix on ``qubit`` of every term."""
    bit = qubit - 1
    clear = ~(1 << bit)
    acc: dict[PauliString, float] = {}
    for p, c in state.items():
        a = _letter_index(p, bit)
        for b in range(4):
            r = ptm[b, a]
            if abs(r) < PRUNE_TOL:
                continue
            xb, zb = _LETTER_BITS[b]
            q = PauliString(state.n, (p.x & clear) | (xb << bit), (p.z & clear) | (zb << bit))
            acc[q] = acc.get(q, 0.0) + c * r
    return PauliSum(state.n, acc)


def apply(state: PauliSum, error: ErrorSpec) -> PauliSum:
    """Image of ``state`` under ``error``."""
    if not 1 <= error.qubit <= state.n:
        raise ErrorSpecError(f"error qubit {error.qubit} outside 1..{state.n}")
    if error.kind == "pauli":
        e = PauliString.single(state.n, error.letter, error.qubit)
        return conjugate_by_pauli(state, e)
    return apply_transfer(state, transfer_matrix(error.kraus), error.qubit)


def random_single_qubit_channel(seed: int, qubit: int = 1) -> ErrorSpec:
    """Reproducible random CPTP map: Kraus rank uniform in 1..4, from a random isometry."""
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(1, 5))
    g = rng.normal(size=(2 * rank, 2)) + 1j * rng.normal(size=(2 * rank, 2))
    q, _ = np.linalg.qr(g)
    kraus = [q[2 * k:2 * k + 2, :] for k in range(rank)]
    return channel_error(kraus, qubit)
