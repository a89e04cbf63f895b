"""Independent oracles and random generators shared by the test modules.

Nothing here goes through the package's own dense machinery: letter matrices
are written out by hand and combined with ``np.kron``, and partial traces are
index contractions with ``np.einsum``.
"""
from __future__ import annotations

import string
from functools import reduce

import numpy as np
import pytest

from clusterdist.pauli import PauliString, PauliSum, from_dense

LETTERS = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_word(label: str) -> np.ndarray:
    """Dense matrix of a dense label such as ``"XIZ"`` (qubit 1 leftmost)."""
    return reduce(np.kron, (LETTERS[ch] for ch in label))


def oracle_dense(s: PauliSum | PauliString) -> np.ndarray:
    if isinstance(s, PauliString):
        return kron_word(s.label)
    dim = 1 << s.n
    out = np.zeros((dim, dim), dtype=complex)
    for p, c in s.items():
        out += c * kron_word(p.label)
    return out


def oracle_partial_trace(m: np.ndarray, n: int, keep) -> np.ndarray:
    """Trace out the complement of ``keep`` and order the rest as listed in ``keep``."""
    keep = list(keep)
    letters = string.ascii_letters
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for q in range(1, n + 1):
        if q not in keep:
            cols[q - 1] = rows[q - 1]
    out = "".join(rows[q - 1] for q in keep) + "".join(cols[q - 1] for q in keep)
    t = np.einsum("".join(rows) + "".join(cols) + "->" + out, m.reshape([2] * (2 * n)))
    k = len(keep)
    return t.reshape(1 << k, 1 << k)


def embed_single(u: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """``u`` acting on ``qubit`` of ``n`` (identity elsewhere)."""
    mats = [LETTERS["I"]] * n
    mats[qubit - 1] = u
    return reduce(np.kron, mats)


def random_factor(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """``A`` with ``A A^H`` a density matrix: a normalized complex Ginibre matrix."""
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    return g / np.linalg.norm(g)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed density matrix of the given (default: random) rank."""
    a = random_factor(rng, dim, rank)
    rho = a @ a.conj().T
    return (rho + rho.conj().T) / 2


def factor_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Fidelity of ``a a^H`` and ``b b^H``: the squared trace norm of ``a^H b``.

    Uses only an SVD of the factors, so it stays accurate for rank-deficient
    states where any square root of a computed spectrum loses half the digits.
    """
    return float(np.sum(np.linalg.svd(a.conj().T @ b, compute_uv=False)) ** 2)


def random_state(rng: np.random.Generator, n: int, rank: int | None = None) -> PauliSum:
    return from_dense(random_density(rng, 1 << n, rank))


def random_string(rng: np.random.Generator, n: int) -> PauliString:
    return PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))


def random_pauli_sum(rng: np.random.Generator, n: int, terms: int = 8) -> PauliSum:
    pairs = [(random_string(rng, n), float(rng.normal())) for _ in range(terms)]
    return PauliSum.from_terms(n, pairs)


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ----------------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> bool:
    """Print and remember one PASS/FAIL line; the terminal summary repeats them in order."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
