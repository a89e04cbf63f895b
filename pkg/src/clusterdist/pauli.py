"""Symbolic algebra of N-qubit Pauli operators in the symplectic (x, z) encoding.

A :class:`PauliString` stores two integer bit masks. Bit ``i - 1`` of ``x`` is set
when qubit ``i`` carries an X component, bit ``i - 1`` of ``z`` when it carries a
Z component, so the letter on a qubit is

    (x, z) = (0, 0) -> I,  (1, 0) -> X,  (1, 1) -> Y,  (0, 1) -> Z.

Strings are phase-free Hermitian words, ``P(x, z) = i^{x.z} X^x Z^z`` (so that
``Y = iXZ``). Scalars live in :class:`PauliSum` coefficients or in the
:class:`Phase` returned by :func:`multiply`.

Qubits are labelled ``1..n`` at every public interface. Matrices produced by
:func:`to_dense` use the usual Kronecker ordering, qubit 1 being the leftmost
tensor factor.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .exceptions import DimensionError, LimitError, NotHermitianError

PRUNE_TOL = 1e-14
DENSE_LIMIT = 12

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}
_SPARSE_TOKEN = re.compile(r"([IXYZ])(\d+)")


@dataclass(frozen=True, slots=True)
class Phase:
    """The scalar ``i**k`` with ``k`` taken mod 4."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    @property
    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.k]

    @property
    def is_real(self) -> bool:
        return self.k % 2 == 0

    def __mul__(self, other: Phase) -> Phase:
        return Phase(self.k + other.k)

    def __str__(self):
        return ("+1", "+i", "-1", "-i")[self.k]


@dataclass(frozen=True, slots=True)
class PauliString:
    """A Hermitian tensor product of I/X/Y/Z letters on ``n`` qubits."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"qubit count must be >= 1, got {self.n}")
        bound = 1 << self.n
        if not (0 <= self.x < bound and 0 <= self.z < bound):
            raise DimensionError(f"bit masks do not fit in {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def single(cls, n: int, letter: str, qubit: int) -> PauliString:
        """The word with ``letter`` on ``qubit`` (1-based) and identity elsewhere."""
        _check_qubit(qubit, n)
        xb, zb = _LETTER_BITS[letter.upper()]
        return cls(n, xb << (qubit - 1), zb << (qubit - 1))

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse a dense label such as ``"XIZ"`` (qubit 1 first)."""
        label = label.strip().upper()
        if not label or any(ch not in _LETTER_BITS for ch in label):
            raise ValueError(f"invalid Pauli label {label!r}")
        x = z = 0
        for i, ch in enumerate(label):
            xb, zb = _LETTER_BITS[ch]
            x |= xb << i
            z |= zb << i
        return cls(len(label), x, z)

    @classmethod
    def from_sparse(cls, text: str, n: int) -> PauliString:
        """Parse a sparse word such as ``"Z1 X2 Z3"``; ``"I"`` or ``""`` is the identity.

        Tokens may be separated by whitespace or written contiguously (``"Z1X2Z3"``).
        Repeating a qubit is an error.
        """
        compact = re.sub(r"\s+", "", text.strip().upper())
        if compact in ("", "I"):
            return cls(n)
        tokens = _SPARSE_TOKEN.findall(compact)
        if "".join(a + b for a, b in tokens) != compact:
            raise ValueError(f"invalid sparse Pauli word {text!r}")
        x = z = 0
        seen = set()
        for letter, idx in tokens:
            q = int(idx)
            _check_qubit(q, n)
            if q in seen:
                raise ValueError(f"qubit {q} repeated in {text!r}")
            seen.add(q)
            xb, zb = _LETTER_BITS[letter]
            x |= xb << (q - 1)
            z |= zb << (q - 1)
        return cls(n, x, z)

    def letter(self, qubit: int) -> str:
        _check_qubit(qubit, self.n)
        b = qubit - 1
        return _BITS_LETTER[((self.x >> b) & 1, (self.z >> b) & 1)]

    @property
    def label(self) -> str:
        return "".join(self.letter(q) for q in range(1, self.n + 1))

    @property
    def support(self) -> tuple[int, ...]:
        mask = self.x | self.z
        return tuple(q for q in range(1, self.n + 1) if (mask >> (q - 1)) & 1)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __str__(self):
        if self.is_identity:
            return "I"
        return " ".join(f"{self.letter(q)}{q}" for q in self.support)


def _check_qubit(qubit: int, n: int):
    if not 1 <= qubit <= n:
        raise DimensionError(f"qubit index {qubit} outside 1..{n}")


def _check_same_n(a: int, b: int):
    if a != b:
        raise DimensionError(f"qubit counts differ: {a} vs {b}")


def multiply(p: PauliString, q: PauliString) -> tuple[Phase, PauliString]:
    """Return ``(i**k, r)`` such that ``p @ q == i**k * r`` as operators."""
    _check_same_n(p.n, q.n)
    x3 = p.x ^ q.x
    z3 = p.z ^ q.z
    k = ((p.x & p.z).bit_count() + (q.x & q.z).bit_count()
         + 2 * (p.z & q.x).bit_count() - (x3 & z3).bit_count())
    return Phase(k), PauliString(p.n, x3, z3)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_same_n(p.n, q.n)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


class PauliSum:
    """A Hermitian operator written as a real linear combination of Pauli strings.

    Coefficients with magnitude below ``PRUNE_TOL`` are dropped on construction.
    Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Mapping[PauliString, float] | None = None):
        if n < 1:
            raise DimensionError(f"qubit count must be >= 1, got {n}")
        clean = {}
        for p, c in (terms or {}).items():
            _check_same_n(p.n, n)
            c = float(c)
            if abs(c) >= PRUNE_TOL:
                clean[p] = c
        self._n = n
        self._terms = clean

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[str | PauliString, float]]) -> PauliSum:
        """Build from ``(word, coefficient)`` pairs; repeated words are summed."""
        acc: dict[PauliString, float] = {}
        for word, c in terms:
            p = word if isinstance(word, PauliString) else PauliString.from_sparse(word, n)
            acc[p] = acc.get(p, 0.0) + c
        return cls(n, acc)

    @classmethod
    def from_string(cls, p: PauliString, coefficient: float = 1.0) -> PauliSum:
        return cls(p.n, {p: coefficient})

    @classmethod
    def maximally_mixed(cls, n: int) -> PauliSum:
        return cls(n, {PauliString(n): 2.0 ** -n})

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[PauliString, float]:
        return MappingProxyType(self._terms)

    def coefficient(self, p: PauliString | str) -> float:
        if isinstance(p, str):
            p = PauliString.from_sparse(p, self._n)
        return self._terms.get(p, 0.0)

    def trace(self) -> float:
        return self._terms.get(PauliString(self._n), 0.0) * 2.0 ** self._n

    def purity(self) -> float:
        """``Tr(s @ s)`` from the coefficients alone."""
        return 2.0 ** self._n * sum(c * c for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self._terms)

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    __hash__ = None

    def isclose(self, other: PauliSum, atol: float = PRUNE_TOL) -> bool:
        """Term-wise comparison with absolute coefficient tolerance ``atol``."""
        if self._n != other._n:
            return False
        keys = self._terms.keys() | other._terms.keys()
        return all(abs(self._terms.get(p, 0.0) - other._terms.get(p, 0.0)) <= atol
                   for p in keys)

    def __add__(self, other: PauliSum) -> PauliSum:
        _check_same_n(self._n, other._n)
        acc = dict(self._terms)
        for p, c in other._terms.items():
            acc[p] = acc.get(p, 0.0) + c
        return PauliSum(self._n, acc)

    def __neg__(self) -> PauliSum:
        return PauliSum(self._n, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-other)

    def __mul__(self, scalar: float) -> PauliSum:
        return PauliSum(self._n, {p: c * scalar for p, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: PauliSum) -> PauliSum:
        return product(self, other)

    def sorted_items(self) -> list[tuple[PauliString, float]]:
        """Terms ordered by weight, then by the letters on qubits 1..n."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0].weight, kv[0].label))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = [f"{c:+.6g}*{p}" for p, c in self.sorted_items()]
        return " ".join(parts)

    def __repr__(self):
        return f"PauliSum(n={self._n}, terms={len(self._terms)})"


def product(a: PauliSum, b: PauliSum) -> PauliSum:
    """Operator product ``a @ b``.

    Raises:
        NotHermitianError: if the product has imaginary coefficients, which
            happens when ``a`` and ``b`` do not commute.
    """
    _check_same_n(a.n, b.n)
    acc: dict[PauliString, complex] = {}
    for p, c in a.items():
        for q, d in b.items():
            phase, r = multiply(p, q)
            acc[r] = acc.get(r, 0.0) + c * d * phase.value
    if any(abs(v.imag) >= PRUNE_TOL for v in acc.values() if isinstance(v, complex)):
        raise NotHermitianError("product of non-commuting operators is not Hermitian")
    return PauliSum(a.n, {p: v.real for p, v in acc.items()})


def overlap(a: PauliSum, b: PauliSum) -> float:
    """``Tr(a @ b)``: only shared strings contribute, each with weight ``2**n``."""
    _check_same_n(a.n, b.n)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    return 2.0 ** a.n * sum(c * big.coefficient(p) for p, c in small.items())


def partial_trace(s: PauliSum, keep: Sequence[int]) -> PauliSum:
    """Trace out every qubit not listed in ``keep``.

    Qubit ``keep[j]`` of ``s`` becomes qubit ``j + 1`` of the result. A string
    survives only if it is the identity on all traced qubits; its coefficient is
    multiplied by ``2**(n - len(keep))``.
    """
    keep = list(keep)
    if not keep:
        raise DimensionError("keep set must be nonempty")
    if len(set(keep)) != len(keep):
        raise DimensionError(f"duplicate qubits in keep set {keep}")
    for q in keep:
        _check_qubit(q, s.n)
    k = len(keep)
    traced = ((1 << s.n) - 1) & ~sum(1 << (q - 1) for q in keep)
    scale = 2.0 ** (s.n - k)
    out = {}
    for p, c in s.items():
        if (p.x | p.z) & traced:
            continue
        x = z = 0
        for j, q in enumerate(keep):
            x |= ((p.x >> (q - 1)) & 1) << j
            z |= ((p.z >> (q - 1)) & 1) << j
        out[PauliString(k, x, z)] = c * scale
    return PauliSum(k, out)


def permute_qubits(s: PauliSum, perm: Sequence[int]) -> PauliSum:
    """Relabel qubit ``i`` as ``perm[i - 1]`` (``perm`` is a permutation of 1..n)."""
    if sorted(perm) != list(range(1, s.n + 1)):
        raise DimensionError(f"{perm} is not a permutation of 1..{s.n}")
    out = {}
    for p, c in s.items():
        x = z = 0
        for i, target in enumerate(perm):
            x |= ((p.x >> i) & 1) << (target - 1)
            z |= ((p.z >> i) & 1) << (target - 1)
        out[PauliString(s.n, x, z)] = c
    return PauliSum(s.n, out)


def conjugate_by_pauli(s: PauliSum, e: PauliString) -> PauliSum:
    """``e @ s @ e``: terms anticommuting with ``e`` change sign."""
    _check_same_n(s.n, e.n)
    return PauliSum(s.n, {p: (c if commutes(p, e) else -c) for p, c in s.items()})


def _matrix_masks(p: PauliString) -> tuple[int, int]:
    """x/z masks in matrix-index bit order (qubit 1 is the most significant bit)."""
    n = p.n
    xm = zm = 0
    for b in range(n):
        xm |= ((p.x >> b) & 1) << (n - 1 - b)
        zm |= ((p.z >> b) & 1) << (n - 1 - b)
    return xm, zm


def _string_entries(p: PauliString, cols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row index and value of the single nonzero entry of each column of ``p``."""
    xm, zm = _matrix_masks(p)
    parity = np.bitwise_count(cols & zm) & 1
    values = (1j ** (p.x & p.z).bit_count()) * (1 - 2 * parity.astype(np.float64))
    return cols ^ xm, values


def to_dense(s: PauliSum | PauliString, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """The ``2**n x 2**n`` complex matrix of a Pauli sum or a single string."""
    if isinstance(s, PauliString):
        s = PauliSum.from_string(s)
    if s.n > dense_limit:
        raise LimitError(f"{s.n} qubits exceeds the dense limit of {dense_limit}")
    dim = 1 << s.n
    cols = np.arange(dim, dtype=np.int64)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for p, c in s.items():
        rows, values = _string_entries(p, cols)
        out[rows, cols] += c * values
    return out


def from_dense(matrix: np.ndarray, atol: float = 1e-10) -> PauliSum:
    """Pauli decomposition ``sum_P Tr(P m) / 2**n * P`` of a Hermitian matrix."""
    m = np.asarray(matrix, dtype=np.complex128)
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if m.shape != (dim, dim) or dim != 1 << n or n < 1:
        raise DimensionError(f"expected a 2^n x 2^n matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > atol:
        raise NotHermitianError("matrix is not Hermitian")
    cols = np.arange(dim, dtype=np.int64)
    out = {}
    for x in range(dim):
        for z in range(dim):
            p = PauliString(n, x, z)
            rows, values = _string_entries(p, cols)
            # Tr(P m) = sum_b P[rows_b, b] * m[b, rows_b]
            tr = np.sum(values * m[cols, rows])
            out[p] = tr.real / dim
    return PauliSum(n, out)
