"""Dense Hermitian linear algebra: Jacobi eigensolver, PSD square root and state distances.

Density matrices are plain ``numpy`` complex arrays. The eigensolver is a cyclic
complex Jacobi method; each sweep visits every index pair exactly once using a
round-robin (tournament) schedule, so the ``dim / 2`` disjoint rotations of a
round are applied together. The rotation order is fixed, which makes results
bitwise reproducible.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .exceptions import (ConvergenceError, DimensionError, NotDensityError,
                         NotHermitianError, NotPSDError)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
NEGATIVITY_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


def rank_floor(values: np.ndarray, scale: float = 0.0) -> float:
    """Magnitude below which an eigenvalue is numerically zero.

    ``dim * eps * max(max|lambda|, scale)``; ``scale`` supplies a norm bound when
    every eigenvalue may itself be roundoff.
    """
    if not values.size:
        return 0.0
    top = max(float(np.max(np.abs(values))), scale)
    return values.size * np.finfo(np.float64).eps * top


class Spectrum(NamedTuple):
    """Eigenvalues in descending order and the matching unitary of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = _as_square(a)
    if a.size and np.max(np.abs(a - a.conj().T)) > tol:
        raise NotHermitianError(f"matrix deviates from its adjoint by more than {tol}")
    return a


@lru_cache(maxsize=None)
def _round_robin(dim: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """``dim - 1`` rounds of ``dim / 2`` disjoint pairs covering every pair once."""
    players = list(range(dim))
    rounds = []
    for _ in range(dim - 1):
        pairs = [(players[i], players[dim - 1 - i]) for i in range(dim // 2)]
        p = np.array([min(a, b) for a, b in pairs])
        q = np.array([max(a, b) for a, b in pairs])
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    dim = a.shape[0]
    a = a.copy()
    v = np.eye(dim, dtype=np.complex128)
    if dim == 1:
        return a.diagonal().real.copy(), v
    if dim % 2:
        raise DimensionError("Jacobi schedule requires an even dimension")
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))
    schedule = _round_robin(dim)
    for _ in range(max_sweeps):
        if _off_norm(a) < tol * scale:
            break
        for p, q in schedule:
            apq = a[p, q]
            r = np.abs(apq)
            active = r > 1e-300
            if not active.any():
                continue
            rs = np.where(active, r, 1.0)
            theta = (a[q, q].real - a[p, p].real) / (2.0 * rs)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = np.where(active, 1.0 / np.sqrt(t * t + 1.0), 1.0)
            s = np.where(active, t * c, 0.0)
            w = np.where(active, np.conj(apq) / rs, 1.0)  # exp(-i*phi)
            # all rotations of a round act on disjoint index pairs, so they
            # combine into one unitary U with blocks [[c, s], [-s w, c w]]
            u = np.zeros((dim, dim), dtype=np.complex128)
            u[p, p] = c
            u[p, q] = s
            u[q, p] = -s * w
            u[q, q] = c * w
            a = u.conj().T @ a @ u
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ u
    else:
        if _off_norm(a) >= tol * scale:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return a.diagonal().real.copy(), v


def hermitian_eig(a, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Full spectral decomposition of a Hermitian matrix.

    Eigenvalues are sorted in descending order. Each eigenvector is rescaled by a
    unit phase so that its first component of magnitude above 1e-12 is real and
    positive.

    Raises:
        NotHermitianError: if ``a`` is not Hermitian within 1e-12.
        ConvergenceError: if the off-diagonal mass does not drop below
            ``tol`` (relative to ``max(1, ||a||_F)``) within ``max_sweeps``.
    """
    a = check_hermitian(a)
    a = (a + a.conj().T) / 2
    values, vectors = _jacobi(a, tol, max_sweeps)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            lead = col[nz[0]]
            vectors[:, k] = col * (np.conj(lead) / abs(lead))
    return Spectrum(values, vectors)


def _root_with_spectrum(a, neg_tol: float) -> tuple[np.ndarray, np.ndarray]:
    values, vectors = hermitian_eig(a)
    if values.size and values[-1] < -neg_tol:
        raise NotPSDError(f"smallest eigenvalue {values[-1]:.3e} is below {-neg_tol}")
    kept = np.where(values > rank_floor(values), values, 0.0)
    out = (vectors * np.sqrt(kept)) @ vectors.conj().T
    return (out + out.conj().T) / 2, values


def psd_sqrt(a, neg_tol: float = NEGATIVITY_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-neg_tol, 0)`` are clipped to zero, as are positive ones
    under :func:`rank_floor`; anything more negative than ``-neg_tol`` raises
    :class:`NotPSDError`.
    """
    return _root_with_spectrum(a, neg_tol)[0]


def check_density(rho, *, positivity: bool = False) -> np.ndarray:
    """Validate hermiticity and unit trace; optionally positivity too."""
    try:
        rho = check_hermitian(rho)
    except NotHermitianError as exc:
        raise NotDensityError(str(exc)) from None
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotDensityError(f"trace {tr!r} differs from 1")
    if positivity:
        lowest = hermitian_eig(rho).eigenvalues[-1]
        if lowest < -NEGATIVITY_TOL:
            raise NotDensityError(f"negative eigenvalue {lowest:.3e}")
    return rho


def _same_shape(rho: np.ndarray, sigma: np.ndarray):
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")


def fidelity(rho, sigma, *, check_sigma: bool = True) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``, clamped to [0, 1].

    Positivity of ``rho`` is enforced by its square root; ``check_sigma`` adds an
    explicit eigenvalue check on ``sigma``.
    """
    rho = check_density(rho)
    sigma = check_density(sigma, positivity=check_sigma)
    _same_shape(rho, sigma)
    root = psd_sqrt(rho)
    inner = root @ sigma @ root
    inner = (inner + inner.conj().T) / 2
    values = hermitian_eig(inner).eigenvalues
    # sqrt turns eigenvalue noise of order eps into errors of order sqrt(eps)
    # unit-trace arguments bound the spectrum of the inner product by 1
    values = np.where(values > rank_floor(values, scale=1.0), values, 0.0)
    f = float(np.sum(np.sqrt(values))) ** 2
    return min(1.0, max(0.0, f))


def _sigma_root(sigma: np.ndarray, check_sigma: bool) -> np.ndarray:
    """Square root of ``sigma``; its spectrum doubles as the optional positivity check."""
    root, values = _root_with_spectrum(sigma, np.inf)
    if check_sigma and values.size and values[-1] < -NEGATIVITY_TOL:
        raise NotDensityError(f"negative eigenvalue {values[-1]:.3e}")
    return root


def bures_distance(rho, sigma, *, check_sigma: bool = True) -> float:
    """``min_U ||sqrt(rho) - sqrt(sigma) U||_F``, which equals ``sqrt(2 - 2 sqrt(F))``.

    The minimizing unitary maps the right singular vectors of
    ``M = sqrt(rho) sqrt(sigma)`` onto its left ones. The squared norm is then
    accumulated as a sum of nonnegative pieces, so it keeps full absolute accuracy
    when the two states are equal or orthogonal, where ``2 - 2 sqrt(F)`` would
    cancel catastrophically.
    """
    rho = check_density(rho)
    sigma = check_density(sigma)
    _same_shape(rho, sigma)
    root_rho = psd_sqrt(rho)
    root_sigma = _sigma_root(sigma, check_sigma)
    m = root_rho @ root_sigma
    right = m.conj().T @ m
    s2, v = hermitian_eig((right + right.conj().T) / 2)
    rank = int(np.count_nonzero(s2 > rank_floor(s2, scale=1.0)))
    total = 0.0
    for k in range(rank):
        w = m @ v[:, k]
        w /= np.linalg.norm(w)
        diff = root_rho @ w - root_sigma @ v[:, k]
        total += float(np.vdot(diff, diff).real)
    if rank < v.shape[1]:
        # on the kernels of M and M^H the two sides contribute independently
        left = m @ m.conj().T
        _, w_full = hermitian_eig((left + left.conj().T) / 2)
        for k in range(rank, v.shape[1]):
            # <n|rho|n> as ||sqrt(rho) n||^2: the rank floor of the root drops
            # roundoff eigenvalues that the raw matrix still carries
            total += float(np.linalg.norm(root_rho @ w_full[:, k]) ** 2)
            total += float(np.linalg.norm(root_sigma @ v[:, k]) ** 2)
    return float(np.sqrt(max(0.0, total)))


def bures_length(rho, sigma, *, check_sigma: bool = True) -> float:
    """Bures angle ``arccos(sqrt(F))``, in ``[0, pi/2]``.

    Evaluated as ``2 arcsin(d / 2)`` from :func:`bures_distance`, an identity
    that avoids the square-root loss of precision of ``arccos(sqrt(F))`` near
    ``F = 1`` and ``F = 0``.
    """
    d = bures_distance(rho, sigma, check_sigma=check_sigma)
    return float(2.0 * np.arcsin(min(1.0, max(0.0, d / 2.0))))


def purity(rho) -> float:
    rho = check_hermitian(rho)
    return float(np.sum(np.abs(rho) ** 2))


def overlap(rho, sigma) -> float:
    """``Tr(rho @ sigma)`` for Hermitian arguments (real by construction)."""
    rho = check_hermitian(rho)
    sigma = check_hermitian(sigma)
    _same_shape(rho, sigma)
    # Tr(rho sigma) = sum_ij rho_ij sigma_ji
    return float(np.sum(rho * sigma.T).real)


def hs_distance(rho, sigma) -> float:
    """``sqrt(Tr rho^2 + Tr sigma^2 - 2 Tr rho sigma)``.

    The radicand is ``Tr (rho - sigma)^2``, the squared Frobenius norm of the
    difference, which is how it is evaluated: summing the three traces first
    leaves roundoff of order 1e-17 for equal states, and its square root would
    report a distance of order 1e-9.
    """
    rho = check_hermitian(rho)
    sigma = check_hermitian(sigma)
    _same_shape(rho, sigma)
    return float(np.sqrt(purity(rho - sigma)))
