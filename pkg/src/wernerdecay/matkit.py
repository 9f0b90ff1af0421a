"""Dense complex-matrix kernel for small (n <= 8) Hermitian problems.

Everything here is a pure function over numpy arrays; LAPACK (through
``numpy.linalg``) does the heavy lifting behind a fixed error surface.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import config
from .errors import NegativeEigenvalue, NoConvergence, NotHermitian


class HermitianEigenResult(NamedTuple):
    """Ascending eigenvalues; column k of ``eigenvectors`` pairs with
    eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex ndarray, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product; the left factor acts on the first qubit slot."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def hermiticity_defect(a) -> float:
    """Largest entrywise deviation |a - a^dagger|."""
    m = np.asarray(a, dtype=complex)
    return float(np.abs(m - m.conj().T).max())


def hermitian_eigen(a, herm_tol: float | None = None) -> HermitianEigenResult:
    """Full spectrum of a Hermitian matrix, eigenvalues ascending.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian within ``herm_tol`` (defaults to the
        central validation tolerance).

    Raises
    ------
    NotHermitian
        If the Hermiticity defect exceeds tolerance.
    NoConvergence
        If the underlying LAPACK iteration fails.
    """
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    tol = config.validation_tolerance() if herm_tol is None else herm_tol
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(
            f"matrix is not Hermitian: max |a - a^dagger| entry = {defect:.3e}",
            defect,
        )
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare at n <= 8
        raise NoConvergence(f"eigensolver did not converge: {exc}") from exc
    return HermitianEigenResult(values, vectors)


def psd_sqrt(a, herm_tol: float | None = None) -> np.ndarray:
    """Hermitian square root S of a PSD matrix, with S @ S == a.

    Eigenvalues in [-tol, 0) are treated as exact zeros so that round-off
    from channel composition cannot leak NaN into downstream square roots.

    Raises
    ------
    NegativeEigenvalue
        If any eigenvalue lies below -tol.
    """
    tol = config.validation_tolerance() if herm_tol is None else herm_tol
    values, vectors = hermitian_eigen(a, herm_tol)
    if values[0] < -tol:
        raise NegativeEigenvalue(
            f"matrix is not PSD: smallest eigenvalue = {values[0]:.3e}",
            abs(float(values[0])),
        )
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    return (root + root.conj().T) / 2.0
