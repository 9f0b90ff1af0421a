"""Two-qubit basis states, Bell projectors, Werner mixtures and the
Pauli (Hilbert-Schmidt) decomposition.

Basis convention, inherited by every module in the package: the
computational basis is ordered {|00>, |01>, |10>, |11>} and entry
(2*i + k, 2*j + l) of a density matrix is <i,k| rho |j,l>, so qubit 1
owns the left slot of |i,k>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import NotHermitian, NotPSD, TraceNotOne, ValidationFailure
from .matkit import as_complex_matrix, hermiticity_defect, kron

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

FAMILIES = ("X", "Y", "Z")

_SQRT2 = np.sqrt(2.0)
_BELL_VECTORS = {
    # (|00> + |11>)/sqrt(2)
    "X": np.array([1, 0, 0, 1], dtype=complex) / _SQRT2,
    # the singlet (|01> - |10>)/sqrt(2)
    "Y": np.array([0, 1, -1, 0], dtype=complex) / _SQRT2,
    # (|00> + |01> + |10> - |11>)/2, a Hadamard on qubit 2 away from |X>
    "Z": np.array([1, 1, 1, -1], dtype=complex) / 2.0,
}

# Pauli tensor stacks reused by the Hilbert-Schmidt decomposition.
_LEFT_STACK = np.stack([kron(s, IDENTITY2) for s in PAULIS])
_RIGHT_STACK = np.stack([kron(IDENTITY2, s) for s in PAULIS])
_PAIR_STACK = np.stack([np.stack([kron(a, b) for b in PAULIS]) for a in PAULIS])


def bell_vector(family: str) -> np.ndarray:
    """State vector of the named maximally entangled state."""
    try:
        return _BELL_VECTORS[family].copy()
    except KeyError:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}") from None


def bell_state(family: str) -> np.ndarray:
    """Rank-1 projector onto the Bell state |X>, |Y> (singlet) or |Z>."""
    v = _BELL_VECTORS.get(family)
    if v is None:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class WernerSpec:
    """Initial-state family tag (X, Y or Z) plus mixing parameter p."""

    family: str
    p: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "p", p)


def werner(spec: WernerSpec) -> np.ndarray:
    """Convex mixture p |psi><psi| + (1 - p)/4 * I of a Bell state and the
    maximally mixed state."""
    return spec.p * bell_state(spec.family) + (1.0 - spec.p) / 4.0 * np.eye(4, dtype=complex)


@dataclass(frozen=True)
class HilbertSchmidtDecomp:
    """Bloch vectors r (qubit 1) and s (qubit 2) plus the 3x3 correlation
    matrix t with t[n, m] = Tr(rho sigma_n x sigma_m)."""

    r: np.ndarray
    s: np.ndarray
    t: np.ndarray


def hs_decompose(rho, imag_tol: float | None = None) -> HilbertSchmidtDecomp:
    """Pauli expansion coefficients of a two-qubit state.

    All coefficients are real for a Hermitian input; imaginary residue below
    tolerance is discarded, anything larger signals a corrupt input and
    raises ValidationFailure.
    """
    m = as_complex_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    tol = config.validation_tolerance() if imag_tol is None else imag_tol
    r = np.einsum("ij,nji->n", m, _LEFT_STACK)
    s = np.einsum("ij,nji->n", m, _RIGHT_STACK)
    t = np.einsum("ij,nmji->nm", m, _PAIR_STACK)
    residue = max(np.abs(r.imag).max(), np.abs(s.imag).max(), np.abs(t.imag).max())
    if residue > tol:
        raise ValidationFailure(
            f"Pauli coefficients have imaginary residue {residue:.3e}; input is not Hermitian",
            float(residue),
        )
    return HilbertSchmidtDecomp(r.real.copy(), s.real.copy(), t.real.copy())


def hs_assemble(decomp: HilbertSchmidtDecomp) -> np.ndarray:
    """Rebuild the density matrix from its Pauli coefficients."""
    out = np.eye(4, dtype=complex)
    out += np.einsum("n,nij->ij", decomp.r, _LEFT_STACK)
    out += np.einsum("m,mij->ij", decomp.s, _RIGHT_STACK)
    out += np.einsum("nm,nmij->ij", decomp.t, _PAIR_STACK)
    return out / 4.0


def validate(rho, tol: float | None = None) -> np.ndarray:
    """Certify a 4x4 density matrix, or raise naming the failed invariant.

    Checks run in order: Hermiticity, unit trace, positive semidefiniteness.
    The raised error carries the size of the violation in ``defect``.
    """
    m = as_complex_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    tol = config.validation_tolerance() if tol is None else tol
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"max |rho - rho^dagger| entry = {defect:.3e}", defect)
    trace = m.trace()
    if abs(trace - 1.0) > tol:
        raise TraceNotOne(f"trace = {trace.real:.12g}, deviation {abs(trace - 1.0):.3e}", abs(trace - 1.0))
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    if evals[0] < -tol:
        raise NotPSD(f"worst eigenvalue = {evals[0]:.6g}", abs(float(evals[0])))
    return np.array(m)


def to_json_dict(rho) -> dict:
    """JSON-ready form {"dims": [4, 4], "re": [[...]], "im": [[...]]}."""
    m = as_complex_matrix(rho)
    return {
        "dims": [int(m.shape[0]), int(m.shape[1])],
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def from_json_dict(obj: dict) -> np.ndarray:
    """Inverse of ``to_json_dict``; the result is not validated."""
    dims = tuple(obj["dims"])
    m = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if m.shape != dims:
        raise ValueError(f"declared dims {dims} do not match data shape {m.shape}")
    return m
