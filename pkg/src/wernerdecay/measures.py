"""State functionals on two-qubit density matrices.

Provides the CHSH-violation degree built from the Pauli correlation matrix,
the Wootters concurrence and entanglement of formation, and the negativity
family based on the partial transpose. All functions are pure and expect a
valid density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationFailure
from .matkit import as_complex_matrix, hermitian_eigen
from .states import SIGMA_Y, hs_decompose

_RANGE_SLACK = 1e-12

_SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

#: canonical single-letter keys for the three decay measures
MEASURE_KEYS = ("b", "c", "n")

_MEASURE_ALIASES = {
    "b": "b", "biv": "b", "bell": "b",
    "c": "c", "concurrence": "c",
    "n": "n", "negativity": "n",
}


def normalize_measure_key(measure: str) -> str:
    """Map a measure name ("B", "concurrence", ...) to its key b/c/n."""
    key = _MEASURE_ALIASES.get(str(measure).lower())
    if key is None:
        raise ValueError(f"unknown measure {measure!r}; expected one of B, C, N")
    return key


def _clamp(value: float, lo: float, hi: float, what: str) -> float:
    # round-off may poke past a theoretical bound by a hair; anything more
    # indicates a corrupt input
    if value < lo - _RANGE_SLACK or value > hi + _RANGE_SLACK:
        raise ValidationFailure(
            f"{what} = {value!r} outside [{lo}, {hi}] beyond slack",
            max(lo - value, value - hi),
        )
    return min(max(value, lo), hi)


def horodecki_m(rho) -> float:
    """Sum of the two largest eigenvalues of T^t T, where T is the Pauli
    correlation matrix of the state.

    The CHSH inequality is violated for some analyzer settings iff the
    result exceeds 1; it never exceeds 2.
    """
    t = hs_decompose(rho).t
    u = hermitian_eigen(t.T @ t).eigenvalues
    return _clamp(float(u[-1] + u[-2]), 0.0, 2.0, "Horodecki parameter")


def biv_degree(rho) -> float:
    """Bell-inequality-violation degree sqrt(max(0, M - 1)).

    Zero iff the state admits a local hidden-variable model for all CHSH
    analyzer settings; one at maximal violation.
    """
    return math.sqrt(max(0.0, horodecki_m(rho) - 1.0))


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1 - x) log2(1 - x), with H(0) = H(1) = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    return _SIGMA_YY @ as_complex_matrix(rho).conj() @ _SIGMA_YY


def concurrence(rho) -> float:
    """Wootters concurrence max{0, l1 - l2 - l3 - l4}.

    The l_i (descending) are the square roots of the eigenvalues of
    rho @ spin_flip(rho). Factoring rho = F F^dagger over its nonzero
    eigenspace makes them the singular values of the complex symmetric
    matrix F^t (sy x sy) F; that keeps exact-zero l_i exactly zero instead
    of inflating them to sqrt(round-off), which matters for rank-deficient
    states. Inputs within ~1e-12 of rank deficiency are resolved at the
    lower rank.
    """
    mu, vecs = hermitian_eigen(as_complex_matrix(rho))
    cut = 1e-12 * max(float(mu[-1]), 0.0)
    keep = mu > cut
    factor = vecs[:, keep] * np.sqrt(mu[keep])
    lam = np.linalg.svd(factor.T @ _SIGMA_YY @ factor, compute_uv=False)
    value = float(lam[0] - lam[1:].sum()) if lam.size else 0.0
    return _clamp(max(0.0, value), 0.0, 1.0, "concurrence")


def entanglement_of_formation(rho) -> float:
    """Closed two-qubit form H((1 + sqrt(1 - C^2)) / 2)."""
    c = concurrence(rho)
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def partial_transpose(rho) -> np.ndarray:
    """Transpose over qubit 1: output entry (2i+k, 2j+l) is input entry
    (2j+k, 2i+l). Hermitian with unit trace, but possibly indefinite --
    indefiniteness is exactly what the negativity detects."""
    m = as_complex_matrix(rho)
    return np.ascontiguousarray(m.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4))


def negativity(rho) -> float:
    """-2 x (sum of negative eigenvalues of the partial transpose),
    floored at 0. For two qubits at most one eigenvalue can be negative."""
    mu = hermitian_eigen(partial_transpose(rho)).eigenvalues
    total = float(mu[mu < 0.0].sum())
    return _clamp(max(0.0, -2.0 * total), 0.0, 1.0, "negativity")


def log_negativity(rho) -> float:
    """Logarithmic negativity log2(N + 1)."""
    return math.log2(negativity(rho) + 1.0)


@dataclass(frozen=True)
class MeasureSet:
    """Co-computed scalar bundle at one time point."""

    m: float
    b: float
    c: float
    ef: float
    n: float
    logn: float

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "c": self.c,
            "ef": self.ef,
            "n": self.n,
            "logn": self.logn,
        }


def measure_all(rho) -> MeasureSet:
    """All measures of one state as a consistent bundle: b is derived from
    m, ef from c and logn from n."""
    m = horodecki_m(rho)
    c = concurrence(rho)
    n = negativity(rho)
    return MeasureSet(
        m=m,
        b=math.sqrt(max(0.0, m - 1.0)),
        c=c,
        ef=binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))),
        n=n,
        logn=math.log2(n + 1.0),
    )


#: CSV column order for a measure row
CSV_COLUMNS = ("t", "m", "b", "c", "ef", "n", "logn")


def format_value(x: float) -> str:
    """17 significant digits: exact round-trip for doubles."""
    return f"{x:.17g}"


def csv_header() -> str:
    return ",".join(CSV_COLUMNS)


def csv_row(t: float, ms: MeasureSet) -> str:
    return ",".join(format_value(v) for v in (t, ms.m, ms.b, ms.c, ms.ef, ms.n, ms.logn))
