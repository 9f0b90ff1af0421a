"""Time evolution under two independent amplitude-damping reservoirs.

Two deliberately independent routes:

* ``analytic_evolve`` applies the exact product-channel map for quiet
  (zero-temperature) reservoirs, written entrywise in the computational
  basis with the (0, 0) entry fixed by trace preservation.
* ``integrate`` runs a fixed-step classical RK4 over the full dissipator
  and also supports thermal occupation (nbar > 0).

For quiet reservoirs the two must agree; the test-suite and the self-check
command use that agreement as the correctness oracle. The free-Hamiltonian
commutator is dropped throughout: we work in the interaction picture,
where only the dissipative part moves the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matkit import as_complex_matrix
from .states import validate

# Qubit lowering map |0><1|; the reservoir-coupled mode is confined to the
# two lowest levels, so annihilation acts as sigma_minus on its slot.
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
_LOWER_1 = np.kron(SIGMA_MINUS, np.eye(2))
_LOWER_2 = np.kron(np.eye(2), SIGMA_MINUS)


@dataclass(frozen=True)
class DampingProfile:
    """Per-qubit damping rates (1/time) and mean thermal photon numbers."""

    gamma1: float
    gamma2: float
    nbar1: float = 0.0
    nbar2: float = 0.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "nbar1", "nbar2"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def quiet(self) -> bool:
        """True when both reservoirs are at zero temperature."""
        return self.nbar1 == 0.0 and self.nbar2 == 0.0


class ChannelFactors(NamedTuple):
    """Per-qubit survival factors g_k = exp(-gamma_k * t)."""

    g1: float
    g2: float


def channel_factors(profile: DampingProfile, t: float) -> ChannelFactors:
    """Survival factors at time t >= 0."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    return ChannelFactors(math.exp(-profile.gamma1 * t), math.exp(-profile.gamma2 * t))


def analytic_evolve(rho0, factors: ChannelFactors) -> np.ndarray:
    """Exact quiet-reservoir state at survival factors (g1, g2).

    Populations flow toward |00>; coherences pick up square-root survival
    factors according to how many excitations they connect. The top-left
    entry is one minus the other populations, so the output trace is
    exactly one by construction.
    """
    r = as_complex_matrix(rho0)
    g1 = float(factors[0])
    g2 = float(factors[1])
    s1, s2 = math.sqrt(g1), math.sqrt(g2)
    f1 = s2 * ((1.0 - g1) * r[3, 2] + r[1, 0])
    f2 = s1 * ((1.0 - g2) * r[3, 1] + r[2, 0])
    h1 = g2 * ((1.0 - g1) * r[3, 3] + r[1, 1])
    h2 = g1 * ((1.0 - g2) * r[3, 3] + r[2, 2])
    h = 1.0 - (h1 + h2 + g1 * g2 * r[3, 3])
    return np.array(
        [
            [h, f1.conjugate(), f2.conjugate(), s1 * s2 * r[0, 3]],
            [f1, h1, s1 * s2 * r[1, 2], s1 * g2 * r[1, 3]],
            [f2, s1 * s2 * r[2, 1], h2, g1 * s2 * r[2, 3]],
            [s1 * s2 * r[3, 0], s1 * g2 * r[3, 1], g1 * s2 * r[3, 2], g1 * g2 * r[3, 3]],
        ],
        dtype=complex,
    )


def lindblad_rhs(rho, profile: DampingProfile) -> np.ndarray:
    """Dissipator of the two-reservoir master equation evaluated at rho.

    For each qubit k with rate gamma_k and occupation nbar_k:

        gamma_k/2 * { nbar_k     (2 a^dag rho a - a a^dag rho - rho a a^dag)
                    + (nbar_k+1) (2 a rho a^dag - a^dag a rho - rho a^dag a) }

    with a acting as the lowering map on slot k. The map is linear in rho,
    Hermiticity-preserving and traceless.
    """
    m = as_complex_matrix(rho)
    out = np.zeros((4, 4), dtype=complex)
    for a, gamma, nbar in (
        (_LOWER_1, profile.gamma1, profile.nbar1),
        (_LOWER_2, profile.gamma2, profile.nbar2),
    ):
        if gamma == 0.0:
            continue
        ad = a.conj().T
        number = ad @ a
        out += 0.5 * gamma * (nbar + 1.0) * (2.0 * (a @ m @ ad) - number @ m - m @ number)
        if nbar:
            anti = a @ ad
            out += 0.5 * gamma * nbar * (2.0 * (ad @ m @ a) - anti @ m - m @ anti)
    return out


def lindblad_superoperator(profile: DampingProfile) -> np.ndarray:
    """16x16 matrix acting on row-major-vectorized 4x4 matrices; the linear
    extension of ``lindblad_rhs``."""
    sup = np.empty((16, 16), dtype=complex)
    basis = np.zeros((4, 4), dtype=complex)
    for idx in range(16):
        basis.flat[idx] = 1.0
        sup[:, idx] = lindblad_rhs(basis, profile).ravel()
        basis.flat[idx] = 0.0
    return sup


def _rk4_step(sup: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    k1 = sup @ v
    k2 = sup @ (v + (0.5 * dt) * k1)
    k3 = sup @ (v + (0.5 * dt) * k2)
    k4 = sup @ (v + dt * k3)
    out = v + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    # re-Hermitize to keep round-off from drifting the state off the
    # Hermitian manifold over long runs
    m = out.reshape(4, 4)
    return ((m + m.conj().T) * 0.5).ravel()


def integrate(rho0, profile: DampingProfile, t: float, dt: float = 1e-3) -> np.ndarray:
    """Fixed-step classical RK4 solution of the master equation at time t.

    The final partial step is shortened to land exactly on ``t``. The result
    must pass density-matrix validation; a ValidationFailure here means the
    step size is too large for the requested rates.
    """
    rho = validate(rho0)
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    if t == 0.0:
        return rho
    if not 0.0 < dt <= t:
        raise ValueError(f"dt must satisfy 0 < dt <= t, got dt={dt!r}, t={t!r}")
    sup = lindblad_superoperator(profile)
    v = rho.ravel()
    n_full = int(math.floor(t / dt + 1e-12))
    remainder = t - n_full * dt
    if remainder < 1e-12 * max(1.0, t):
        remainder = 0.0
    for _ in range(n_full):
        v = _rk4_step(sup, v, dt)
    if remainder:
        v = _rk4_step(sup, v, remainder)
    return validate(v.reshape(4, 4))
