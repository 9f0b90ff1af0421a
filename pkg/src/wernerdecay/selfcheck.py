"""Self-validation: every module invariant as a runnable check.

Backs the command-line ``validate`` subcommand and parts of the test-suite.
Each check reports the worst observed residual against its tolerance, so a
failure message immediately shows how far off the implementation is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import analysis, closedform, dynamics, matkit, measures, states

_PIPELINE_P = (0.0, 0.34, 0.5, 1.0 / math.sqrt(2.0) + 0.01, 0.8, 1.0)
_PIPELINE_T = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
_PIPELINE_GAMMAS = ((0.1, 0.1), (0.1, 0.0), (0.05, 0.2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _result(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual <= tolerance, residual, float(tolerance), detail)


# --- random sampling -------------------------------------------------------

def random_density_matrix(rng, rank: int = 4) -> np.ndarray:
    """Normalized G G^dagger over a complex Ginibre factor of given rank."""
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = g @ g.conj().T
    return m / m.trace().real


def random_pure_state(rng) -> np.ndarray:
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_qubit_unitary(rng) -> np.ndarray:
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def sqrt_eigs_charpoly(product: np.ndarray) -> np.ndarray:
    """Square roots of the eigenvalues of a 4x4 matrix, descending, via its
    characteristic polynomial (Newton's identities + quartic roots).

    Independent cross-check route for the concurrence spectrum.
    """
    p1 = np.trace(product)
    m2 = product @ product
    p2 = np.trace(m2)
    p3 = np.trace(m2 @ product)
    p4 = np.trace(m2 @ m2)
    e1 = p1
    e2 = (p1 * p1 - p2) / 2.0
    e3 = (p1**3 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0
    e4 = (p1**4 - 6.0 * p1 * p1 * p2 + 3.0 * p2 * p2 + 8.0 * p1 * p3 - 6.0 * p4) / 24.0
    roots = np.roots([1.0, -e1, e2, -e3, e4])
    lam = np.sqrt(np.clip(roots.real, 0.0, None))
    return np.sort(lam)[::-1]


# --- individual checks -----------------------------------------------------

def _check_matkit(rng) -> Iterator[CheckResult]:
    worst = 0.0
    for _ in range(20):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assoc = np.abs(matkit.kron(matkit.kron(a, b), c) - matkit.kron(a, matkit.kron(b, c))).max()
        alpha, beta = rng.standard_normal(2)
        lin = np.abs(
            matkit.kron(alpha * a + beta * c, b)
            - alpha * matkit.kron(a, b)
            - beta * matkit.kron(c, b)
        ).max()
        worst = max(worst, assoc, lin)
    yield _result("matkit.kron-associative-bilinear", worst, 1e-13)

    worst_recon = worst_trace = worst_unitary = 0.0
    for _ in range(50):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (g + g.conj().T) / 2.0
        values, vectors = matkit.hermitian_eigen(h)
        worst_trace = max(worst_trace, abs(h.trace().real - values.sum()))
        worst_recon = max(worst_recon, np.abs(h @ vectors - vectors * values).max())
        worst_unitary = max(
            worst_unitary, np.abs(vectors.conj().T @ vectors - np.eye(4)).max()
        )
    yield _result("matkit.eigen-trace", worst_trace, 1e-11)
    yield _result("matkit.eigen-reconstruction", worst_recon, 1e-11)
    yield _result("matkit.eigen-unitarity", worst_unitary, 1e-12)

    worst = 0.0
    for _ in range(50):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        a = g.conj().T @ g
        s = matkit.psd_sqrt(a)
        worst = max(worst, np.linalg.norm(s @ s - a))
    yield _result("matkit.psd-sqrt-roundtrip", worst, 1e-10)


def _check_states(rng) -> Iterator[CheckResult]:
    worst = 0.0
    for family in states.FAMILIES:
        for p in np.linspace(0.0, 1.0, 11):
            rho = states.werner(states.WernerSpec(family, float(p)))
            evals = np.linalg.eigvalsh(rho)
            worst = max(worst, max(0.0, -float(evals[0])))
    yield _result("states.werner-psd", worst, 1e-10)

    worst = 0.0
    for _ in range(50):
        rho = random_density_matrix(rng)
        back = states.hs_assemble(states.hs_decompose(rho))
        worst = max(worst, np.abs(back - rho).max())
    yield _result("states.hs-roundtrip", worst, 1e-12)

    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
    u = np.kron(np.eye(2), hadamard)
    diff = np.abs(states.bell_state("Z") - u @ states.bell_state("X") @ u.conj().T).max()
    yield _result("states.bell-z-hadamard", diff, 1e-14)


def _check_dynamics(rng, include_slow: bool) -> Iterator[CheckResult]:
    profile = dynamics.DampingProfile(0.1, 0.07)
    worst = 0.0
    for _ in range(20):
        rho = random_density_matrix(rng)
        t1, t2 = rng.uniform(0.0, 8.0, size=2)
        once = dynamics.analytic_evolve(rho, dynamics.channel_factors(profile, t1 + t2))
        twice = dynamics.analytic_evolve(
            dynamics.analytic_evolve(rho, dynamics.channel_factors(profile, t1)),
            dynamics.channel_factors(profile, t2),
        )
        worst = max(worst, np.abs(once - twice).max())
    yield _result("dynamics.semigroup", worst, 1e-12)

    worst = 0.0
    for _ in range(30):
        rho = random_density_matrix(rng)
        out = dynamics.analytic_evolve(rho, dynamics.channel_factors(profile, rng.uniform(0, 15)))
        defect = matkit.hermiticity_defect(out)
        trace_dev = abs(out.trace().real - 1.0)
        neg = max(0.0, -float(np.linalg.eigvalsh((out + out.conj().T) / 2).min()))
        worst = max(worst, defect, trace_dev, neg)
    yield _result("dynamics.channel-validity", worst, 1e-10)

    p_grid = (0.0, 0.5, 0.8, 1.0) if include_slow else (0.0, 0.8)
    gammas = ((0.1, 0.1), (0.05, 0.2)) if include_slow else ((0.1, 0.1),)
    t_grid = (1.0, 5.0, 20.0) if include_slow else (1.0, 5.0)
    worst = 0.0
    for family in states.FAMILIES:
        for p in p_grid:
            rho0 = states.werner(states.WernerSpec(family, p))
            for g1, g2 in gammas:
                prof = dynamics.DampingProfile(g1, g2)
                for t in t_grid:
                    exact = dynamics.analytic_evolve(rho0, dynamics.channel_factors(prof, t))
                    rk4 = dynamics.integrate(rho0, prof, t, dt=1e-3)
                    worst = max(worst, np.abs(exact - rk4).max())
    yield _result("dynamics.oracle-agreement", worst, 1e-8)

    # order-4 convergence: halving dt should shrink the error ~16x
    prof = dynamics.DampingProfile(1.0, 0.5)
    rho0 = states.werner(states.WernerSpec("Y", 0.8))
    exact = dynamics.analytic_evolve(rho0, dynamics.channel_factors(prof, 2.0))
    err_coarse = np.abs(dynamics.integrate(rho0, prof, 2.0, dt=0.1) - exact).max()
    err_fine = np.abs(dynamics.integrate(rho0, prof, 2.0, dt=0.05) - exact).max()
    factor = err_coarse / err_fine
    yield _result(
        "dynamics.rk4-order",
        abs(factor - 16.0),
        4.0,
        detail=f"error ratio {factor:.2f} for dt 0.1 -> 0.05",
    )


def _check_measures(rng) -> Iterator[CheckResult]:
    worst = 0.0
    for _ in range(1000):
        rho = random_density_matrix(rng)
        mu = matkit.hermitian_eigen(measures.partial_transpose(rho)).eigenvalues
        # at most one eigenvalue may dip below zero
        worst = max(worst, max(0.0, -float(mu[1])))
    yield _result("measures.pt-single-negative-eigenvalue", worst, 1e-10)

    worst = 0.0
    for _ in range(1000):
        rho = random_pure_state(rng)
        b = measures.biv_degree(rho)
        c = measures.concurrence(rho)
        n = measures.negativity(rho)
        worst = max(worst, abs(b - c), abs(n - c))
    yield _result("measures.pure-state-coincidence", worst, 1e-9)

    worst = 0.0
    for _ in range(100):
        rho = random_density_matrix(rng)
        u = np.kron(random_qubit_unitary(rng), random_qubit_unitary(rng))
        rotated = u @ rho @ u.conj().T
        for fn in (
            measures.biv_degree,
            measures.concurrence,
            measures.negativity,
            measures.entanglement_of_formation,
        ):
            worst = max(worst, abs(fn(rho) - fn(rotated)))
    yield _result("measures.local-unitary-invariance", worst, 1e-10)

    violations = 0
    b_threshold, cn_threshold = 1.0 / math.sqrt(2.0), 1.0 / 3.0
    for family in states.FAMILIES:
        for p in np.linspace(0.0, 1.0, 1001):
            p = float(p)
            if abs(p - b_threshold) < 1e-9 or abs(p - cn_threshold) < 1e-9:
                continue
            ms = measures.measure_all(states.werner(states.WernerSpec(family, p)))
            if (ms.b > 1e-9) != (p > b_threshold):
                violations += 1
            if (ms.c > 1e-9) != (p > cn_threshold):
                violations += 1
            if (ms.n > 1e-9) != (p > cn_threshold):
                violations += 1
    yield _result("measures.werner-thresholds", violations, 0.0, detail="misclassified grid points")

    worst = 0.0
    for _ in range(200):
        rho = random_density_matrix(rng)
        product = rho @ measures.spin_flip(rho)
        reference = sqrt_eigs_charpoly(product)
        mu, vecs = matkit.hermitian_eigen(rho)
        factor = vecs * np.sqrt(np.clip(mu, 0.0, None))
        lam = np.linalg.svd(
            factor.T @ np.kron(states.SIGMA_Y, states.SIGMA_Y) @ factor, compute_uv=False
        )
        worst = max(worst, np.abs(np.sort(lam)[::-1] - reference).max())
    yield _result("measures.concurrence-dual-route", worst, 1e-8)


def _pipeline_measures(family, p, g1, g2):
    prof_state = states.werner(states.WernerSpec(family, p))
    evolved = dynamics.analytic_evolve(prof_state, dynamics.ChannelFactors(g1, g2))
    return {
        "b": measures.biv_degree(evolved),
        "c": measures.concurrence(evolved),
        "n": measures.negativity(evolved),
    }


def _check_closedform() -> Iterator[CheckResult]:
    closed_funs = {
        "b": closedform.biv_closed,
        "c": closedform.concurrence_closed,
        "n": closedform.negativity_closed,
    }
    worst = 0.0
    for g1_rate, g2_rate in _PIPELINE_GAMMAS:
        for t in _PIPELINE_T:
            g1, g2 = math.exp(-g1_rate * t), math.exp(-g2_rate * t)
            for family in states.FAMILIES:
                for p in _PIPELINE_P:
                    pipeline = _pipeline_measures(family, p, g1, g2)
                    for key, fn in closed_funs.items():
                        if not closedform.has_closed_form(family, key, p, g1, g2):
                            continue
                        worst = max(worst, abs(fn(family, p, g1, g2) - pipeline[key]))
    yield _result("closedform.pipeline-equivalence", worst, 1e-10)

    # Bell-degree ordering: X and Y coincide and dominate Z at every time
    worst_eq = worst_ord = 0.0
    for g1_rate, g2_rate in ((0.1, 0.1), (0.05, 0.2)):
        for p in (0.75, 0.8, 1.0):
            for t in np.linspace(0.0, 20.0, 400):
                g1, g2 = math.exp(-g1_rate * t), math.exp(-g2_rate * t)
                bx = closedform.biv_closed("X", p, g1, g2)
                by = closedform.biv_closed("Y", p, g1, g2)
                bz = closedform.biv_closed("Z", p, g1, g2)
                worst_eq = max(worst_eq, abs(bx - by))
                worst_ord = max(worst_ord, bz - bx)
    yield _result("closedform.ordering-b-xy-equal", worst_eq, 1e-12)
    yield _result("closedform.ordering-b-z-below", worst_ord, 1e-12)

    # p = 1 orderings at short times: C_Y >= C_Z >= C_X, N_X >= N_Z >= N_Y
    worst = 0.0
    for g1_rate, g2_rate in ((0.1, 0.1), (0.05, 0.2)):
        for t in np.linspace(0.0, 0.5, 400):
            g1, g2 = math.exp(-g1_rate * t), math.exp(-g2_rate * t)
            cx = closedform.concurrence_closed("X", 1.0, g1, g2)
            cy = closedform.concurrence_closed("Y", 1.0, g1, g2)
            cz = closedform.concurrence_closed("Z", 1.0, g1, g2)
            nx = closedform.negativity_closed("X", 1.0, g1, g2)
            ny = closedform.negativity_closed("Y", 1.0, g1, g2)
            nz = closedform.negativity_closed("Z", 1.0, g1, g2)
            worst = max(worst, cz - cy, cx - cz, nz - nx, ny - nz)
    yield _result("closedform.ordering-c-n-p1", worst, 1e-12)

    # single damped qubit: family degeneracy of all three measures
    worst = worst_p1 = 0.0
    for p in (0.5, 0.8, 1.0):
        for t in np.linspace(0.0, 20.0, 101):
            g1 = math.exp(-0.1 * t)
            per_family = [_pipeline_measures(family, p, g1, 1.0) for family in states.FAMILIES]
            for key in measures.MEASURE_KEYS:
                vals = [m[key] for m in per_family]
                worst = max(worst, max(vals) - min(vals))
            if p == 1.0:
                worst_p1 = max(
                    worst_p1,
                    abs(per_family[0]["c"] - math.sqrt(g1)),
                    abs(per_family[0]["n"] - g1),
                )
    yield _result("closedform.single-reservoir-degeneracy", worst, 1e-12)
    yield _result("closedform.single-reservoir-p1-values", worst_p1, 1e-12)

    # equal damping rates make concurrence and negativity coincide for X
    worst = 0.0
    for gamma in (0.05, 0.1, 0.3):
        for p in (0.3, 0.6, 0.8, 1.0):
            for t in np.linspace(0.0, 20.0, 101):
                g = math.exp(-gamma * t)
                vals = _pipeline_measures("X", p, g, g)
                worst = max(worst, abs(vals["c"] - vals["n"]))
    yield _result("closedform.equal-damping-x-c-equals-n", worst, 1e-12)

    yield _check_shorttime_slopes()


def _one_sided_slope(f, h: float) -> float:
    # second-order stencil anchored at t = 0; negative times are outside
    # the channel's domain
    return (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h)


def _one_sided_curvature(f, h: float) -> float:
    return (2.0 * f(0.0) - 5.0 * f(h) + 4.0 * f(2.0 * h) - f(3.0 * h)) / (h * h)


def _closed_curve(fn, family, p, gamma1, gamma2):
    def value(t: float) -> float:
        return fn(family, p, math.exp(-gamma1 * t), math.exp(-gamma2 * t))

    return value


def _check_shorttime_slopes() -> CheckResult:
    h = 1e-4
    worst = 0.0
    details = []
    for gamma1, gamma2 in ((0.1, 0.1), (0.05, 0.2)):
        for family in states.FAMILIES:
            for p in (0.75, 0.8, 0.95):
                _, slope = closedform.shorttime_coeffs(family, "b", p, gamma1, gamma2)
                fd = _one_sided_slope(
                    _closed_curve(closedform.biv_closed, family, p, gamma1, gamma2), h
                )
                worst = max(worst, abs(fd - slope) / abs(slope))
            _, slope = closedform.shorttime_coeffs(family, "c", 1.0, gamma1, gamma2)
            fd = _one_sided_slope(
                _closed_curve(closedform.concurrence_closed, family, 1.0, gamma1, gamma2), h
            )
            worst = max(worst, abs(fd - slope) / abs(slope))
            _, slope, quad = closedform.shorttime_coeffs(family, "n", 1.0, gamma1, gamma2)
            curve = _closed_curve(closedform.negativity_closed, family, 1.0, gamma1, gamma2)
            fd = _one_sided_slope(curve, h)
            worst = max(worst, abs(fd - slope) / abs(slope))
            fd2 = _one_sided_curvature(curve, 1e-3)
            worst = max(worst, abs(fd2 - 2.0 * quad) / abs(2.0 * quad))
    return _result("closedform.shorttime-slopes", worst, 1e-5, "; ".join(details))


def _check_analysis(include_slow: bool) -> Iterator[CheckResult]:
    profile = dynamics.DampingProfile(0.1, 0.1)
    worst = 0.0
    events = []
    for fa, fb in (("Y", "Z"), ("X", "Y"), ("X", "Z")):
        events += analysis.crossing_times(fa, fb, "n", 0.8, profile, tmax=12.0)
    vanish = analysis.vanish_time("X", "b", 1.0, profile)
    events.append(vanish)
    for event in events:
        worst = max(worst, abs(event.residual))
    yield _result("analysis.event-residuals", worst, 1e-9, f"{len(events)} events")

    rows = analysis.ordering_table(0.8, profile, tmax=12.0)
    gap = 0.0
    cursor = 0.0
    for row in rows:
        if row.is_point:
            continue
        gap = max(gap, abs(row.lo - cursor))
        cursor = row.hi
    gap = max(gap, abs(cursor - 12.0))
    yield _result("analysis.interval-coverage", gap, 1e-12, f"{len(rows)} rows")

    if include_slow:
        fine = []
        for fa, fb in (("Y", "Z"), ("X", "Y"), ("X", "Z")):
            fine += analysis.crossing_times(fa, fb, "n", 0.8, profile, tmax=12.0, step=0.001)
        yield _result(
            "analysis.scan-refinement",
            abs(len(fine) - (len(events) - 1)),
            0.0,
            detail=f"{len(events) - 1} crossings at step 0.01, {len(fine)} at 0.001",
        )


def iter_checks(seed: int = 20240817, include_slow: bool = True) -> Iterator[CheckResult]:
    """Run every module invariant, yielding results as they complete."""
    rng = np.random.default_rng(seed)
    yield from _check_matkit(rng)
    yield from _check_states(rng)
    yield from _check_dynamics(rng, include_slow)
    yield from _check_measures(rng)
    yield from _check_closedform()
    yield from _check_analysis(include_slow)


def run_all(seed: int = 20240817, include_slow: bool = True) -> list[CheckResult]:
    return list(iter_checks(seed=seed, include_slow=include_slow))
