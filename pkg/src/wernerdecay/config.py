"""Central numerical tolerances.

Every density-matrix validity check in the package shares one tolerance so
that the integrator's accumulated round-off can be accommodated in a single
place. The CLI exposes it through the ``WERNER_TOL`` environment variable.
"""

DEFAULT_TOLERANCE = 1e-10

_tolerance = DEFAULT_TOLERANCE


def validation_tolerance() -> float:
    """Tolerance currently used by Hermiticity/trace/positivity checks."""
    return _tolerance


def set_validation_tolerance(tol: float) -> None:
    """Override the shared validation tolerance (must be positive)."""
    global _tolerance
    tol = float(tol)
    if not tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    _tolerance = tol


def reset_validation_tolerance() -> None:
    """Restore the default tolerance."""
    global _tolerance
    _tolerance = DEFAULT_TOLERANCE
