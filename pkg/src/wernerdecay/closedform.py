"""Closed-form decay laws for the three Werner families.

Each law is a direct function of the mixing parameter p and the survival
factors (g1, g2); they are the reference values against which the generic
pipeline (construct -> evolve -> measure) is verified to 1e-10.

The Z family's concurrence and negativity only have manageable closed forms
at p = 1 or when the second qubit is undamped (g2 = 1); other combinations
raise Unsupported and callers fall back to the generic pipeline.
"""

from __future__ import annotations

import math

from .errors import OutOfDomain, Unsupported
from .measures import normalize_measure_key
from .states import FAMILIES


def _sqrt_floor(x: float) -> float:
    # inner square-root arguments are nonnegative in exact arithmetic;
    # clamp the round-off dust
    return math.sqrt(x) if x > 0.0 else 0.0


def _check_inputs(family: str, p: float, g1: float, g2: float) -> None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    for name, g in (("g1", g1), ("g2", g2)):
        if not 0.0 < g <= 1.0:
            raise ValueError(f"{name} must lie in (0, 1], got {g!r}")


def biv_closed(family: str, p: float, g1: float, g2: float) -> float:
    """Bell-violation degree of the decayed Werner state.

    Families X and Y share one law; the Z family picks up a correction from
    the single-qubit coherences its decayed state develops.
    """
    _check_inputs(family, p, g1, g2)
    gg = g1 * g2
    if family in ("X", "Y"):
        return _sqrt_floor(2.0 * p * p * gg - 1.0)
    w = (1.0 - g1) ** 2 * (1.0 - g2) ** 2
    v = w + p * p * gg * (g1 + g2)
    # v^2 - 4 p^4 (g1 g2)^3 rewritten as a sum of nonnegative terms; the
    # direct difference cancels catastrophically as t -> 0
    disc = w * w + 2.0 * w * p * p * gg * (g1 + g2) + (p * p * gg * (g1 - g2)) ** 2
    return _sqrt_floor(p * p * gg + 0.5 * (v + _sqrt_floor(disc)) - 1.0)


def concurrence_closed(family: str, p: float, g1: float, g2: float) -> float:
    """Concurrence of the decayed Werner state.

    Raises Unsupported for family Z with p < 1 and g2 < 1 (no printed law;
    use the generic pipeline there).
    """
    _check_inputs(family, p, g1, g2)
    root_gg = math.sqrt(g1 * g2)
    if family == "X":
        q = 1.0 + p
        value = 0.5 * root_gg * (2.0 * p - _sqrt_floor((2.0 - q * g1) * (2.0 - q * g2)))
    elif family == "Y":
        value = 0.5 * root_gg * (
            2.0 * p - math.sqrt(1.0 - p) * _sqrt_floor((2.0 - g1) * (2.0 - g2) - p * g1 * g2)
        )
    elif g2 == 1.0:
        # single undamped qubit: all three families decay identically
        value = 0.5 * math.sqrt(g1) * (
            2.0 * p - _sqrt_floor((1.0 - p) * (2.0 - (1.0 + p) * g1))
        )
    elif p == 1.0:
        value = root_gg * (1.0 - 0.5 * _sqrt_floor((1.0 - g1) * (1.0 - g2)))
    else:
        raise Unsupported(
            f"no closed-form concurrence for family Z with p={p!r} < 1 and g2={g2!r} < 1"
        )
    return max(0.0, value)


def negativity_closed(family: str, p: float, g1: float, g2: float) -> float:
    """Negativity of the decayed Werner state; support domain matches
    ``concurrence_closed``."""
    _check_inputs(family, p, g1, g2)
    gg = g1 * g2
    if family == "X":
        value = 0.5 * (
            -g1 - g2 + (1.0 + p) * gg + _sqrt_floor((g1 - g2) ** 2 + 4.0 * p * p * gg)
        )
    elif family == "Y":
        value = 0.5 * (
            -2.0 + g1 + g2 - (1.0 - p) * gg
            + _sqrt_floor((2.0 - g1 - g2) ** 2 + 4.0 * p * p * gg)
        )
    elif g2 == 1.0:
        value = 0.5 * (p * g1 + _sqrt_floor((1.0 - g1) ** 2 + 4.0 * p * p * g1) - 1.0)
    elif p == 1.0:
        big_g = 0.5 * (g1 + g2)
        value = 0.5 * _sqrt_floor(gg * (5.0 + gg - 2.0 * big_g) + 4.0 * (1.0 - big_g) ** 2) + big_g - 1.0
    else:
        raise Unsupported(
            f"no closed-form negativity for family Z with p={p!r} < 1 and g2={g2!r} < 1"
        )
    return max(0.0, value)


def has_closed_form(family: str, measure: str, p: float, g1: float, g2: float) -> bool:
    """True when the corresponding ``*_closed`` call will not raise
    Unsupported."""
    _check_inputs(family, p, g1, g2)
    if normalize_measure_key(measure) == "b":
        return True
    return family != "Z" or p == 1.0 or g2 == 1.0


# short-time concurrence slope corrections per family
_F_CONCURRENCE = {"X": 2.0, "Y": 0.0, "Z": 1.0}
# short-time negativity curvature corrections per family
_F_NEGATIVITY = {"X": 2.0, "Y": 1.0, "Z": 1.25}

_P_EQ_ONE_TOL = 1e-12


def shorttime_coeffs(
    family: str, measure: str, p: float, gamma1: float, gamma2: float
) -> tuple[float, ...]:
    """Leading expansion coefficients of a measure around t = 0.

    Returns (constant, linear) for B and C, (constant, linear, quadratic)
    for N. The B expansion needs p > 1/sqrt(2) (positive starting value);
    the C and N expansions are only known at p = 1. OutOfDomain otherwise.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    for name, gamma in (("gamma1", gamma1), ("gamma2", gamma2)):
        if not (math.isfinite(gamma) and gamma >= 0.0):
            raise ValueError(f"{name} must be finite and nonnegative, got {gamma!r}")
    key = normalize_measure_key(measure)
    total = gamma1 + gamma2

    if key == "b":
        q_sq = 2.0 * p * p - 1.0
        if q_sq <= 0.0:
            raise OutOfDomain(f"B expansion requires p > 1/sqrt(2), got p={p!r}")
        big_q = math.sqrt(q_sq)
        if family in ("X", "Y"):
            slope = -total * p * p / big_q
        else:
            slope = -(5.0 * total - abs(gamma1 - gamma2)) * p * p / (4.0 * big_q)
        return (big_q, slope)

    if abs(p - 1.0) > _P_EQ_ONE_TOL:
        raise OutOfDomain(f"{key.upper()} expansion is only known at p = 1, got p={p!r}")

    if key == "c":
        f = _F_CONCURRENCE[family]
        return (1.0, -0.5 * (total + f * math.sqrt(gamma1 * gamma2)))

    f_prime = _F_NEGATIVITY[family]
    quadratic = 0.5 * (gamma1**2 + f_prime * gamma1 * gamma2 + gamma2**2)
    return (1.0, -total, quadratic)
