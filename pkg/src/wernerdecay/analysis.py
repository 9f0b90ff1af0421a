"""Time-grid scans, sudden-death and crossing detection, interval ordering
tables and the measure-ordering witness report.

Event detection uses a coarse sign-change scan (default step 0.01) followed
by bisection, which converges unconditionally on a bracket even though the
floored measures have kinks. Samples smaller than ``ZERO_EPS`` are treated
as exact zeros so identically-coinciding curves (e.g. a single damped
qubit) produce no spurious events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DampingProfile, analytic_evolve, channel_factors, integrate
from .errors import NotPositiveAtStart
from .measures import (
    MeasureSet,
    biv_degree,
    concurrence,
    csv_row,
    format_value,
    measure_all,
    negativity,
    normalize_measure_key,
)
from .states import FAMILIES, WernerSpec, validate, werner

#: samples with magnitude below this count as exactly zero in event scans
ZERO_EPS = 1e-13
#: two curve values closer than this are reported as tied
TIE_TOL = 1e-9
#: bisection stops once the bracket is narrower than this
BRACKET_WIDTH = 1e-10
DEFAULT_SCAN_STEP = 0.01

_MEASURE_FUNS = {"b": biv_degree, "c": concurrence, "n": negativity}


@dataclass(frozen=True)
class CrossingEvent:
    """A detected measure zero ("vanish") or pairwise curve crossing."""

    kind: str  # "vanish" | "cross"
    lhs: tuple[str, str]  # (family, measure key)
    rhs: tuple[str, str] | None
    time: float
    bracket: tuple[float, float]
    residual: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lhs": list(self.lhs),
            "rhs": None if self.rhs is None else list(self.rhs),
            "time": self.time,
            "bracket": list(self.bracket),
            "residual": self.residual,
        }


@dataclass(frozen=True)
class OrderingRow:
    """One row of an interval ordering table: an open interval (lo, hi), or
    a boundary point when lo == hi, with families grouped strongest-first."""

    lo: float
    hi: float
    groups: tuple[tuple[str, ...], ...]
    label: str

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def as_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "point": self.is_point,
            "groups": [list(g) for g in self.groups],
            "label": self.label,
        }


@dataclass(frozen=True)
class WitnessReport:
    """Comparison of the evolved X and Y states at one time."""

    time: float
    x: MeasureSet
    y: MeasureSet
    pattern: str  # "a" | "b" | "c" | "degenerate" | "other"
    description: str

    def as_dict(self) -> dict:
        return {
            "time": self.time,
            "x": self.x.as_dict(),
            "y": self.y.as_dict(),
            "pattern": self.pattern,
            "description": self.description,
        }


@dataclass
class ScanTable:
    """Uniform time grid with one MeasureSet per (time, label)."""

    times: np.ndarray
    labels: list[str]
    p_values: dict[str, float]
    rows: dict[str, list[MeasureSet]]
    events: list[CrossingEvent] = field(default_factory=list)
    oracle_dev: dict[str, list[float]] | None = None

    def to_csv(self, header_comment: str | None = None) -> str:
        lines = []
        if header_comment:
            lines.append("# " + header_comment)
        header = "t,family,p,m,b,c,ef,n,logn"
        if self.oracle_dev is not None:
            header += ",oracle_dev"
        lines.append(header)
        for i, t in enumerate(self.times):
            for label in self.labels:
                ms = self.rows[label][i]
                row = f"{format_value(float(t))},{label},{format_value(self.p_values[label])},"
                row += csv_row(float(t), ms).split(",", 1)[1]
                if self.oracle_dev is not None:
                    row += "," + format_value(self.oracle_dev[label][i])
                lines.append(row)
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        obj = {
            "times": [float(t) for t in self.times],
            "labels": list(self.labels),
            "p": {k: self.p_values[k] for k in self.labels},
            "rows": {k: [ms.as_dict() for ms in self.rows[k]] for k in self.labels},
            "events": [e.as_dict() for e in self.events],
        }
        if self.oracle_dev is not None:
            obj["oracle_dev"] = {k: list(v) for k, v in self.oracle_dev.items()}
        return obj


def _require_quiet(profile: DampingProfile) -> None:
    if not profile.quiet:
        raise ValueError("event detection requires quiet reservoirs (nbar1 = nbar2 = 0)")


def _curve(family: str, measure: str, p: float, profile: DampingProfile):
    """Measure of the evolved Werner state as a plain function of time."""
    fn = _MEASURE_FUNS[normalize_measure_key(measure)]
    rho0 = werner(WernerSpec(family, p))

    def value(t: float) -> float:
        return fn(analytic_evolve(rho0, channel_factors(profile, t)))

    return value


def _grid_states(rho0, profile, times, dt, force_oracle):
    if profile.quiet and not force_oracle:
        return [analytic_evolve(rho0, channel_factors(profile, float(t))) for t in times]
    # march the integrator from grid point to grid point so the total cost
    # stays O(tmax / dt)
    states = []
    current = validate(rho0)
    prev_t = 0.0
    for t in times:
        t = float(t)
        if t > prev_t:
            segment = t - prev_t
            current = integrate(current, profile, segment, dt=min(dt, segment))
            prev_t = t
        states.append(current)
    return states


def scan_states(
    labeled_states,
    profile: DampingProfile,
    tmax: float,
    steps: int,
    dt: float = 1e-3,
    both: bool = False,
    force_oracle: bool = False,
) -> ScanTable:
    """Measure bundles over a uniform grid for arbitrary initial states.

    ``labeled_states`` is a sequence of (label, p, rho0) triples. Quiet
    profiles evolve through the exact channel unless ``force_oracle`` routes
    them through the integrator; thermal profiles always integrate. ``both``
    additionally records the maximum entry deviation between the two
    evolution routes (quiet profiles only).
    """
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps!r}")
    if tmax <= 0.0:
        raise ValueError(f"tmax must be positive, got {tmax!r}")
    if both and (not profile.quiet or force_oracle):
        raise ValueError("route comparison needs a quiet profile on the exact route")
    times = np.linspace(0.0, tmax, steps)
    labels: list[str] = []
    p_values: dict[str, float] = {}
    rows: dict[str, list[MeasureSet]] = {}
    devs: dict[str, list[float]] | None = {} if both else None
    for label, p, rho0 in labeled_states:
        if label in rows:
            raise ValueError(f"duplicate scan label {label!r}")
        states = _grid_states(rho0, profile, times, dt, force_oracle=force_oracle)
        if both:
            oracle = _grid_states(rho0, profile, times, dt, force_oracle=True)
            devs[label] = [float(np.abs(a - b).max()) for a, b in zip(states, oracle)]
        rows[label] = [measure_all(s) for s in states]
        labels.append(label)
        p_values[label] = float(p)
    return ScanTable(times, labels, p_values, rows, [], devs)


def scan(
    specs,
    profile: DampingProfile,
    tmax: float,
    steps: int,
    dt: float = 1e-3,
    both: bool = False,
) -> ScanTable:
    """Measure bundles of Werner states over a uniform time grid."""
    labeled = [(spec.family, spec.p, werner(spec)) for spec in specs]
    return scan_states(labeled, profile, tmax, steps, dt=dt, both=both)


def _bisect(predicate_left, lo: float, hi: float) -> tuple[float, float]:
    """Shrink [lo, hi] while ``predicate_left`` holds at lo and not at hi."""
    while hi - lo > BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        if predicate_left(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def vanish_time(
    family: str,
    measure: str,
    p: float,
    profile: DampingProfile,
    tmax: float = 20.0,
    step: float = DEFAULT_SCAN_STEP,
) -> CrossingEvent | None:
    """First time the measure reaches zero, or None if it stays positive
    through ``tmax``.

    Raises NotPositiveAtStart when the measure is already zero at t = 0.
    """
    _require_quiet(profile)
    key = normalize_measure_key(measure)
    value = _curve(family, key, p, profile)
    v0 = value(0.0)
    if v0 <= ZERO_EPS:
        raise NotPositiveAtStart(
            f"{key.upper()} of family {family} at p={p!r} starts at {v0!r}"
        )
    ts = np.arange(0.0, tmax + 0.5 * step, step)
    prev_t, prev_v = 0.0, v0
    for t in ts[1:]:
        t = float(t)
        v = value(t)
        if prev_v > ZERO_EPS and v <= ZERO_EPS:
            lo, hi = _bisect(lambda x: value(x) > ZERO_EPS, prev_t, t)
            hit = 0.5 * (lo + hi)
            return CrossingEvent("vanish", (family, key), None, hit, (lo, hi), value(hit))
        prev_t, prev_v = t, v
    return None


def _sign_change_events(sample_ts, sample_vals, diff_fn, lhs, rhs):
    """Crossing events from pre-sampled difference values.

    Samples with |value| <= ZERO_EPS are skipped, so a transversal crossing
    is bracketed by the nearest decisively-signed samples on either side.
    """
    events = []
    prev = None
    for t, d in zip(sample_ts, sample_vals):
        t, d = float(t), float(d)
        if abs(d) <= ZERO_EPS:
            continue
        if prev is not None and (prev[1] > 0.0) != (d > 0.0):
            left_positive = prev[1] > 0.0

            def on_left_side(x, left_positive=left_positive):
                dx = diff_fn(x)
                return dx != 0.0 and (dx > 0.0) == left_positive

            lo, hi = _bisect(on_left_side, prev[0], t)
            hit = 0.5 * (lo + hi)
            events.append(
                CrossingEvent("cross", lhs, rhs, hit, (lo, hi), abs(diff_fn(hit)))
            )
        prev = (t, d)
    return events


def crossing_times(
    lhs_family: str,
    rhs_family: str,
    measure: str,
    p: float,
    profile: DampingProfile,
    tmax: float,
    step: float = DEFAULT_SCAN_STEP,
) -> list[CrossingEvent]:
    """All zeros of the pairwise measure difference in (0, tmax].

    t = 0 is excluded: every family starts from the same values there, so
    the structural tie is not an ordering change.
    """
    _require_quiet(profile)
    key = normalize_measure_key(measure)
    left = _curve(lhs_family, key, p, profile)
    right = _curve(rhs_family, key, p, profile)

    def diff(t: float) -> float:
        return left(t) - right(t)

    ts = np.arange(step, tmax + 0.5 * step, step)
    vals = [diff(float(t)) for t in ts]
    return _sign_change_events(ts, vals, diff, (lhs_family, key), (rhs_family, key))


def _groups_at(values: dict[str, float]) -> tuple[tuple[str, ...], ...]:
    """Families sorted by value descending, ties (within TIE_TOL) grouped."""
    ordered = sorted(values, key=lambda f: (-values[f], f))
    groups: list[list[str]] = []
    for fam in ordered:
        if groups and values[groups[-1][0]] - values[fam] <= TIE_TOL:
            groups[-1].append(fam)
        else:
            groups.append([fam])
    return tuple(tuple(sorted(g)) for g in groups)


def _groups_label(key: str, groups) -> str:
    if len(groups) == 1:
        return "all equal"
    name = key.upper()
    return " > ".join(" = ".join(f"{name}_{fam}" for fam in group) for group in groups)


def ordering_table(
    p: float,
    profile: DampingProfile,
    tmax: float,
    measure: str = "n",
    step: float = DEFAULT_SCAN_STEP,
) -> list[OrderingRow]:
    """Partition (0, tmax) by the pairwise crossings of the three families'
    measure curves (negativity by default) and label each piece.

    Open intervals carry the strict ordering sampled at their midpoint;
    boundary rows are inserted at each crossing time and show the tie.
    Identically-equal curves collapse to a single "all equal" row.
    """
    _require_quiet(profile)
    key = normalize_measure_key(measure)
    curves = {fam: _curve(fam, key, p, profile) for fam in FAMILIES}
    ts = np.arange(step, tmax, step)
    sampled = {fam: np.array([curves[fam](float(t)) for t in ts]) for fam in FAMILIES}

    events: list[CrossingEvent] = []
    for fa, fb in (("X", "Y"), ("X", "Z"), ("Y", "Z")):
        def diff(t, fa=fa, fb=fb):
            return curves[fa](t) - curves[fb](t)

        events.extend(
            _sign_change_events(ts, sampled[fa] - sampled[fb], diff, (fa, key), (fb, key))
        )
    events.sort(key=lambda e: e.time)

    boundaries: list[float] = []
    for event in events:
        if not boundaries or event.time - boundaries[-1] > 1e-8:
            boundaries.append(event.time)

    edges = [0.0, *boundaries, float(tmax)]
    rows: list[OrderingRow] = []
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        mid = 0.5 * (lo + hi)
        groups = _groups_at({fam: curves[fam](mid) for fam in FAMILIES})
        rows.append(OrderingRow(lo, hi, groups, _groups_label(key, groups)))
        if i + 1 < len(edges) - 1:
            at = edges[i + 1]
            groups = _groups_at({fam: curves[fam](at) for fam in FAMILIES})
            rows.append(OrderingRow(at, at, groups, _groups_label(key, groups)))
    return rows


def _rel(diff: float) -> str:
    if abs(diff) <= TIE_TOL:
        return "="
    return "<" if diff < 0.0 else ">"


def relativity_witness(p: float, profile: DampingProfile, t: float) -> WitnessReport:
    """Compare the evolved X and Y states at time t.

    Patterns: "a" = equal Bell degree with concurrence and negativity
    ordered oppositely; "b" = equal Bell degree with both measures ordered
    the same way; "c" = equal Bell degree and equal negativity but strictly
    ordered concurrence; "degenerate" = everything ties.
    """
    _require_quiet(profile)
    factors = channel_factors(profile, t)
    x = measure_all(analytic_evolve(werner(WernerSpec("X", p)), factors))
    y = measure_all(analytic_evolve(werner(WernerSpec("Y", p)), factors))
    db, dc, dn = x.b - y.b, x.c - y.c, x.n - y.n

    if abs(db) > TIE_TOL:
        pattern = "other"
    elif abs(dn) <= TIE_TOL and abs(dc) <= TIE_TOL:
        pattern = "degenerate"
    elif abs(dn) <= TIE_TOL:
        pattern = "c"
    elif abs(dc) <= TIE_TOL:
        pattern = "other"
    elif dc * dn < 0.0:
        pattern = "a"
    else:
        pattern = "b"

    description = (
        f"B_X {_rel(db)} B_Y, C_X {_rel(dc)} C_Y, N_X {_rel(dn)} N_Y"
    )
    return WitnessReport(float(t), x, y, pattern, description)


def events_to_json(events) -> list[dict]:
    return [e.as_dict() for e in events]


def rows_to_json(rows) -> list[dict]:
    return [r.as_dict() for r in rows]
