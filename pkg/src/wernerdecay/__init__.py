"""Two-qubit open-system toolkit for decaying Werner states.

Builds the three Werner families, evolves them under independent
amplitude-damping reservoirs (exact channel map plus an RK4 master-equation
integrator as a cross-checking oracle), and computes the Bell-violation
degree, concurrence, entanglement of formation and negativity, together
with the closed-form decay laws, sudden-death and crossing times, and
interval ordering tables.
"""

from .analysis import (
    CrossingEvent,
    OrderingRow,
    ScanTable,
    WitnessReport,
    crossing_times,
    ordering_table,
    relativity_witness,
    scan,
    scan_states,
    vanish_time,
)
from .closedform import (
    biv_closed,
    concurrence_closed,
    has_closed_form,
    negativity_closed,
    shorttime_coeffs,
)
from .config import (
    reset_validation_tolerance,
    set_validation_tolerance,
    validation_tolerance,
)
from .dynamics import (
    ChannelFactors,
    DampingProfile,
    analytic_evolve,
    channel_factors,
    integrate,
    lindblad_rhs,
    lindblad_superoperator,
)
from .errors import (
    ConfigError,
    NegativeEigenvalue,
    NoConvergence,
    NotHermitian,
    NotPSD,
    NotPositiveAtStart,
    OutOfDomain,
    TraceNotOne,
    Unsupported,
    ValidationFailure,
    WernerDecayError,
)
from .matkit import HermitianEigenResult, hermitian_eigen, kron, psd_sqrt
from .measures import (
    MeasureSet,
    biv_degree,
    binary_entropy,
    concurrence,
    entanglement_of_formation,
    horodecki_m,
    log_negativity,
    measure_all,
    negativity,
    partial_transpose,
    spin_flip,
)
from .states import (
    FAMILIES,
    HilbertSchmidtDecomp,
    WernerSpec,
    bell_state,
    bell_vector,
    from_json_dict,
    hs_assemble,
    hs_decompose,
    to_json_dict,
    validate,
    werner,
)

__version__ = "0.1.0"

__all__ = [
    "CrossingEvent", "OrderingRow", "ScanTable", "WitnessReport",
    "crossing_times", "ordering_table", "relativity_witness", "scan",
    "scan_states", "vanish_time",
    "biv_closed", "concurrence_closed", "has_closed_form",
    "negativity_closed", "shorttime_coeffs",
    "reset_validation_tolerance", "set_validation_tolerance",
    "validation_tolerance",
    "ChannelFactors", "DampingProfile", "analytic_evolve", "channel_factors",
    "integrate", "lindblad_rhs", "lindblad_superoperator",
    "ConfigError", "NegativeEigenvalue", "NoConvergence", "NotHermitian",
    "NotPSD", "NotPositiveAtStart", "OutOfDomain", "TraceNotOne",
    "Unsupported", "ValidationFailure", "WernerDecayError",
    "HermitianEigenResult", "hermitian_eigen", "kron", "psd_sqrt",
    "MeasureSet", "biv_degree", "binary_entropy", "concurrence",
    "entanglement_of_formation", "horodecki_m", "log_negativity",
    "measure_all", "negativity", "partial_transpose", "spin_flip",
    "FAMILIES", "HilbertSchmidtDecomp", "WernerSpec", "bell_state",
    "bell_vector", "from_json_dict", "hs_assemble", "hs_decompose",
    "to_json_dict", "validate", "werner",
]
