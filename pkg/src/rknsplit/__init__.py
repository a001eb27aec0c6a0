"""Eighth-order drift/kick splitting integrators and benchmark harness."""

from .errors import (
    CoefficientParseError,
    CollisionSingularity,
    DegenerateFit,
    EccentricityOutOfRange,
    ForceSingularity,
    InconsistentScheme,
    InsufficientData,
    NonIntegerStepCount,
    RknSplitError,
    UnknownScheme,
    UnsupportedLevel,
)
from .extrapolation import (
    ExtrapolationTableau,
    extrapolated_step,
    integrate_extrapolated,
    tableau,
)
from .linear_flows import LinearDrift, expm
from .schemes import (
    EIGHTH_ORDER_NAMES,
    SCHEME_NAMES,
    FlowKind,
    FlowSchedule,
    SchemeCoefficients,
    SchemeKind,
    build_scheme,
    coefficient_norms,
    delta_argmax,
    encode,
    load_external,
    ss_composition,
    unfold,
)
from .stepping import (
    EnergyErrorObserver,
    IntegrationResult,
    SecondOrderSystem,
    State,
    StepStats,
    flow_drift,
    flow_kick,
    integrate,
    ss_schedule,
    ss_step,
    step,
    symplecticity_defect,
    time_symmetry_defect,
)

__version__ = "0.1.0"
