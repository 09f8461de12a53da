"""Frenet frames, tangent indicatrices, and direction curves of space curves."""

from .curves import (
    ArcLengthTable,
    Curve3,
    CurvatureProfile,
    FrenetApparatus,
    FrenetSamples,
    TabulatedCurve3,
    arclength_table,
    curvature_profile,
    frenet_apparatus,
    frenet_samples,
    reparametrize_by_arclength,
)
from .direction import (
    DirectionCoefficients,
    DirectionCurve,
    DirectionKind,
    ResidualReport,
    coefficients,
    direction_field,
    integrate_direction_curve,
    predicted_curvatures,
    recover_donor_curvatures,
    residual_check,
)
from .errors import (
    DegenerateError,
    DegenerateFrameError,
    DegenerateSpeedError,
    DomainError,
    EvaluationError,
    ExpressionError,
    FrenetLabError,
)
from .indicatrix import (
    IndicatrixApparatus,
    IndicatrixTable,
    build_indicatrix_table,
    indicatrix_apparatus,
    tangent_indicatrix,
)
from .numerics import (
    CumulativeTable,
    Grid,
    central_difference,
    constancy_score,
    cumulative_simpson,
    invert_monotone,
)

__version__ = "0.1.0"
