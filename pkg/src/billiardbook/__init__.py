"""Integrable circular billiards with a repelling Hooke potential on billiard books."""

from .dynamics import (
    TrajectorySegment,
    flow_free,
    reflect,
    sample_segment,
    segment_min_radius,
    simulate,
    time_to_boundary,
)
from .linearization import (
    PencilSpectrum,
    SpectrumClass,
    certify_focus_focus,
    linearization_operators,
    pencil_eigenvalues,
)
from .model import (
    BookTable,
    ConvergenceError,
    MomentumValue,
    PhaseState,
    ValidationError,
    validate_table,
)
from .momentum import (
    BifurcationDiagram,
    FiberClass,
    FiberTag,
    annulus,
    bifurcation_diagram,
    classify_fiber,
    critical_point_residual,
    gradients,
    in_image,
    inner_radius,
    momentum_map,
)
from .monodromy import (
    MoleculeLabels,
    MonodromyReport,
    PeriodSample,
    boundary_state,
    continue_theta,
    loop_around_origin,
    molecule_labels,
    radial_period_quadrature,
    radial_period_simulated,
    theta_center_limit,
)

__version__ = "0.1.0"

__all__ = [
    "BifurcationDiagram",
    "BookTable",
    "ConvergenceError",
    "FiberClass",
    "FiberTag",
    "MoleculeLabels",
    "MomentumValue",
    "MonodromyReport",
    "PencilSpectrum",
    "PeriodSample",
    "PhaseState",
    "SpectrumClass",
    "TrajectorySegment",
    "ValidationError",
    "annulus",
    "bifurcation_diagram",
    "boundary_state",
    "certify_focus_focus",
    "classify_fiber",
    "continue_theta",
    "critical_point_residual",
    "flow_free",
    "gradients",
    "in_image",
    "inner_radius",
    "linearization_operators",
    "loop_around_origin",
    "molecule_labels",
    "momentum_map",
    "pencil_eigenvalues",
    "radial_period_quadrature",
    "radial_period_simulated",
    "reflect",
    "sample_segment",
    "segment_min_radius",
    "simulate",
    "theta_center_limit",
    "time_to_boundary",
    "validate_table",
]
