"""Exact solution families and numerical validation for the semi-discrete
Gardner lattice under non-vanishing far fields.

The package builds soliton, double-pole and kink fields from reflectionless
scattering data, evolves the lattice equation numerically as an independent
check, and measures collision properties (taxonomy, phase shifts, rogue-wave
amplification).
"""

from .errors import (
    FrontWindowError,
    GardnerError,
    NonFiniteStateError,
    RegimeError,
    SingularPointError,
    SingularSystemError,
)
from .models import LatticeTrajectory, SolutionModel
from .spectral import (
    GardnerParams,
    UniformizedPoint,
    evolve_double_pole_norming,
    evolve_norming,
    kappa_pair,
    kink_velocity,
    kink_velocity_reduced,
    omega_pair,
    omega_pair_derivatives,
    positive_speed_threshold,
    soliton_velocity,
    uniformize,
)
from .symmetric import (
    DoublePoleSpec,
    PhaseShift,
    SolitonSpec,
    TraceDerivatives,
    double_pole_model,
    double_pole_solution,
    multi_soliton,
    multi_soliton_model,
    one_soliton,
    one_soliton_model,
    phase_shifts,
    trace_formulas,
    two_soliton_closed_form,
    two_soliton_model,
)
from .steplike import (
    KinkSpec,
    StepBoundary,
    front_velocity,
    kink_front_position,
    kink_model,
    kink_solution,
    theta_condition_check,
)
from .lattice import (
    LatticeState,
    integrate,
    ode_residual,
    rhs,
    zero_curvature_max,
    zero_curvature_residual,
)
from .analysis import (
    CollisionReport,
    Peak,
    classify_collision,
    find_peaks,
    measure_interaction,
    region_label,
    region_map,
    track_peaks,
)

__version__ = "0.1.0"
