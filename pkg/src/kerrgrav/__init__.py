"""Quantum-limited estimation of the Schwarzschild radius with a Kerr Mach–Zehnder interferometer."""

from .bounds import (
    BoundMethod,
    BoundResult,
    QfiResult,
    QfiSource,
    cr_bound_rs,
    cr_bound_rs_general_q,
    cr_bound_tau,
    fidelity_second_order,
    overlap_second_order,
    qfi_general_q,
    qfi_kerr,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    EstimationError,
    HorizonError,
    KerrGravError,
    TruncationError,
    ValidityError,
)
from .fock import (
    FockState,
    KerrVariant,
    Probe,
    StepPolicy,
    coherent_state,
    default_cutoff,
    fidelity,
    kerr_evolve,
    numeric_qfi,
    overlap,
)
from .geometry import (
    ArmTimes,
    Geometry,
    arm_proper_times,
    dilation_parameter,
    dtau2_drs,
    earth_geometry,
    linear_phase_phi24,
    proper_time_ratio,
)
from .interferometer import (
    DerivedPhases,
    MeasurementPlan,
    SqueezedProbe,
    derived_phases,
    mean_derivative_rs,
    mean_quadrature,
    monte_carlo_estimate,
    noise_penalty_db,
    optimal_plan,
    optimal_settings,
    quadrature_bound_rs,
    quadrature_variance,
    sql_bound_rs,
    squeezed_lossy_bound,
)
from .runner import (
    FeasibilityInput,
    SweepSpec,
    chi_from_material,
    peak_power,
    report_improvement,
    run_sweep,
    y_tilde,
)

__version__ = "0.1.0"
