"""Symmetric vs asymmetric first-order methods on quadratic saddle problems."""
from .bench import ExperimentConfig, emit_report, run_experiment
from .conformal import (
    HalfDiscRegion,
    green_halfdisc,
    green_normal_derivative_at_zero,
    phi_omega,
    scsc_lower_rate,
    scsc_upper_rate,
)
from .extremal import (
    BoundaryMesh,
    ExtremalPolynomial,
    MinimaxCertificate,
    bernstein_margin,
    build_mesh,
    dual_measure,
    minimax_P,
    minimax_Q,
    symmetrize_polynomial,
)
from .poly import ChebyshevSpec, NormalizationClass, Polynomial, cheb_at_zero_scsc, cheb_roots, from_roots
from .problems import (
    QuadraticSaddleProblem,
    SpectralMeasure,
    SpectralSet,
    hard_instance,
    make_problem,
    random_instance,
)
from .solvers import (
    StepSchedule,
    Trajectory,
    run_gda,
    run_symmetric_baseline,
    slingshot_cc_schedule,
    slingshot_scsc_schedule,
)

__version__ = "0.1.0"
