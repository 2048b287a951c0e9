"""Rotation kinematics as a dynamical system: evolve the Euler rotation
axis/angle (and related vector parameterizations) under a time-dependent
angular velocity, with exact constant-omega solutions and trajectory
diagnostics."""

from .errors import (
    AxisUndefinedError,
    BoundarySingularityError,
    EulerSpinError,
    GibbsOverflowError,
    GibbsSingularityError,
    NotDifferentiableError,
    OmegaRangeError,
    ParallelAxisError,
    ParityUndeterminedError,
    PeriodTooSmallError,
    SchemaError,
    SeriesTooShortError,
    ThetaRangeError,
    TooManySamplesError,
)
from .rotation_core import (
    AxisAngle,
    EULER_REP,
    GIBBS_REP,
    GeneralizedRep,
    MODIFIED_GIBBS_REP,
    REPRESENTATIONS,
    UnitQuaternion,
    axis_angle_to_euler_vector,
    axis_angle_to_gibbs,
    axis_angle_to_modified_gibbs,
    axis_angle_to_quaternion,
    compose_rotations,
    convert,
    euler_vector_restart,
    euler_vector_to_axis_angle,
    gibbs_identity_residual,
    gibbs_to_axis_angle,
    matrix_from_axis_angle,
    modified_gibbs_to_axis_angle,
    quaternion_to_axis_angle,
    rotate_point,
    unit,
)
from .omega_models import (
    CallableOmega,
    ConstantOmega,
    OmegaModel,
    PathologicalOmega,
    ReversedOmega,
    RotatingPlaneOmega,
    TabulatedOmega,
    arc_time,
    integrated_omega,
    omega_derivatives,
    omega_eval,
)
from .dynamics import (
    ContinuationRecord,
    Trajectory,
    continue_axis_angle,
    divergence_gibbs,
    integrate,
    integrate_rotation_matrix,
    load_trajectory_csv,
    rhs_axis_angle,
    rhs_euler_vector,
    rhs_generalized,
    rhs_gibbs,
    rhs_quaternion,
    save_trajectory_csv,
    trajectory_to_matrices,
)
from .closed_form import (
    SpinorSolution,
    exact_propagate,
    spinor_axis,
    spinor_params,
    spinor_theta,
)
from .analysis import (
    LyapunovEstimate,
    RecurrenceMatrix,
    Spectrum,
    StrobeSeries,
    detect_peaks,
    lyapunov_spectrum,
    min_pairwise_distance,
    power_spectrum,
    recurrence,
    strobe,
)

__version__ = "0.1.0"
