"""Time-optimal navigation on spheroids under mild stationary winds.

Computes geodesics of the induced metric h, of the Riemannian part
alpha of the travel-time metric, and of the full Randers metric F
(whose geodesics are the time-optimal paths), together with the control
channel along them: heading, course over ground, drift and resulting
speed.

All evaluation is pure (no shared mutable state), so everything here is
safe to call concurrently; integrate_family runs fan members on a
thread pool capped by ZNAV_THREADS.
"""
from znav.control import (
    ControlRecord,
    control_channel,
    course_of,
    drift_of,
    heading_of,
    initial_speed_vs_heading,
    initial_state_alpha,
    initial_state_randers,
    initial_state_riemannian,
    speed_of,
    wrap_2pi,
    wrap_signed,
)
from znav.errors import (
    DegenerateHessian,
    EmptyData,
    NavigationError,
    NotMild,
    PoleSingularity,
    StepFailure,
    ZeroRelativeVelocity,
    ZeroVelocity,
)
from znav.export import (
    CSV_COLUMNS,
    PlotSpec,
    SeriesStyle,
    render_svg,
    unwrap_angles,
    write_csv,
    write_svg,
)
from znav.integrate import (
    FamilyMember,
    IntegratorConfig,
    Trajectory,
    classify_path,
    integrate,
    integrate_family,
)
from znav.randers import (
    F_rotation_closed,
    F_value,
    RandersData,
    alpha_term,
    beta_term,
    indicatrix,
    lagrangian,
)
from znav.spheroid import (
    POLE_GUARD,
    NavState,
    Spheroid,
    SurfacePoint,
    TangentVector,
    christoffels,
    clairaut_invariant,
    embed,
    h_norm,
    metric_components,
    riemannian_rhs,
    unit_heading_vector,
)
from znav.spray import (
    SprayCoefficients,
    alpha_lagrangian,
    geodesic_rhs,
    make_rhs,
    randers_lagrangian,
    spray_alpha_closed,
    spray_numeric,
    spray_rotation_closed,
)
from znav.wind import (
    MildnessReport,
    WindField,
    custom_wind,
    rotation_wind,
    validate_mild,
    wind_norm,
)

__version__ = "0.1.0"
