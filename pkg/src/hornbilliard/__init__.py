"""Billiard trajectories in a horn: simulation, diagnostics and continuum limit."""

from .continuum import OdeState, integrate, invariant, ode_rhs, rate_formulas, round_trip_measure, shadow_compare
from .diagnostics import (
    angular_momentum,
    angular_velocity_series,
    invariant_series,
    lemma_check,
    small_angle_identity_check,
    theta_report,
)
from .dynamics import (
    CollisionEvent,
    ParticleState,
    StopConditions,
    Termination,
    TrajectoryRecord,
    launch_state,
    next_collision,
    reflect,
    simulate,
    step,
)
from .geometry import (
    BoundarySample,
    GeometryError,
    HornGeometry,
    Vec2,
    arc_distance_to_cusp,
    boundary_point,
    build_horn,
    contains,
    theta_of,
    width_at,
)

__version__ = "0.1.0"
