"""Elliptic functions on C/<1, tau> and the elliptic Calogero-Moser system."""

from .cm import (
    CMState,
    CMTrajectory,
    CollisionError,
    FitError,
    FlowError,
    cm_flow,
    cm_hamiltonians,
    cm_lax,
    h2_direct,
    trace_power_constant,
)
from .functions import (
    LatticePoleError,
    Torus,
    lame_hermite,
    reduce_to_cell,
    theta,
    theta_periodic,
    theta_prime,
    theta_prime0,
    wp,
    wp_direct,
    wp_invariants,
    wp_prime,
)

__all__ = [
    "CMState",
    "CMTrajectory",
    "CollisionError",
    "FitError",
    "FlowError",
    "LatticePoleError",
    "Torus",
    "cm_flow",
    "cm_hamiltonians",
    "cm_lax",
    "h2_direct",
    "lame_hermite",
    "reduce_to_cell",
    "theta",
    "theta_periodic",
    "theta_prime",
    "theta_prime0",
    "trace_power_constant",
    "wp",
    "wp_direct",
    "wp_invariants",
    "wp_prime",
]
