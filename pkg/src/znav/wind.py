"""Stationary wind fields on the spheroid.

A wind is a tangent vector field W = W1 d/dphi + W2 d/dtheta given by
closed-form component functions of (phi, theta).  The engine requires
the wind to be mild, |W|_h < 1 everywhere: the craft's unit own speed
must dominate the flow for time-optimal paths to exist in every
direction.
"""
import math
from dataclasses import dataclass
from typing import Callable

from znav.errors import NotMild
from znav.spheroid import POLE_GUARD, Spheroid, SurfacePoint, metric_components

ComponentFn = Callable[[float, float], tuple[float, float]]


@dataclass(frozen=True)
class WindField:
    """Stationary vector field in the coordinate basis (d/dphi, d/dtheta).

    components maps (phi, theta) to (W1, W2).  For rotation fields the
    angular rate is kept in c and components is (-c, 0) everywhere.
    """

    components: ComponentFn
    kind: str = "custom"
    c: float | None = None

    def at(self, point: SurfacePoint) -> tuple[float, float]:
        return self.components(point.phi, point.theta)


def rotation_wind(c: float) -> WindField:
    """Rigid rotation about the polar axis with angular rate c.

    In chart components W = (-c, 0), with norm |W|_h = |c| sin(theta),
    so mildness is exactly |c| < 1.

    Raises:
        NotMild: |c| >= 1.
    """
    if abs(c) >= 1.0:
        raise NotMild(f"rotation rate {c} gives |W|_h = {abs(c)} at the equator", norm=abs(c))
    return WindField(components=lambda phi, theta: (-c, 0.0), kind="rotation", c=c)


def custom_wind(components: ComponentFn) -> WindField:
    """Wrap closed-form component functions (phi, theta) -> (W1, W2)."""
    return WindField(components=components, kind="custom")


def wind_norm(sph: Spheroid, wind: WindField, point: SurfacePoint) -> float:
    """h-norm of the wind at a point: sqrt((W1)^2 h11 + (W2)^2 h22)."""
    w1, w2 = wind.at(point)
    h11, h22 = metric_components(sph, point.theta)
    return math.sqrt(w1 * w1 * h11 + w2 * w2 * h22)


@dataclass(frozen=True)
class MildnessReport:
    """Outcome of a mildness sweep: the largest sampled norm and where."""

    max_norm: float
    worst_point: SurfacePoint
    grid_n: int


def validate_mild(sph: Spheroid, wind: WindField, grid_n: int = 256) -> MildnessReport:
    """Sample |W|_h on a grid_n x grid_n lattice and check |W|_h < 1.

    The lattice covers phi in [0, 2*pi] and theta in the chart band
    [POLE_GUARD, pi - POLE_GUARD], both with grid_n - 1 intervals, so a
    refinement 2*grid_n - 1 samples a superset of the coarser points.
    Sampling cannot prove mildness for adversarial fields, but suffices
    for the analytic winds in scope.

    Raises:
        NotMild: first sampled point with norm >= 1 - 1e-12.
        ValueError: grid_n < 2.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    max_norm = -1.0
    worst = SurfacePoint(0.0, math.pi / 2)
    for i in range(grid_n):
        phi = 2.0 * math.pi * i / (grid_n - 1)
        for j in range(grid_n):
            theta = POLE_GUARD + (math.pi - 2.0 * POLE_GUARD) * j / (grid_n - 1)
            p = SurfacePoint(phi, theta)
            norm = wind_norm(sph, wind, p)
            if norm >= 1.0 - 1e-12:
                raise NotMild(
                    f"|W|_h = {norm} at (phi={phi}, theta={theta})", point=p, norm=norm
                )
            if norm > max_norm:
                max_norm, worst = norm, p
    return MildnessReport(max_norm=max_norm, worst_point=worst, grid_n=grid_n)
