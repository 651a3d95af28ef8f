"""Geometry of the spheroid with semiaxes (1, 1, a).

The surface is charted by spherical coordinates (phi, theta): azimuth
phi and colatitude theta, with embedding

    x = sin(theta) cos(phi),  y = sin(theta) sin(phi),  z = a cos(theta).

The induced metric is diagonal,

    h11 = sin^2(theta),  h22 = cos^2(theta) + a^2 sin^2(theta),

and everything downstream (wind norms, Randers metrics, geodesic
equations) is built on these two components.  The chart degenerates at
the poles; operations that divide by sin(theta) enforce a guard band of
POLE_GUARD radians around theta in {0, pi}.
"""
import math
from dataclasses import dataclass

from znav.errors import PoleSingularity

# Chart guard band around the poles (radians).
POLE_GUARD = 1e-6


@dataclass(frozen=True)
class Spheroid:
    """Ellipsoid of revolution with semiaxes (1, 1, a).

    Oblate for 0 < a < 1, prolate for a > 1, round sphere for a = 1.
    The equatorial radius is fixed to 1; physical rescaling is the
    caller's concern.
    """

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"shape parameter a must be positive, got {self.a}")


@dataclass(frozen=True)
class SurfacePoint:
    """Chart point: azimuth phi (radians), colatitude theta (radians).

    phi is kept unwrapped internally so winding counts survive long
    integrations; wrapping to [0, 2*pi) happens only at export.
    """

    phi: float
    theta: float


@dataclass(frozen=True)
class TangentVector:
    """Coordinate-basis tangent vector: u = d(phi)/dt, v = d(theta)/dt."""

    u: float
    v: float


@dataclass(frozen=True)
class NavState:
    """Position plus angular velocity; the geodesic ODE state."""

    point: SurfacePoint
    vel: TangentVector


def require_off_pole(theta: float, eps: float = POLE_GUARD) -> None:
    """Raise PoleSingularity unless theta lies in (eps, pi - eps)."""
    if not (eps < theta < math.pi - eps):
        raise PoleSingularity(
            f"colatitude {theta} within {eps} of a pole; chart undefined"
        )


def metric_components(sph: Spheroid, theta: float) -> tuple[float, float]:
    """Diagonal components (h11, h22) of the induced metric at colatitude theta."""
    s = math.sin(theta)
    c = math.cos(theta)
    return s * s, c * c + sph.a * sph.a * s * s


def h_norm(sph: Spheroid, point: SurfacePoint, vec: TangentVector) -> float:
    """Length of a tangent vector in the induced metric."""
    h11, h22 = metric_components(sph, point.theta)
    return math.sqrt(vec.u * vec.u * h11 + vec.v * vec.v * h22)


def christoffels(sph: Spheroid, theta: float) -> tuple[float, float, float]:
    """Nonzero Christoffel symbols (second kind) at colatitude theta.

    Returns (G1_12, G2_11, G2_22):

        G1_12 = cot(theta)
        G2_11 = -sin(theta) cos(theta) / (a^2 sin^2 + cos^2)
        G2_22 = (a^2 - 1) sin(theta) cos(theta) / (a^2 sin^2 + cos^2)

    Raises:
        PoleSingularity: theta inside the polar guard band.
    """
    require_off_pole(theta)
    s = math.sin(theta)
    c = math.cos(theta)
    h22 = c * c + sph.a * sph.a * s * s
    sc = s * c
    return c / s, -sc / h22, (sph.a * sph.a - 1.0) * sc / h22


def riemannian_rhs(sph: Spheroid, state: NavState) -> tuple[float, float]:
    """Accelerations (phi_dd, theta_dd) of the induced-metric geodesic flow.

        phi_dd   = -2 u v cot(theta)
        theta_dd = -sin cos [ (a^2 - 1) v^2 - u^2 ] / (a^2 sin^2 + cos^2)

    Raises:
        PoleSingularity: theta inside the polar guard band.
    """
    g112, g211, g222 = christoffels(sph, state.point.theta)
    u, v = state.vel.u, state.vel.v
    return -2.0 * g112 * u * v, -(g211 * u * u + g222 * v * v)


def embed(sph: Spheroid, point: SurfacePoint) -> tuple[float, float, float]:
    """Cartesian coordinates of a chart point on the embedded surface."""
    s = math.sin(point.theta)
    return s * math.cos(point.phi), s * math.sin(point.phi), sph.a * math.cos(point.theta)


def clairaut_invariant(sph: Spheroid, state: NavState) -> float:
    """Azimuthal momentum sin^2(theta) * phi_dot, conserved along h-geodesics."""
    s = math.sin(state.point.theta)
    return s * s * state.vel.u


def unit_heading_vector(sph: Spheroid, point: SurfacePoint, heading: float) -> TangentVector:
    """Unit-length tangent vector at the given heading.

    The heading is measured counterclockwise from the local parallel;
    positive theta-rates point south, hence the minus sign on the
    second component:

        u = cos(heading) / sin(theta),  v = -sin(heading) / sqrt(h22)

    Raises:
        PoleSingularity: point inside the polar guard band.
    """
    require_off_pole(point.theta)
    h11, h22 = metric_components(sph, point.theta)
    return TangentVector(
        math.cos(heading) / math.sin(point.theta),
        -math.sin(heading) / math.sqrt(h22),
    )
