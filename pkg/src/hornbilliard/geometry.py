"""Horn domain: two boundary arcs tangent at the origin with same-sign curvature.

Canonical frame: the cusp tip O sits at the origin, the common tangent is the
x-axis, all centers lie on the positive y-axis and the working side of the horn
is x > 0.  The outer (focusing) wall has the larger osculating radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, NamedTuple

import numpy as np

Wall = Literal["inner", "outer"]

OFF_CURVE_TOL = 1e-9
QUAD_STEP = 1e-4


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def __mul__(self, k):  # type: ignore[override]
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> float:
        """2-D cross product x1*y2 - x2*y1."""
        return self.x * other[1] - other[0] * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> Vec2:
        n = math.hypot(self.x, self.y)
        return Vec2(self.x / n, self.y / n)


class BoundarySample(NamedTuple):
    point: Vec2
    outward_normal: Vec2
    tangent: Vec2
    curvature: float
    arc_s: float


class GeometryError(ValueError):
    pass


class _PerturbedWall:
    """Arc-length reconstruction of a wall with curvature 1/radius + slope*sigma.

    Positions are tabulated on a uniform grid by Simpson accumulation of the
    unit tangent, which is exact to O(h^4) per unit length.
    """

    def __init__(self, radius: float, slope: float, s_max: float, h: float = QUAD_STEP):
        self.radius = radius
        self.slope = slope
        self.s_max = s_max
        self.h = h
        n = int(math.ceil(s_max / h)) + 1
        sig = np.arange(n + 1) * h
        mid = sig[:-1] + 0.5 * h
        ta, tm, tb = self._angle(sig[:-1]), self._angle(mid), self._angle(sig[1:])
        dx = h / 6 * (np.cos(ta) + 4 * np.cos(tm) + np.cos(tb))
        dy = h / 6 * (np.sin(ta) + 4 * np.sin(tm) + np.sin(tb))
        self._x = np.concatenate([[0.0], np.cumsum(dx)])
        self._y = np.concatenate([[0.0], np.cumsum(dy)])

    def _angle(self, s):
        return s / self.radius + 0.5 * self.slope * s * s

    def curvature(self, s: float) -> float:
        return 1.0 / self.radius + self.slope * s

    def tangent_angle(self, s: float) -> float:
        return s / self.radius + 0.5 * self.slope * s * s

    def position(self, s: float) -> Vec2:
        k = min(int(s / self.h), len(self._x) - 1)
        s0 = k * self.h
        r = s - s0
        x, y = float(self._x[k]), float(self._y[k])
        if r != 0.0:
            a0, am, a1 = self.tangent_angle(s0), self.tangent_angle(s0 + 0.5 * r), self.tangent_angle(s)
            x += r / 6 * (math.cos(a0) + 4 * math.cos(am) + math.cos(a1))
            y += r / 6 * (math.sin(a0) + 4 * math.sin(am) + math.sin(a1))
        return Vec2(x, y)

    def project(self, p: Vec2, center: Vec2) -> float:
        """Arc-length of the foot of the perpendicular from p (Newton, clamped)."""
        rel = p - center
        phi = math.atan2(rel.x, -rel.y)
        s = min(max(self.radius * phi, 0.0), self.s_max)
        for _ in range(30):
            g = self.position(s)
            a = self.tangent_angle(s)
            t = Vec2(math.cos(a), math.sin(a))
            nrm = Vec2(-t.y, t.x)
            diff = g - p
            f = diff.dot(t)
            fp = 1.0 + self.curvature(s) * diff.dot(nrm)
            step = f / fp
            s_new = min(max(s - step, 0.0), self.s_max)
            if abs(s_new - s) < 1e-15:
                s = s_new
                break
            s = s_new
        return s


@dataclass(frozen=True)
class HornGeometry:
    r_plus: float
    r_minus: float
    r_mid: float
    d: float
    center_mid: Vec2
    center_plus: Vec2
    center_minus: Vec2
    lemma_c: float
    kappa_perturb_plus: float = 0.0
    kappa_perturb_minus: float = 0.0
    theta_max: float = 0.3

    @property
    def is_circular(self) -> bool:
        return self.kappa_perturb_plus == 0.0 and self.kappa_perturb_minus == 0.0

    def radius(self, wall: str) -> float:
        if wall == "outer":
            return self.r_plus
        if wall == "inner":
            return self.r_minus
        if wall == "middle":
            return self.r_mid
        raise GeometryError(f"unknown wall {wall!r}")

    def center(self, wall: str) -> Vec2:
        if wall == "outer":
            return self.center_plus
        if wall == "inner":
            return self.center_minus
        if wall == "middle":
            return self.center_mid
        raise GeometryError(f"unknown wall {wall!r}")

    def wall_extent(self, wall: Wall) -> float:
        """Largest admissible arc-length on a wall."""
        rw = self.radius(wall)
        if self.is_circular:
            return math.pi * rw
        return min(math.pi * rw, 2.0 * self.theta_max * self.r_mid)

    @cached_property
    def _walls(self) -> dict[str, _PerturbedWall]:
        return {
            "outer": _PerturbedWall(self.r_plus, self.kappa_perturb_plus, self.wall_extent("outer")),
            "inner": _PerturbedWall(self.r_minus, self.kappa_perturb_minus, self.wall_extent("inner")),
        }


def build_horn(
    r_plus: float,
    r_minus: float,
    theta_max: float = 0.3,
    kappa_perturb_plus: float = 0.0,
    kappa_perturb_minus: float = 0.0,
) -> HornGeometry:
    if not (r_minus > 0 and r_plus > 0):
        raise GeometryError("radii must be positive")
    if not r_plus > r_minus:
        raise GeometryError("r_plus must exceed r_minus")
    if not 0 < theta_max < math.pi / 2:
        raise GeometryError("theta_max must lie in (0, pi/2)")
    d = 0.5 * (r_plus - r_minus)
    r_mid = r_plus - d
    return HornGeometry(
        r_plus=float(r_plus),
        r_minus=float(r_minus),
        r_mid=r_mid,
        d=d,
        center_mid=Vec2(0.0, r_mid),
        center_plus=Vec2(0.0, float(r_plus)),
        center_minus=Vec2(0.0, float(r_minus)),
        lemma_c=d / r_plus,
        kappa_perturb_plus=float(kappa_perturb_plus),
        kappa_perturb_minus=float(kappa_perturb_minus),
        theta_max=float(theta_max),
    )


def _side(wall: str) -> float:
    # outward normal = side * left normal of the wall's arc-length parametrization
    return -1.0 if wall == "outer" else 1.0


def boundary_point(g: HornGeometry, wall: Wall, arc_s: float) -> BoundarySample:
    if wall not in ("inner", "outer"):
        raise GeometryError(f"unknown wall {wall!r}")
    if not 0.0 <= arc_s <= g.wall_extent(wall) * (1 + 1e-12):
        raise GeometryError(f"arc_s={arc_s} out of range for {wall} wall")
    rw = g.radius(wall)
    if g.is_circular:
        phi = arc_s / rw
        c, s = math.cos(phi), math.sin(phi)
        center = g.center(wall)
        point = Vec2(center.x + rw * s, center.y - rw * c)
        tangent = Vec2(c, s)
        curvature = 1.0 / rw
    else:
        w = g._walls[wall]
        point = w.position(arc_s)
        a = w.tangent_angle(arc_s)
        tangent = Vec2(math.cos(a), math.sin(a))
        curvature = w.curvature(arc_s)
    side = _side(wall)
    normal = Vec2(-tangent.y * side, tangent.x * side)
    return BoundarySample(point, normal, tangent, curvature, arc_s)


def theta_of(g: HornGeometry, p) -> float:
    """Signed polar angle about the middle-circle center, zero at the tip."""
    bx = p[0] - g.center_mid.x
    by = p[1] - g.center_mid.y
    if bx == 0.0 and by == 0.0:
        raise GeometryError("theta undefined at the middle-circle center")
    return math.atan2(bx, -by)


def _wall_parameter(g: HornGeometry, wall: Wall, p) -> float:
    if g.is_circular:
        c = g.center(wall)
        return g.radius(wall) * abs(math.atan2(p[0] - c.x, c.y - p[1]))
    return g._walls[wall].project(Vec2(p[0], p[1]), g.center(wall))


def signed_distance(g: HornGeometry, wall: Wall, p) -> float:
    """Distance from p to a wall, positive on the billiard-domain side."""
    if g.is_circular:
        c = g.center(wall)
        dist = math.hypot(p[0] - c.x, p[1] - c.y)
        return g.r_plus - dist if wall == "outer" else dist - g.r_minus
    w = g._walls[wall]
    s = w.project(Vec2(p[0], p[1]), g.center(wall))
    gp = w.position(s)
    a = w.tangent_angle(s)
    left = Vec2(-math.sin(a), math.cos(a))
    off = (p[0] - gp.x) * left.x + (p[1] - gp.y) * left.y
    return off if wall == "outer" else -off


def arc_distance_to_cusp(g: HornGeometry, wall: str, p) -> float:
    if wall == "middle":
        c = g.center_mid
        if abs(math.hypot(p[0] - c.x, p[1] - c.y) - g.r_mid) > OFF_CURVE_TOL:
            raise GeometryError("point is not on the middle circle")
        return g.r_mid * abs(theta_of(g, p))
    if wall not in ("inner", "outer"):
        raise GeometryError(f"unknown wall {wall!r}")
    if abs(signed_distance(g, wall, p)) > OFF_CURVE_TOL:
        raise GeometryError(f"point is not on the {wall} wall")
    return _wall_parameter(g, wall, p)


def _circle_ray_radii(g: HornGeometry, theta: float) -> tuple[float, float]:
    # distances from C along the ray at angle theta to the inner and outer circles
    d = g.d
    st, ct = math.sin(theta), math.cos(theta)
    rho_out = -d * ct + math.sqrt(g.r_plus**2 - (d * st) ** 2)
    disc = g.r_minus**2 - (d * st) ** 2
    if disc < 0:
        raise GeometryError("radial line misses the inner wall")
    rho_in = d * ct + math.sqrt(disc)
    return rho_in, rho_out


def circle_width(g: HornGeometry, arc_s: float) -> float:
    """Closed-form gap between the osculating circles along the middle-circle normal."""
    rho_in, rho_out = _circle_ray_radii(g, arc_s / g.r_mid)
    return rho_out - rho_in


def width_at(g: HornGeometry, arc_s: float) -> float:
    """Gap between the walls measured along the middle-circle normal at arc_s."""
    if not 0.0 <= arc_s <= g.theta_max * g.r_mid * (1 + 1e-12):
        raise GeometryError(f"arc_s={arc_s} outside the cusp neighborhood")
    if g.is_circular:
        return circle_width(g, arc_s)
    from scipy.optimize import brentq

    theta = arc_s / g.r_mid
    u = Vec2(math.sin(theta), -math.cos(theta))
    guess_in, guess_out = _circle_ray_radii(g, theta)
    roots = []
    for wall, guess in (("inner", guess_in), ("outer", guess_out)):
        f = lambda rho, w=wall: signed_distance(g, w, g.center_mid + u * rho)  # noqa: E731
        delta = 1e-6 + 1e-3 * arc_s
        while f(guess - delta) * f(guess + delta) > 0:
            delta *= 2
            if delta > g.r_mid:
                raise GeometryError("failed to bracket wall along radial line")
        roots.append(brentq(f, guess - delta, guess + delta, xtol=1e-15, rtol=1e-15))
    return roots[1] - roots[0]


def contains(g: HornGeometry, p) -> bool:
    return signed_distance(g, "outer", p) > 0 and signed_distance(g, "inner", p) > 0
