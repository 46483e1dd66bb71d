"""Billiard map inside the horn: free flight, collision detection, reflection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .geometry import (
    HornGeometry,
    Vec2,
    Wall,
    boundary_point,
    circle_width,
    signed_distance,
    theta_of,
)

T_MIN = 1e-12
TIE_TOL = 1e-12
ON_WALL_TOL = 1e-9


class Termination(str, Enum):
    escaped = "escaped"
    max_collisions = "max_collisions"
    grazing = "grazing"
    tip_degenerate = "tip_degenerate"


class TrajectoryTerminated(Exception):
    def __init__(self, reason: Termination, message: str = ""):
        super().__init__(message or reason.value)
        self.reason = reason


class GrazingCollision(TrajectoryTerminated):
    def __init__(self, message: str = "grazing collision"):
        super().__init__(Termination.grazing, message)


@dataclass(frozen=True)
class ParticleState:
    position: Vec2
    velocity: Vec2
    time: float = 0.0


@dataclass(frozen=True)
class StopConditions:
    theta_max: float = 0.3
    max_collisions: int = 1_000_000
    s_tip: float = 1e-12
    eps_graze: float = 1e-9

    def __post_init__(self):
        if not (self.theta_max > 0 and self.max_collisions > 0 and self.s_tip > 0 and self.eps_graze > 0):
            raise ValueError("stop conditions must all be positive")


class Hit(NamedTuple):
    wall: Wall
    point: Vec2
    flight_time: float


@dataclass(frozen=True)
class CollisionEvent:
    index: int
    wall: Wall
    point: Vec2
    time: float
    normal: Vec2
    v_minus: Vec2
    v_plus: Vec2
    v_dot_n: float
    arc_s: float
    theta: float
    L_minus: float
    L_plus: float
    psi_boundary: float
    psi_mid: float


@dataclass
class TrajectoryRecord:
    events: list[CollisionEvent]
    initial: ParticleState
    termination: Termination
    geometry: HornGeometry = field(repr=False)
    stop: StopConditions = field(default_factory=StopConditions)
    final: ParticleState | None = None


def mirror(v: Vec2, normal: Vec2) -> Vec2:
    """The linear map v - 2(v.n)n, with no incidence check."""
    vn = v[0] * normal[0] + v[1] * normal[1]
    return Vec2(v[0] - 2 * vn * normal[0], v[1] - 2 * vn * normal[1])


def reflect(v_minus: Vec2, normal: Vec2, eps_graze: float = 1e-9) -> Vec2:
    """Specular reflection off a wall with outward unit normal n.

    Raises GrazingCollision unless the particle hits the wall with v.n > eps_graze.
    """
    vn = v_minus[0] * normal[0] + v_minus[1] * normal[1]
    if vn <= eps_graze:
        raise GrazingCollision(f"v.n = {vn:.3e} at reflection")
    return mirror(v_minus, normal)


def _roots(b: float, c: float) -> tuple[float, float] | None:
    # t^2 + b t + c = 0, cancellation-free; tangent contacts within roundoff count as a double root
    disc = b * b - 4 * c
    if disc < 0:
        if disc < -1e-12 * max(1.0, b * b):
            return None
        disc = 0.0
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return 0.0, 0.0
    r1, r2 = q, c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)


def _circle_hits(g: HornGeometry, p: Vec2, v: Vec2) -> dict[str, float]:
    hits: dict[str, float] = {}
    # outer: leaving the large disc (exit root, direction outward)
    c = g.center_plus
    rx, ry = p.x - c.x, p.y - c.y
    roots = _roots(2 * (rx * v.x + ry * v.y), rx * rx + ry * ry - g.r_plus**2)
    if roots is not None:
        for t in (roots[1], roots[0]):
            if t > T_MIN and (rx + t * v.x) * v.x + (ry + t * v.y) * v.y >= -1e-12:
                hits["outer"] = t
                break
    # inner: entering the small disc
    c = g.center_minus
    rx, ry = p.x - c.x, p.y - c.y
    roots = _roots(2 * (rx * v.x + ry * v.y), rx * rx + ry * ry - g.r_minus**2)
    if roots is not None:
        for t in roots:
            if t > T_MIN and (rx + t * v.x) * v.x + (ry + t * v.y) * v.y <= 1e-12:
                hits["inner"] = t
                break
    return hits


def _sampled_hits(g: HornGeometry, p: Vec2, v: Vec2, t_limit: float) -> dict[str, float]:
    """March along the ray with steps of a quarter local width, then bisect."""
    hits: dict[str, float] = {}
    r = g.r_mid
    t_prev = 0.0
    t = 0.0
    while t < t_limit:
        q = p + v * t
        s_here = min(r * abs(theta_of(g, q)), g.theta_max * r)
        h = max(circle_width(g, s_here) / 4, 1e-10)
        t = t_prev + h
        q = p + v * t
        for wall in ("inner", "outer"):
            if signed_distance(g, wall, q) < 0:
                lo, hi = t_prev, t
                while hi - lo > 1e-12:
                    mid = 0.5 * (lo + hi)
                    if signed_distance(g, wall, p + v * mid) < 0:
                        hi = mid
                    else:
                        lo = mid
                hits[wall] = 0.5 * (lo + hi)
        if hits:
            return hits
        t_prev = t
    return hits


def _escape_time(g: HornGeometry, p: Vec2, v: Vec2, theta_max: float) -> float | None:
    """Flight time at which the ray crosses theta = theta_max outward, if ever."""
    if theta_max >= math.pi:
        return None
    rx, ry = p.x - g.center_mid.x, p.y - g.center_mid.y
    if rx * v.y - ry * v.x <= 0:  # L <= 0 never increases theta
        return None
    u = Vec2(math.sin(theta_max), -math.cos(theta_max))
    den = u.x * v.y - u.y * v.x
    if den == 0.0:
        return None
    t = -(u.x * ry - u.y * rx) / den
    if t <= 0:
        return None
    if (rx + t * v.x) * u.x + (ry + t * v.y) * u.y <= 0:
        return None
    return t


def next_collision(g: HornGeometry, state: ParticleState, stop: StopConditions) -> Hit | Termination:
    p, v = state.position, state.velocity
    t_esc = _escape_time(g, p, v, stop.theta_max)
    if g.is_circular:
        hits = _circle_hits(g, p, v)
    else:
        hits = _sampled_hits(g, p, v, t_limit=t_esc if t_esc is not None else 4 * g.r_plus)
    if not hits:
        if t_esc is not None:
            return Termination.escaped
        return Termination.tip_degenerate
    wall = min(hits, key=hits.__getitem__)
    t_hit = hits[wall]
    if t_esc is not None and t_esc < t_hit:
        return Termination.escaped
    if len(hits) == 2 and abs(hits["inner"] - hits["outer"]) < TIE_TOL:
        return Termination.tip_degenerate
    point = p + v * t_hit
    if _arc_s(g, wall, point) < stop.s_tip:
        return Termination.tip_degenerate
    return Hit(wall, point, t_hit)


def _arc_s(g: HornGeometry, wall: Wall, point: Vec2) -> float:
    if g.is_circular:
        c = g.center(wall)
        return g.radius(wall) * abs(math.atan2(point.x - c.x, c.y - point.y))
    return g._walls[wall].project(point, g.center(wall))


def _normal(g: HornGeometry, wall: Wall, point: Vec2, arc_s: float) -> Vec2:
    if g.is_circular:
        c = g.center(wall)
        n = (point - c).unit()
        return n if wall == "outer" else -n
    return boundary_point(g, wall, min(arc_s, g.wall_extent(wall))).outward_normal


def step(g: HornGeometry, state: ParticleState, stop: StopConditions, index: int = 0) -> tuple[CollisionEvent, ParticleState]:
    hit = next_collision(g, state, stop)
    if isinstance(hit, Termination):
        raise TrajectoryTerminated(hit)
    wall, point, dt = hit
    arc_s = _arc_s(g, wall, point)
    n = _normal(g, wall, point, arc_s)
    v_minus = state.velocity
    v_plus = reflect(v_minus, n, stop.eps_graze)
    # renormalise to keep |v| = 1 against roundoff accumulation
    v_plus = v_plus.unit()
    r = point - g.center_mid
    vn = v_minus.dot(n)
    rn = r.norm()
    event = CollisionEvent(
        index=index,
        wall=wall,
        point=point,
        time=state.time + dt,
        normal=n,
        v_minus=v_minus,
        v_plus=v_plus,
        v_dot_n=vn,
        arc_s=arc_s,
        theta=theta_of(g, point),
        L_minus=r.cross(v_minus),
        L_plus=r.cross(v_plus),
        psi_boundary=math.acos(min(vn, 1.0)),
        psi_mid=math.atan2(r.cross(v_minus) / rn, abs(r.dot(v_minus)) / rn),
    )
    return event, ParticleState(point, v_plus, state.time + dt)


def _launch_grazes(g: HornGeometry, state: ParticleState, stop: StopConditions) -> bool:
    for wall in ("inner", "outer"):
        if abs(signed_distance(g, wall, state.position)) <= ON_WALL_TOL:
            s = _arc_s(g, wall, state.position)
            n = _normal(g, wall, state.position, s)
            if state.velocity.dot(n) > -stop.eps_graze:
                return True
    return False


def simulate(g: HornGeometry, initial: ParticleState, stop: StopConditions | None = None) -> TrajectoryRecord:
    """Run the billiard map until escape, degeneracy, or the collision budget."""
    stop = stop or StopConditions(theta_max=g.theta_max)
    events: list[CollisionEvent] = []
    state = initial
    if _launch_grazes(g, state, stop):
        return TrajectoryRecord(events, initial, Termination.grazing, g, stop, state)
    reason = Termination.max_collisions
    for i in range(stop.max_collisions):
        try:
            event, state = step(g, state, stop, index=i)
        except TrajectoryTerminated as exc:
            reason = exc.reason
            break
        events.append(event)
    return TrajectoryRecord(events, initial, reason, g, stop, state)


def launch_state(g: HornGeometry, theta0: float, psi0: float) -> ParticleState:
    """Start on the middle circle at angle theta0, heading psi0 off the cuspward tangent.

    Positive psi0 rotates the heading counterclockwise, i.e. toward the outer wall.
    """
    u = Vec2(math.sin(theta0), -math.cos(theta0))
    pos = g.center_mid + u * g.r_mid
    t = Vec2(-math.cos(theta0), -math.sin(theta0))
    vel = t * math.cos(psi0) + u * math.sin(psi0)
    return ParticleState(pos, vel.unit(), 0.0)
