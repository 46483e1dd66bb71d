"""Per-collision checks on recorded trajectories.

Covers the angular-momentum repulsion inequalities, the polar-angle sequence
estimates, the small-angle circle identity and the adiabatic invariant series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TrajectoryRecord
from .geometry import GeometryError, HornGeometry

L_ROUNDOFF = 1e-9


def angular_momentum(p, v, center) -> float:
    """(p - center) x v; negative means clockwise, i.e. toward the cusp."""
    return (p[0] - center[0]) * v[1] - (p[1] - center[1]) * v[0]


@dataclass
class LemmaReport:
    n_events: int
    min_delta_L: float
    min_margin: float
    c_eff: float
    violations: list[int] = field(default_factory=list)
    min_v_dot_n: float = math.inf  # empirical transversality bound

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma_check(rec: TrajectoryRecord, relax: float = 0.9, s_cut: float | None = None) -> LemmaReport:
    """Check L+ > L- and L+ - L- >= relax*(d/R+)*s*(v.n) on neighborhood events.

    Events with theta outside (0, theta_max] are ignored.  When ``s_cut`` is
    given the quantitative bound is only enforced for events with arc_s <= s_cut;
    the strict inequality is enforced everywhere in the neighborhood.
    """
    if relax <= 0:
        raise ValueError("relax must be positive")
    g = rec.geometry
    c_eff = relax * g.lemma_c
    n = 0
    min_dl = math.inf
    min_margin = math.inf
    min_vn = math.inf
    bad: list[int] = []
    for e in rec.events:
        if not 0.0 < e.theta <= g.theta_max:
            continue
        n += 1
        dl = e.L_plus - e.L_minus
        min_dl = min(min_dl, dl)
        min_vn = min(min_vn, e.v_dot_n)
        failed = dl <= 0
        if s_cut is None or e.arc_s <= s_cut:
            margin = dl - c_eff * e.arc_s * e.v_dot_n
            min_margin = min(min_margin, margin)
            failed = failed or margin < 0
        if failed:
            bad.append(e.index)
    return LemmaReport(n, min_dl, min_margin, c_eff, bad, min_vn)


@dataclass
class SmallAngleReport:
    s_values: list[float]
    alpha: list[float]
    residuals: list[float]
    order: float


def perpendicular_angle(g: HornGeometry, wall_arc_s: float, wall: str = "outer") -> float:
    """Angle at the wall point between the radius from C and the wall normal.

    Solves (R_w -+ d cos(phi)) tan(alpha) = d sin(phi), phi = s / R_w.
    """
    rw = g.radius(wall)
    phi = wall_arc_s / rw
    sign = 1.0 if wall == "outer" else -1.0
    return math.atan2(g.d * math.sin(phi), rw - sign * g.d * math.cos(phi))


def loglog_slope(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    keep = (x > 0) & (y > 0)
    if keep.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def small_angle_identity_check(g: HornGeometry, s_values) -> SmallAngleReport:
    if not g.is_circular:
        raise GeometryError("small-angle identity is checked on the circle model only")
    s_values = [float(s) for s in s_values]
    alphas = [perpendicular_angle(g, s, "outer") for s in s_values]
    res = [g.r_mid * math.sin(a) - g.lemma_c * s for a, s in zip(alphas, s_values)]
    return SmallAngleReport(s_values, alphas, res, loglog_slope(s_values, res))


@dataclass
class ThetaReport:
    thetas: list[float]
    reciprocal_gaps: list[float]
    c1_empirical: float
    sum_theta: float


def reciprocal_gaps(thetas) -> list[float]:
    """1/theta[k+1] - 1/theta[k] over strictly decreasing consecutive pairs."""
    return [1.0 / b - 1.0 / a for a, b in zip(thetas, thetas[1:]) if 0 < b < a]


def theta_report(rec: TrajectoryRecord) -> ThetaReport:
    thetas = [e.theta for e in rec.events]
    gaps = reciprocal_gaps(thetas)
    return ThetaReport(thetas, gaps, max(gaps) if gaps else math.nan, float(sum(thetas)))


@dataclass
class InvariantSeries:
    time: np.ndarray
    s_mid: np.ndarray
    s_dot: np.ndarray
    J: np.ndarray

    def __len__(self):
        return len(self.time)

    def max_relative_drift(self) -> float:
        if len(self.J) == 0:
            return math.nan
        return float(np.max(np.abs(self.J - self.J[0])) / self.J[0])


def adiabatic_invariant(s: float, s_dot: float) -> float:
    return s * s * math.sqrt((1.0 - s_dot) * (1.0 + s_dot))


def invariant_series(rec: TrajectoryRecord) -> InvariantSeries:
    r = rec.geometry.r_mid
    ts, ss, sd, js = [], [], [], []
    for e in rec.events:
        if e.theta <= 0:
            raise ValueError(f"event {e.index} has theta <= 0")
        if abs(e.L_plus) > r + L_ROUNDOFF:
            raise ValueError(f"|L| = {abs(e.L_plus)} exceeds R = {r} at event {e.index}")
        s = r * e.theta
        v = max(-1.0, min(1.0, e.L_plus / r))
        ts.append(e.time)
        ss.append(s)
        sd.append(v)
        js.append(adiabatic_invariant(s, v))
    return InvariantSeries(np.array(ts), np.array(ss), np.array(sd), np.array(js))


def angular_velocity_series(rec: TrajectoryRecord, samples_per_flight: int = 8) -> list[tuple[float, float]]:
    """theta-dot = L / |r(t)|^2 sampled along every straight flight."""
    if samples_per_flight < 1:
        raise ValueError("samples_per_flight must be >= 1")
    c = rec.geometry.center_mid
    legs = []
    p, v, t = rec.initial.position, rec.initial.velocity, rec.initial.time
    for e in rec.events:
        legs.append((p, v, t, e.time))
        p, v, t = e.point, e.v_plus, e.time
    out: list[tuple[float, float]] = []
    for p, v, t0, t1 in legs:
        L = angular_momentum(p, v, c)
        for k in range(samples_per_flight):
            tau = (t1 - t0) * k / samples_per_flight
            rx = p[0] + tau * v[0] - c[0]
            ry = p[1] + tau * v[1] - c[1]
            out.append((t0 + tau, L / (rx * rx + ry * ry)))
    if legs:
        p, v, t0, t1 = legs[-1]
        rx, ry = p[0] + (t1 - t0) * v[0] - c[0], p[1] + (t1 - t0) * v[1] - c[1]
        out.append((t1, angular_momentum(p, v, c) / (rx * rx + ry * ry)))
    return out


@dataclass
class ConvexityReport:
    frac_nonneg_second_diff: float
    first_diff_sign_changes: int
    pattern: str

    @property
    def convex_like(self) -> bool:
        return self.frac_nonneg_second_diff >= 0.95 and self.pattern == "-+"


def convexity_report(values, tol: float = 1e-12) -> ConvexityReport:
    """Empirical convexity of a sampled series; report-only."""
    y = np.asarray(values, dtype=float)
    if len(y) < 3:
        return ConvexityReport(math.nan, 0, "")
    d2 = np.diff(y, 2)
    d1 = np.diff(y)
    signs = [("+" if x > 0 else "-") for x in d1 if abs(x) > tol]
    pattern = "".join(s for i, s in enumerate(signs) if i == 0 or s != signs[i - 1])
    return ConvexityReport(float(np.mean(d2 >= -tol)), max(len(pattern) - 1, 0), pattern)
