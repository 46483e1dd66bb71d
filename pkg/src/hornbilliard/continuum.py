"""Continuum approximation of the motion into the horn.

The arc-length coordinate s along the middle circle obeys
s'' = 2 (1 - s'^2) / s, which conserves J = s^2 sqrt(1 - s'^2).  The integrator
uses only field arithmetic so it runs unchanged on mpmath numbers when the
drift has to be resolved below double-precision roundoff.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

from .diagnostics import invariant_series
from .dynamics import TrajectoryRecord
from .geometry import HornGeometry

log = logging.getLogger(__name__)

S_FLOOR = 1e-6
S_DOT_SLACK = 1e-9


class OdeError(ValueError):
    pass


@dataclass(frozen=True)
class OdeState:
    s: float
    s_dot: float
    t: float = 0.0


def ode_rhs(state: OdeState):
    if not state.s > 0:
        raise OdeError("s must be positive (s = 0 is the cusp singularity)")
    return 2 * (1 - state.s_dot) * (1 + state.s_dot) / state.s


def invariant(state: OdeState):
    v = state.s_dot
    w = (1 - v) * (1 + v)
    if w < 0:
        raise OdeError(f"|s_dot| = {abs(v)} exceeds 1")
    return state.s**2 * (math.sqrt(w) if isinstance(w, float) else w**0.5)


def _acc(s, v):
    return 2 * (1 - v) * (1 + v) / s


def rk4_step(s, v, h):
    k1s, k1v = v, _acc(s, v)
    k2s, k2v = v + h / 2 * k1v, _acc(s + h / 2 * k1s, v + h / 2 * k1v)
    k3s, k3v = v + h / 2 * k2v, _acc(s + h / 2 * k2s, v + h / 2 * k2v)
    k4s, k4v = v + h * k3v, _acc(s + h * k3s, v + h * k3v)
    return (
        s + h / 6 * (k1s + 2 * k2s + 2 * k3s + k4s),
        v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v),
    )


def _checked(s, v, t) -> OdeState:
    if not s > S_FLOOR:
        raise OdeError(f"s fell to {s} at t={t}; the turning point should prevent this")
    if abs(v) > 1 + S_DOT_SLACK:
        raise OdeError(f"|s_dot| = {abs(v)} left [-1, 1] at t={t}")
    return OdeState(s, v, t)


def integrate(initial: OdeState, dt, t_end, *, stop_on_return: bool = False) -> list[OdeState]:
    """Fixed-step classical RK4 from ``initial`` to ``t_end``.

    With ``stop_on_return`` the run ends as soon as s climbs back to its
    initial value after having moved inward, which brackets one excursion.
    """
    if not dt > 0:
        raise OdeError("dt must be positive")
    if not initial.s > 0:
        raise OdeError("initial s must be positive")
    s, v, t = initial.s, initial.s_dot, initial.t
    out = [OdeState(s, v, t)]
    n = int(math.ceil(float((t_end - t) / dt) - 1e-9))
    went_in = False
    for k in range(1, n + 1):
        s_new, v_new = rk4_step(s, v, dt)
        t_new = initial.t + k * dt
        state = _checked(s_new, v_new, t_new)
        out.append(state)
        s, v = s_new, v_new
        went_in = went_in or s < initial.s
        if stop_on_return and went_in and v > 0 and s >= initial.s:
            break
    return out


def integrate_to(initial: OdeState, times, dt) -> list[OdeState]:
    """States at the requested (increasing) times, never stepping more than dt."""
    s, v, t = initial.s, initial.s_dot, initial.t
    out = []
    for target in times:
        span = target - t
        if span < 0:
            raise OdeError("times must be non-decreasing and start after initial.t")
        n = int(math.ceil(span / dt - 1e-9)) if span > 0 else 0
        if n:
            h = span / n
            for _ in range(n):
                s, v = rk4_step(s, v, h)
                _checked(s, v, t)
        t = target
        out.append(OdeState(s, v, t))
    return out


def excursion_time(s0: float, s_dot0: float) -> float:
    """Duration of one in-and-out excursion from s0, by quadrature of J conservation."""
    from scipy.integrate import quad

    J = s0 * s0 * math.sqrt(1 - s_dot0 * s_dot0)
    s_min = math.sqrt(J)
    # s = s_min + u^2 removes the inverse-square-root singularity at the turning point
    def f(u):
        s = s_min + u * u
        return 2 * u / math.sqrt(1.0 - (J / (s * s)) ** 2) if u > 0 else math.sqrt(s_min)

    half, _ = quad(f, 0.0, math.sqrt(s0 - s_min), limit=200, epsabs=1e-14, epsrel=1e-13)
    return 2 * half if s_dot0 < 0 else half


class Rates(NamedTuple):
    outer: float
    inner: float
    total: float


def rate_formulas(g: HornGeometry, s: float, L: float) -> Rates:
    """Leading-order angular-momentum change per unit time for each wall."""
    if not s > 0:
        raise ValueError("s must be positive")
    r = g.r_mid
    if abs(L) >= r:
        raise ValueError("|L| must be below R")
    k = (1 - (L / r) ** 2) / s
    return Rates(g.r_minus * k, g.r_plus * k, 2 * r * k)


def round_trip_time(g: HornGeometry, s: float, L: float) -> float:
    """Leading-order outer-inner-outer flight time."""
    return (1 / g.r_minus - 1 / g.r_plus) * s * s / math.sqrt(1 - (L / g.r_mid) ** 2)


@dataclass(frozen=True)
class RoundTripSample:
    s: float
    L_before: float
    delta_L_outer: float
    delta_L_inner: float
    delta_t: float

    def measured_rate(self) -> float:
        return (self.delta_L_outer + self.delta_L_inner) / self.delta_t


def round_trip_measure(rec: TrajectoryRecord) -> list[RoundTripSample]:
    r = rec.geometry.r_mid
    ev = rec.events
    out = []
    skipped = 0
    for a, b, c in zip(ev, ev[1:], ev[2:]):
        if a.wall != "outer":
            continue
        if b.wall != "inner" or c.wall != "outer":
            skipped += 1
            continue
        out.append(
            RoundTripSample(
                s=r * a.theta,
                L_before=a.L_minus,
                delta_L_outer=a.L_plus - a.L_minus,
                delta_L_inner=b.L_plus - b.L_minus,
                delta_t=c.time - a.time,
            )
        )
    if skipped:
        log.debug("skipped %d non-alternating outer events", skipped)
    return out


@dataclass
class ShadowReport:
    max_deviation: float
    s_min_billiard: float
    s_min_ode: float
    s0: float
    s_dot0: float


def shadow_deviation(times, s_values, s0, s_dot0, dt) -> ShadowReport:
    """Compare sampled s(t) with the ODE solution started at (times[0], s0, s_dot0)."""
    t0 = times[0]
    sol = integrate_to(OdeState(s0, s_dot0, t0), times, dt)
    dev = max(abs(a - b.s) for a, b in zip(s_values, sol))
    # resolve the ODE minimum on the integration grid, not just the sample times
    fine = integrate(OdeState(s0, s_dot0, t0), dt, times[-1])
    return ShadowReport(dev / s0, min(s_values), min(x.s for x in fine), s0, s_dot0)


def shadow_compare(rec: TrajectoryRecord, dt: float = 1e-4) -> ShadowReport:
    series = invariant_series(rec)
    return shadow_deviation(
        list(series.time), list(series.s_mid), float(series.s_mid[0]), float(series.s_dot[0]), dt
    )
