import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hornbilliard.continuum import (
    OdeError,
    OdeState,
    excursion_time,
    integrate,
    integrate_to,
    invariant,
    ode_rhs,
    rate_formulas,
    round_trip_measure,
    round_trip_time,
    shadow_compare,
    shadow_deviation,
)
from hornbilliard.dynamics import TrajectoryRecord
from hornbilliard.experiments import excursion

J_REF = 0.01 * math.sqrt(0.75)


@pytest.mark.parametrize("s, v, acc", [(1.0, 0.0, 2.0), (0.5, 1.0, 0.0), (0.5, 0.5, 3.0)])
def test_ode_rhs_examples(s, v, acc):
    assert ode_rhs(OdeState(s, v)) == pytest.approx(acc, abs=1e-15)


def test_ode_rhs_singularity():
    with pytest.raises(OdeError):
        ode_rhs(OdeState(0.0, 0.1))


@given(s=st.floats(1e-3, 10), v=st.floats(-1, 1))
def test_ode_rhs_even_in_velocity(s, v):
    assert ode_rhs(OdeState(s, v)) == ode_rhs(OdeState(s, -v))


def test_invariant_values():
    assert invariant(OdeState(0.1, -0.5)) == pytest.approx(J_REF, rel=1e-15)
    assert invariant(OdeState(0.3, 1.0)) == 0.0
    assert invariant(OdeState(0.3, -1.0)) == 0.0


def _excursion(dt):
    return integrate(OdeState(0.1, -0.5), dt, 1.0, stop_on_return=True)


def _drift(states):
    J0 = invariant(states[0])
    return max(abs(invariant(x) - J0) for x in states) / J0


def test_excursion_conserves_J():
    sol = _excursion(1e-4)
    assert _drift(sol) <= 1e-8
    # per-step change of J, a finite-difference view of dJ/dt = 0
    J = np.array([invariant(x) for x in sol])
    assert np.max(np.abs(np.diff(J))) <= 1e-12 * J[0]


def test_fine_step_drift():
    assert _drift(_excursion(1e-5)) <= 1e-11


def test_richardson_half_step_agreement():
    coarse = integrate(OdeState(0.1, -0.5), 1e-4, 0.05)
    fine = integrate(OdeState(0.1, -0.5), 5e-5, 0.05)
    diff = max(abs(a.s - b.s) for a, b in zip(coarse, fine[::2]))
    assert diff <= 1e-12


def test_excursion_duration_matches_quadrature():
    sol = _excursion(1e-4)
    # stop_on_return ends on the first step at or past s0, so the duration is resolved to one step
    assert abs(sol[-1].t - excursion_time(0.1, -0.5)) <= 1e-4


def test_turning_point():
    sol = _excursion(1e-4)
    s_min = min(x.s for x in sol)
    assert abs(s_min - 0.093060) <= 1e-5
    assert abs(s_min - math.sqrt(J_REF)) <= 10 * 1e-4


@pytest.mark.parametrize("s0, v0", [(0.2, -0.9), (0.05, -0.3), (1.0, -0.99)])
def test_turning_point_law(s0, v0):
    dt = 1e-4
    sol = integrate(OdeState(s0, v0), dt, 10.0, stop_on_return=True)
    J0 = invariant(sol[0])
    assert abs(min(x.s for x in sol) - math.sqrt(J0)) <= 10 * dt


def test_outward_start_accelerates():
    sol = integrate(OdeState(0.1, 0.0), 1e-4, 0.05)
    s = [x.s for x in sol]
    assert all(b > a for a, b in zip(s, s[1:]))


def test_time_reversal_at_turning_point():
    dt = 1e-5
    sol = _excursion(dt)
    k = min(range(len(sol)), key=lambda i: sol[i].s)
    turn = sol[k]
    back = integrate(OdeState(turn.s, -turn.s_dot, 0.0), dt, k * dt)
    for j in range(0, k + 1, 50):
        assert abs(back[j].s - sol[k - j].s) <= 1e-7


def test_integrate_validation():
    with pytest.raises(OdeError):
        integrate(OdeState(0.1, -0.5), 0.0, 1.0)
    with pytest.raises(OdeError):
        integrate(OdeState(-0.1, 0.5), 1e-3, 1.0)
    # a pure radial plunge has J = 0 and must trip the floor guard
    with pytest.raises(OdeError):
        integrate(OdeState(0.1, -1.0), 1e-3, 1.0)


def test_rate_formula_examples(g21):
    assert rate_formulas(g21, 0.1, 0.0) == pytest.approx((10.0, 20.0, 30.0), rel=1e-15)
    r = rate_formulas(g21, 0.1, 1.5 * (1 - 1e-9))
    assert max(abs(x) for x in r) < 1e-6
    g = g21
    assert 2 * g.d / (g.r_plus * (1 / g.r_minus - 1 / g.r_plus)) == pytest.approx(g.r_minus, rel=1e-15)
    with pytest.raises(ValueError):
        rate_formulas(g21, 0.1, 1.5)


@given(s=st.floats(1e-4, 1.0), L=st.floats(-1.4999, 1.4999))
def test_rates_add_up(g21, s, L):
    r = rate_formulas(g21, s, L)
    assert abs(r.outer + r.inner - r.total) <= 1e-15 * abs(r.total) + 1e-300


def test_round_trip_time_converges(g21):
    errs = []
    for s0 in (0.1, 0.05, 0.02):
        trips = [t for t in round_trip_measure(excursion(g21, s0, 0.5))]
        errs.append(max(abs(t.delta_t / round_trip_time(g21, t.s, t.L_before) - 1) for t in trips))
    assert errs[0] > errs[1] > errs[2]


def test_round_trip_rate_near_tip(g21):
    trips = round_trip_measure(excursion(g21, 0.02, 0.5))
    assert trips
    for t in trips:
        ratio = t.measured_rate() / rate_formulas(g21, t.s, t.L_before).total
        assert abs(ratio - 1) <= 0.2


def test_round_trip_without_alternation_is_empty(g21):
    rec = excursion(g21, 0.1, 0.5)
    only_outer = TrajectoryRecord([e for e in rec.events if e.wall == "outer"], rec.initial,
                                  rec.termination, g21, rec.stop)
    assert round_trip_measure(only_outer) == []


def test_shadow_of_itself_is_exact():
    dt = 1e-4
    sol = integrate(OdeState(0.1, -0.5), dt, 0.04)
    rep = shadow_deviation([x.t for x in sol], [x.s for x in sol], 0.1, -0.5, dt)
    assert rep.max_deviation <= 1e-12


def test_integrate_to_matches_integrate():
    sol = integrate(OdeState(0.1, -0.5), 1e-4, 0.03)
    at = integrate_to(OdeState(0.1, -0.5), [0.01, 0.02, 0.03], 1e-4)
    for st_, k in zip(at, (100, 200, 300)):
        assert st_.s == pytest.approx(sol[k].s, abs=1e-12)


def test_shadow_improves_with_depth(g21):
    deep = shadow_compare(excursion(g21, 0.05, 0.5), 1e-4)
    shallow = shadow_compare(excursion(g21, 0.2, 0.5), 1e-4)
    assert deep.max_deviation < shallow.max_deviation
    assert abs(deep.s_min_billiard / deep.s_min_ode - 1) <= 0.1
