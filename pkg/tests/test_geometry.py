import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hornbilliard.diagnostics import loglog_slope
from hornbilliard.geometry import (
    GeometryError,
    Vec2,
    arc_distance_to_cusp,
    boundary_point,
    build_horn,
    contains,
    signed_distance,
    theta_of,
    width_at,
)

from oracles import perturbed_point_quad, radial_gap_root_finding


@pytest.mark.parametrize(
    "rp, rm, tmax, R, d, c",
    [(2.0, 1.0, 0.6, 1.5, 0.5, 0.25), (3.0, 1.0, 0.3, 2.0, 1.0, 1 / 3)],
)
def test_build_horn_derived_fields(rp, rm, tmax, R, d, c):
    g = build_horn(rp, rm, tmax)
    assert g.r_mid == R and g.d == d
    assert g.lemma_c == pytest.approx(c, abs=1e-15)
    assert g.center_mid == Vec2(0.0, R)
    assert g.center_plus == Vec2(0.0, rp) and g.center_minus == Vec2(0.0, rm)
    assert g.r_mid == g.r_plus - g.d
    mid = 0.5 * (g.center_plus + g.center_minus)
    assert mid == g.center_mid


@pytest.mark.parametrize("rp, rm", [(1.0, 1.0), (1.0, 2.0), (2.0, 0.0), (-1.0, -2.0)])
def test_build_horn_rejects_bad_radii(rp, rm):
    with pytest.raises(GeometryError):
        build_horn(rp, rm, 0.6)


@pytest.mark.parametrize("tmax", [0.0, -0.1, math.pi / 2, 2.0])
def test_build_horn_rejects_bad_theta_max(tmax):
    with pytest.raises(GeometryError):
        build_horn(2.0, 1.0, tmax)


def test_boundary_point_tip_and_top():
    g = build_horn(2.0, 1.0, 0.6)
    tip = boundary_point(g, "outer", 0.0)
    assert tip.point == Vec2(0.0, 0.0)
    assert tip.outward_normal == pytest.approx((0.0, -1.0), abs=1e-15)
    assert tip.curvature == 0.5
    top = boundary_point(g, "inner", math.pi)
    assert top.point == pytest.approx((0.0, 2.0), abs=1e-15)
    assert top.outward_normal == pytest.approx((0.0, -1.0), abs=1e-15)


def test_boundary_point_out_of_range(g21):
    with pytest.raises(GeometryError):
        boundary_point(g21, "outer", -0.1)
    with pytest.raises(GeometryError):
        boundary_point(g21, "inner", 4.0)


def test_tangency_at_tip():
    for g in (build_horn(2, 1, 0.3), build_horn(2, 1, 0.3, 0.05, -0.08)):
        for wall in ("inner", "outer"):
            assert boundary_point(g, wall, 0.0).tangent == pytest.approx((1.0, 0.0), abs=1e-12)


@given(
    s=st.floats(0.0, 0.6),
    wall=st.sampled_from(["inner", "outer"]),
    kp=st.sampled_from([0.0, 0.05, -0.1]),
)
@settings(max_examples=200, deadline=None)
def test_boundary_frame_is_orthonormal(s, wall, kp):
    g = build_horn(2.0, 1.0, 0.3, kp, -kp)
    b = boundary_point(g, wall, s)
    assert abs(b.outward_normal.norm() - 1) <= 1e-12
    assert abs(b.outward_normal.dot(b.tangent)) <= 1e-12
    assert b.arc_s >= 0


@given(s=st.floats(0.0, math.pi), wall=st.sampled_from(["inner", "outer"]))
def test_circle_points_on_their_circle(s, wall):
    g = build_horn(2.0, 1.0, 0.3)
    rw = g.radius(wall)
    b = boundary_point(g, wall, s * rw)
    assert abs((b.point - g.center(wall)).norm() - rw) <= 1e-12


def test_perturbed_wall_matches_quadrature():
    g = build_horn(2.0, 1.0, 0.3, 0.05, -0.08)
    for wall, radius, slope in (("outer", 2.0, 0.05), ("inner", 1.0, -0.08)):
        for s in (0.013, 0.1, 0.37, 0.59):
            ref = perturbed_point_quad(radius, slope, s)
            assert np.allclose(boundary_point(g, wall, s).point, ref, atol=1e-13, rtol=0)


def test_perturbed_gap_to_osculating_circle_is_cubic():
    kp = 0.05
    g = build_horn(2.0, 1.0, 0.3, kp, 0.0)
    gc = build_horn(2.0, 1.0, 0.3)
    # leading term of gamma - gamma0 is kp * s^3 / 6 along the normal
    K = 1.1 * kp / 6
    gap = (boundary_point(g, "outer", 0.1).point - boundary_point(gc, "outer", 0.1).point).norm()
    assert gap <= K * 0.1**3
    ss = [0.2, 0.1, 0.05, 0.025]
    gaps = [(boundary_point(g, "outer", s).point - boundary_point(gc, "outer", s).point).norm() for s in ss]
    assert loglog_slope(ss, gaps) >= 2.9
    tgaps = [(boundary_point(g, "outer", s).tangent - boundary_point(gc, "outer", s).tangent).norm() for s in ss]
    assert loglog_slope(ss, tgaps) >= 1.9


@pytest.mark.parametrize("p, expected", [((0.0, 0.0), 0.0), ((1.5, 1.5), math.pi / 2), ((-1.5, 1.5), -math.pi / 2)])
def test_theta_of(p, expected):
    g = build_horn(2.0, 1.0, 0.6)
    assert theta_of(g, p) == pytest.approx(expected, abs=1e-15)


def test_theta_of_center_raises():
    g = build_horn(2.0, 1.0, 0.6)
    with pytest.raises(GeometryError):
        theta_of(g, (0.0, 1.5))


def test_arc_distance_middle():
    g = build_horn(2.0, 1.0, 0.6)
    assert arc_distance_to_cusp(g, "middle", (0.0, 0.0)) == 0.0
    p = g.center_mid + Vec2(math.sin(0.2), -math.cos(0.2)) * g.r_mid
    assert arc_distance_to_cusp(g, "middle", p) == pytest.approx(0.3, abs=1e-14)


def test_arc_distance_off_curve(g21):
    with pytest.raises(GeometryError):
        arc_distance_to_cusp(g21, "middle", (0.1, 0.2))
    with pytest.raises(GeometryError):
        arc_distance_to_cusp(g21, "outer", (0.1, 0.2))


def test_arc_distance_on_walls(g21):
    for wall in ("inner", "outer"):
        p = boundary_point(g21, wall, 0.25).point
        assert arc_distance_to_cusp(g21, wall, p) == pytest.approx(0.25, abs=1e-12)


def test_inner_and_middle_distances_agree_near_tip(g21):
    # same collision point measured along the inner wall and along its radial projection on the middle circle
    ratios = []
    for s in (0.2, 0.1, 0.05):
        p = boundary_point(g21, "inner", s).point
        s_mid = g21.r_mid * theta_of(g21, p)
        ratios.append(abs(arc_distance_to_cusp(g21, "inner", p) / s_mid - 1))
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.01


def test_width_examples(g21):
    assert width_at(g21, 0.0) == pytest.approx(0.0, abs=1e-15)
    w = width_at(g21, 0.1)
    assert abs(w - 0.0025) <= 1e-3 * 0.1
    ref = radial_gap_root_finding(g21, 0.1)
    assert w == pytest.approx(ref, rel=1e-10)
    assert abs(ref / 0.0025 - 1) <= 0.05


@pytest.mark.parametrize("s", [0.02, 0.05, 0.1, 0.3, 0.45])
def test_width_matches_root_finding_oracle(g21, s):
    assert width_at(g21, s) == pytest.approx(radial_gap_root_finding(g21, s), rel=1e-9)


def test_width_leading_order_limit(g21):
    lead = 0.5 * (1 / g21.r_minus - 1 / g21.r_plus)
    assert abs(width_at(g21, 0.02) / 0.02**2 / lead - 1) <= 0.05


def test_width_perturbed_close_to_circle():
    g = build_horn(2.0, 1.0, 0.3, 0.05, -0.08)
    gc = build_horn(2.0, 1.0, 0.3)
    for s in (0.05, 0.1, 0.2):
        assert abs(width_at(g, s) - width_at(gc, s)) <= 0.2 * s**3


def test_width_out_of_range(g21):
    with pytest.raises(GeometryError):
        width_at(g21, 0.5)


@pytest.mark.parametrize("p, inside", [((0.0, 3.0), True), ((0.0, 1.0), False), ((0.0, 5.0), False)])
def test_contains(p, inside):
    g = build_horn(2.0, 1.0, 0.6)
    assert contains(g, p) is inside


def test_contains_perturbed_consistent_with_signed_distance():
    g = build_horn(2.0, 1.0, 0.3, 0.05, -0.08)
    for s in (0.05, 0.2, 0.4):
        theta = s / g.r_mid
        p = g.center_mid + Vec2(math.sin(theta), -math.cos(theta)) * g.r_mid
        assert contains(g, p)
        for wall in ("inner", "outer"):
            b = boundary_point(g, wall, s)
            assert abs(signed_distance(g, wall, b.point)) < 1e-12
            assert not contains(g, b.point + b.outward_normal * 1e-6)
