import math

import pytest

import zollfins as zf


def test_profiles_and_curvature():
    p = zf.ZollProfile.example1(0.25)
    assert p.odd_coeffs == pytest.approx([0.25, -0.25])
    assert zf.gauss_curvature(p, math.pi) == pytest.approx(0.5)
    ok, x, g = zf.check_positive_curvature(zf.ZollProfile.parse("0.6,-0.6"))
    assert not ok and x == pytest.approx(-1.0) and g == pytest.approx(-0.2)
    with pytest.raises(ValueError):
        zf.ZollProfile([0.3])


def test_closure_and_geodesic():
    p = zf.ZollProfile.example2()
    T, adv = zf.closure_integrals(p, 0.4)
    assert T == pytest.approx(math.pi, abs=1e-10)
    assert adv == pytest.approx(math.pi, abs=1e-10)
    tr = zf.integrate_geodesic(p, r=1.0, theta=0.0, c=0.4, sign=1)
    assert tr["r"][-1] == pytest.approx(1.0, abs=1e-8)


def test_jacobi_and_indicatrix():
    p = zf.ZollProfile.example1(0.45)
    y1, dy1, y2, dy2 = zf.jacobi_pair(p, 0.3, 1.1)
    assert y1 * dy2 - dy1 * y2 == pytest.approx(-1.0, abs=1e-12)
    v1, v2 = zf.indicatrix_parametric(p, 0.4, 1.0)
    assert abs(zf.implicit_residual(p, 0.4, v1, v2)) < 1e-10
    curve = zf.indicatrix_curve(p, 0.8, 64)
    assert curve["convex"] and curve["winding"] == 1
    assert zf.f_equation_degree(p, 0.3) == 4
    assert zf.f_equation_degree(zf.ZollProfile.example2(), 0.3) == 8


def test_round_sphere_ellipse():
    R = math.pi / 3
    for v1, v2 in zf.indicatrix_curve(zf.ZollProfile(), R, 100)["points"]:
        assert v1 * v1 + 0.25 * v2 * v2 == pytest.approx(1.0, abs=1e-10)


def test_finsler():
    fm = zf.FinslerMetric(zf.ZollProfile.example1(0.25))
    f = fm.F(0.3, 0.4, -0.2)
    assert fm.F(0.3, 1.2, -0.6) == pytest.approx(3 * f, rel=1e-12)
    (g11, g12), (_, g22) = fm.fundamental_tensor(0.3, 0.4, -0.2)
    assert g11 > 0 and g11 * g22 - g12 * g12 > 0
    v = fm.unit_direction(0.2, 0.3)
    tr = fm.geodesic(0.2, 0.0, v[0], v[1], t_end=2 * math.pi, samples_per_period=64)
    assert math.hypot(tr["R"][-1] - 0.2, math.remainder(tr["Theta"][-1], 2 * math.pi)) < 1e-3
    with pytest.raises(zf.ChartExitError):
        zf.FinslerMetric(zf.ZollProfile()).geodesic(0.0, 0.0, 1.0, 0.0)


def test_invariants():
    assert zf.invariants_IJ(zf.ZollProfile(), 1.0, 0.5) == (0.0, 0.0)
    assert zf.invariant_flow_check(zf.ZollProfile.example2(), 1.0, 0.7) < 1e-4
