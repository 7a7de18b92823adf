import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lssa.errors import CalibrationError, DomainError, UsageError
from lssa.fitting import LSSA_STIFFNESS, Polynomial, evaluate
from lssa.force_model import (AreaProfile, ExtensionStatus, LssaModel, OperatingPoint,
                              axial_stiffness, calibrate_area_profile, calibrate_effective_area,
                              dead_band_pressure, free_extension, net_force,
                              pressure_components)
from lssa.geometry import ActuatorGeometry, ConstantAngle, LinearUnfold

A_CAL = 8.942032e-4          # (112 - 0.2246) / 125000, m^2
G = ActuatorGeometry(r1o=0.02, r1i=0.01, r2i=0.015, r3i=0.010, s=0.005, theta0=0.0)
CONST = LssaModel(area_override=AreaProfile.constant(A_CAL))


def fk(y):
    return 4.1481e-4 * y**3 + 1.2865e-2 * y**2 + 2.0789 * y - 0.2246


def bisect(f, lo, hi, n=200):
    """Plain bisection, independent of the library's solver."""
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if (f(lo) > 0) == (f(mid) > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_pressure_components_zero_pressure():
    assert pressure_components(LssaModel(G), 0.0, 5.0) == (0.0, 0.0, 0.0)


def test_pressure_components_example():
    f1, f2, f3 = pressure_components(LssaModel(G, ConstantAngle()), 125e3, 0.0)
    assert f1 == pytest.approx(117.810, abs=1e-3)
    assert f2 == pytest.approx(68.722, abs=1e-3)
    assert f3 == pytest.approx(49.087, abs=1e-3)


def test_pressure_components_vertical_folds():
    g = ActuatorGeometry(0.02, 0.01, 0.015, 0.010, 0.005, math.pi / 2)
    _, f2, f3 = pressure_components(LssaModel(g, ConstantAngle()), 100e3, 3.0)
    assert f2 == pytest.approx(0, abs=1e-12) and f3 == pytest.approx(0, abs=1e-12)


def test_pressure_components_need_geometry():
    with pytest.raises(UsageError):
        pressure_components(CONST, 1e5, 0.0)


@pytest.mark.parametrize("y", [-0.1, 40.1])
def test_out_of_range_displacement(y):
    with pytest.raises(DomainError):
        net_force(CONST, 1e5, y)


def test_negative_pressure():
    with pytest.raises(DomainError):
        net_force(CONST, -1.0, 0.0)


def test_net_force_anchor():
    assert net_force(CONST, 125e3, 0.0) == pytest.approx(112.0, abs=1e-9)


def test_net_force_zero_pressure():
    assert net_force(CONST, 0.0, 0.0) == pytest.approx(0.2246, abs=1e-15)


def test_net_force_components_sum():
    m = LssaModel(G, LinearUnfold())
    for y in (0.0, 3.0, 12.0):
        f1, f2, f3 = pressure_components(m, 90e3, y)
        assert net_force(m, 90e3, y) == pytest.approx(f1 + f2 - f3 - fk(y), rel=1e-12)


def test_net_force_near_zero_at_equilibrium():
    y_star = bisect(lambda y: 125e3 * A_CAL - fk(y), 0.0, 40.0)
    assert y_star == pytest.approx(36.2446, abs=1e-4)
    assert abs(net_force(CONST, 125e3, y_star)) < 0.05


@given(st.floats(0, 40), st.floats(0, 3e5), st.floats(0, 3e5))
def test_net_force_affine_in_pressure(y, p1, p2):
    m = LssaModel(G, LinearUnfold())
    assert net_force(m, 0.0, y) == pytest.approx(-fk(y), rel=1e-12, abs=1e-15)
    if abs(p2 - p1) > 1.0:
        slope = (net_force(m, p2, y) - net_force(m, p1, y)) / (p2 - p1)
        assert slope == pytest.approx(m.effective_area(y), rel=1e-9)


def test_secant_slope_tight():
    m = LssaModel(G, ConstantAngle())
    for y in (0.0, 20.0, 40.0):
        slope = (net_force(m, 150e3, y) - net_force(m, 50e3, y)) / 100e3
        assert slope == pytest.approx(m.effective_area(y), rel=1e-12)


def test_net_force_decreasing_under_constant_angle():
    m = LssaModel(G, ConstantAngle())
    ys = np.linspace(0, 40, 401)
    f = [net_force(m, 125e3, y) for y in ys]
    assert all(b < a for a, b in zip(f, f[1:]))


@pytest.mark.parametrize("y, k", [(0.0, 2.0789), (10.0, 0.124443 + 0.2573 + 2.0789)])
def test_axial_stiffness_values(y, k):
    assert axial_stiffness(CONST, y) == pytest.approx(k, abs=1e-12)


def test_axial_stiffness_printed_precision():
    assert axial_stiffness(CONST, 10.0) == pytest.approx(2.46064, abs=5e-6)


@given(st.floats(1e-3, 40 - 1e-3))
def test_axial_stiffness_vs_finite_difference(y):
    h = 1e-4
    fd = (fk(y + h) - fk(y - h)) / (2 * h)
    assert axial_stiffness(CONST, y) == pytest.approx(fd, rel=1e-6)
    analytic = 3 * 4.1481e-4 * y**2 + 2 * 1.2865e-2 * y + 2.0789
    assert axial_stiffness(CONST, y) == pytest.approx(analytic, rel=1e-12)


def test_free_extension_calibrated():
    res = free_extension(CONST, 125e3, 0.0)
    assert res.status is ExtensionStatus.EQUILIBRIUM
    oracle = bisect(lambda y: 125e3 * A_CAL - fk(y), 0.0, 40.0)
    assert res.displacement == pytest.approx(oracle, abs=1e-6)
    assert res.displacement == pytest.approx(36.26, abs=0.05)


def test_free_extension_without_pressure():
    res = free_extension(CONST, 0.0, 0.0)
    assert res.displacement == pytest.approx(0.10797, abs=1e-4)
    assert res.displacement == pytest.approx(bisect(lambda y: -fk(y), 0.0, 40.0), abs=1e-6)


def test_free_extension_blocked():
    res = free_extension(CONST, 0.0, 100.0)
    assert res.status is ExtensionStatus.BLOCKED and res.displacement == 0.0
    assert res.flagged


def test_free_extension_saturated():
    res = free_extension(CONST, 400e3, 0.0)
    assert res.status is ExtensionStatus.SATURATED and res.displacement == 40.0


@settings(deadline=None)
@given(p=st.floats(0, 4e5), load=st.floats(0, 300),
       kin=st.sampled_from([ConstantAngle(), LinearUnfold()]))
def test_free_extension_consistency(p, load, kin):
    m = LssaModel(G, kin)
    res = free_extension(m, p, load)
    if not res.flagged:
        assert abs(net_force(m, p, res.displacement) - load) < 1e-6
    elif res.status is ExtensionStatus.BLOCKED:
        assert net_force(m, p, 0.0) < load
    else:
        assert net_force(m, p, m.y_max) > load


def test_dead_band_values():
    assert dead_band_pressure(CONST, 0.0, 0.0) == 0.0
    assert dead_band_pressure(CONST, 3.5 * 9.81, 0.0) == pytest.approx(
        (34.335 - 0.2246) / A_CAL, rel=1e-12)
    assert dead_band_pressure(CONST, 3.5 * 9.81, 0.0) / 1e3 == pytest.approx(38.15, abs=0.005)
    assert dead_band_pressure(CONST, 9.81, 0.0) / 1e3 == pytest.approx(10.72, abs=0.005)


@given(st.floats(0, 500), st.floats(0, 40))
def test_dead_band_balances_load(load, y0):
    p = dead_band_pressure(CONST, load, y0)
    if p > 0:
        assert net_force(CONST, p, y0) == pytest.approx(load, abs=1e-9)
    else:
        assert load <= -fk(y0) + 1e-12


@given(st.floats(0, 500), st.floats(0, 500))
def test_dead_band_monotone_in_load(l1, l2):
    lo, hi = sorted((l1, l2))
    assert dead_band_pressure(CONST, lo) <= dead_band_pressure(CONST, hi)


def test_calibrate_effective_area():
    assert calibrate_effective_area(125e3, 0.0, 112.0) == pytest.approx(A_CAL, rel=1e-12)


def test_calibrate_effective_area_exact_inverse():
    a = calibrate_effective_area(125e3, 17.0, 50.0)
    m = LssaModel(area_override=AreaProfile.constant(a))
    assert net_force(m, 125e3, 17.0) == pytest.approx(50.0, abs=1e-12)


def test_calibrate_effective_area_linear_in_pressure():
    a1 = calibrate_effective_area(125e3, 10.0, 60.0)
    f2 = 2 * (60.0 + fk(10.0)) - fk(10.0)
    assert calibrate_effective_area(250e3, 10.0, f2) == pytest.approx(a1, rel=1e-12)


def test_calibrate_effective_area_degenerate():
    with pytest.raises(CalibrationError):
        calibrate_effective_area(125e3, 0.0, 0.2246)
    with pytest.raises(UsageError):
        calibrate_effective_area(0.0, 0.0, 100.0)


SWEEP_125KPA = [OperatingPoint(125e3, y, f) for y, f in
         [(0, 112), (10, 72), (20, 41), (30, 19), (40, 0)]]


def test_calibrate_profile_reference(caplog):
    with caplog.at_level(logging.WARNING):
        prof = calibrate_area_profile(SWEEP_125KPA)
    oracle = [(f + fk(y)) / 125e3 for y, f in [(0, 112), (10, 72), (20, 41), (30, 19), (40, 0)]]
    np.testing.assert_allclose(prof.areas, oracle, rtol=1e-13)
    np.testing.assert_allclose(prof.areas, (8.9420e-4, 7.5413e-4, 7.2654e-4, 8.3137e-4,
                                            1.0405e-3), atol=1e-8)
    assert prof.non_monotone
    assert "not monotonically decreasing" in caplog.text
    m = CONST.with_area(prof)
    for p in SWEEP_125KPA:
        assert abs(net_force(m, p.pressure, p.displacement) - p.force) < 1e-9


def test_calibrate_profile_constant_round_trip():
    m = LssaModel(area_override=AreaProfile.constant(9e-4))
    pts = [OperatingPoint(1e5, y, net_force(m, 1e5, y)) for y in (5.0, 25.0)]
    prof = calibrate_area_profile(pts)
    np.testing.assert_allclose(prof.areas, 9e-4, rtol=1e-12)
    assert not prof.non_monotone


def test_calibrate_profile_idempotent():
    prof = calibrate_area_profile(SWEEP_125KPA)
    m = CONST.with_area(prof)
    again = calibrate_area_profile([OperatingPoint(125e3, y, net_force(m, 125e3, y))
                                    for y in prof.displacements])
    np.testing.assert_allclose(again.areas, prof.areas, rtol=1e-12)


def test_calibrate_profile_rejects_duplicates():
    with pytest.raises(UsageError):
        calibrate_area_profile([OperatingPoint(1e5, 1.0, 10.0), OperatingPoint(1e5, 1.0, 20.0)])


def test_calibrate_profile_needs_two_points():
    with pytest.raises(UsageError):
        calibrate_area_profile([OperatingPoint(1e5, 1.0, 10.0)])


def test_area_profile_interpolation():
    prof = AreaProfile(((0.0, 1e-3), (10.0, 2e-3)))
    assert prof(5.0) == pytest.approx(1.5e-3)
    assert prof(20.0) == 2e-3
    with pytest.raises(UsageError):
        AreaProfile(((1.0, 1e-3), (1.0, 2e-3)))
    with pytest.raises(DomainError):
        AreaProfile(((0.0, 0.0),))


def test_model_validation():
    with pytest.raises(UsageError):
        LssaModel()
    with pytest.raises(UsageError):
        LssaModel(G, stiffness=Polynomial((1, 0, 0, 0, 0)))
    with pytest.raises(UsageError):
        LssaModel(G, y_max=0.0)


def test_negative_constant_term_preserved():
    assert CONST.stiffness_force(0.0) == -0.2246
    assert evaluate(LSSA_STIFFNESS, 0.0) == -0.2246
