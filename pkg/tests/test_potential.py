import math

import numpy as np
import pytest
from scipy.integrate import quad

from saddlesim import derive
from saddlesim.potential import (
    characteristic_length,
    field_intensity,
    force_and_curvature,
    stiffness,
    trap_depth,
)

from conftest import make_trap


def test_stiffness_at_time_zero_balanced_split():
    trap = make_trap(0.5, rotation_rate=1e5)
    k = stiffness(0.0, trap)
    assert k.kxx == pytest.approx(-0.5, abs=1e-15)
    assert k.kyy == pytest.approx(1.5, abs=1e-15)
    assert k.kxy == pytest.approx(0.0, abs=1e-15)


def test_stiffness_pure_gaussian_is_isotropic():
    trap = make_trap(0.0, rotation_rate=3e5)
    for t in np.linspace(0, 1e-4, 17):
        k = stiffness(float(t), trap)
        assert (k.kxx, k.kyy, k.kxy) == pytest.approx((1.0, 1.0, 0.0), abs=1e-15)


def test_stiffness_at_quarter_phase():
    omega = 2.7e5
    for i_l in (0.3, 0.5, 0.9):
        trap = make_trap(i_l, rotation_rate=omega)
        k = stiffness(math.pi / (4 * omega), trap)
        i_g = 1 - i_l
        assert k.kxx == pytest.approx(i_g, abs=1e-12)
        assert k.kyy == pytest.approx(i_g, abs=1e-12)
        assert k.kxy == pytest.approx(4 * math.sqrt(i_l * i_g), rel=1e-12)


def test_stiffness_trace_invariant_and_periodicity():
    trap = make_trap(0.7, rotation_rate=4.2e5)
    period = math.pi / trap.rotation_rate
    for t in np.linspace(0, 2 * period, 23):
        k = stiffness(float(t), trap)
        assert k.kxx + k.kyy == pytest.approx(2 * trap.i_g, abs=1e-14)
        k2 = stiffness(float(t) + period, trap)
        assert k2.kxx == pytest.approx(k.kxx, abs=1e-12)
        assert k2.kyy == pytest.approx(k.kyy, abs=1e-12)
        assert k2.kxy == pytest.approx(k.kxy, abs=1e-12)


def test_stiffness_rotation_covariance():
    """K(t) equals the t=0 quadratic form conjugated by a rotation of Omega t."""
    trap = make_trap(0.8, rotation_rate=3.1e5)
    m0 = stiffness(0.0, trap).matrix
    for t in np.linspace(0, 2e-5, 29):
        th = trap.rotation_rate * t
        r = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        expected = r @ m0 @ r.T
        assert np.allclose(stiffness(float(t), trap).matrix, expected, atol=1e-13)


def test_force_zero_at_origin(particle, reference):
    trap = make_trap(0.6, rotation_rate=2e5)
    d = derive(particle, trap, reference)
    for t in np.linspace(0, 1e-5, 7):
        force, _ = force_and_curvature(np.zeros(2), float(t), trap, d)
        assert np.allclose(force, 0.0)


def test_hessian_trace_and_determinant(particle, reference):
    trap = make_trap(0.5, rotation_rate=2e5)
    d = derive(particle, trap, reference)
    for t in np.linspace(0, 1e-5, 9):
        _, hess = force_and_curvature(np.zeros(2), float(t), trap, d)
        assert np.trace(hess) == pytest.approx(4 * d.v0 * trap.i_g, rel=1e-12)
    _, hess0 = force_and_curvature(np.zeros(2), 0.0, trap, d)
    assert np.linalg.det(hess0) == pytest.approx((2 * d.v0) ** 2 * (-0.75), rel=1e-12)


def test_force_is_linear_in_displacement(particle, reference):
    trap = make_trap(0.9, rotation_rate=2e5)
    d = derive(particle, trap, reference)
    r = np.array([3e-9, -2e-9])
    f1, h = force_and_curvature(r, 1.3e-6, trap, d)
    f2, _ = force_and_curvature(2 * r, 1.3e-6, trap, d)
    assert np.allclose(f2, 2 * f1, rtol=1e-12)
    assert np.allclose(f1, -h @ r, rtol=1e-12)


def test_on_axis_intensity_is_gaussian_only():
    for i_l in (0.0, 0.5, 0.9):
        trap = make_trap(i_l)
        w0 = trap.waist_m
        sample = field_intensity(0.0, 0.3, 0.0, 1.1, trap)
        assert sample.intensity == pytest.approx((1 - i_l) * 2 / (math.pi * w0**2), rel=1e-12)
    dark = field_intensity(0.0, 0.0, 0.0, 0.0, make_trap(1.0))
    assert dark.intensity == 0.0


def test_intensity_pi_periodic_in_azimuth():
    trap = make_trap(0.7)
    w0 = trap.waist_m
    rng = np.random.default_rng(5)
    for _ in range(40):
        r = rng.uniform(0, 2 * w0)
        phi = rng.uniform(0, 2 * math.pi)
        z = rng.uniform(-0.3, 0.3) * trap.wavenumber * w0**2
        theta = rng.uniform(0, math.pi)
        a = field_intensity(r, phi, z, theta, trap).intensity
        b = field_intensity(r, phi + math.pi, z, theta, trap).intensity
        assert a == pytest.approx(b, rel=1e-10, abs=1e-20)


def test_mode_power_normalization():
    """Each constituent mode and the full superposition carry unit power."""
    trap = make_trap(0.64)
    w0 = trap.waist_m

    def power(i_l):
        t = make_trap(i_l)
        return quad(
            lambda r: field_intensity(r, 0.25, 0.0, 0.4, t).intensity * 2 * math.pi * r,
            0,
            8 * w0,
            limit=200,
        )[0]

    # pure Gaussian, pure Laguerre pair, and a mixture; azimuthal cross terms
    # average out over phi, so integrate the worst case numerically in 2-D.
    assert power(0.0) == pytest.approx(1.0, rel=1e-9)
    assert power(1.0) == pytest.approx(1.0, rel=1e-9)

    rs = np.linspace(1e-9, 8 * w0, 4000)
    phis = np.linspace(0, 2 * math.pi, 96, endpoint=False)
    vals = np.array([[field_intensity(r, p, 0.0, 0.4, trap).intensity for p in phis] for r in rs])
    total = np.trapezoid(vals.mean(axis=1) * 2 * math.pi * rs, rs)
    assert total == pytest.approx(1.0, rel=1e-6)


def test_quadratic_form_matches_full_field(particle, reference):
    """Within 5% of the characteristic length the quadratic model is within 1%."""
    trap = make_trap(0.8)
    d = derive(particle, trap, reference)
    scale = characteristic_length(trap)
    kappa = 0.5 * math.pi * trap.waist_m**2 * d.depth_scale
    i0 = field_intensity(0.0, 0.0, 0.0, 0.0, trap).intensity
    k = stiffness(0.0, trap.with_settings(rotation_rate=1.0))
    rng = np.random.default_rng(11)
    for _ in range(25):
        x, y = rng.uniform(-0.05, 0.05, size=2) * scale
        r, phi = math.hypot(x, y), math.atan2(y, x)
        u_full = -kappa * (field_intensity(r, phi, 0.0, 0.0, trap).intensity - i0)
        u_quad = d.v0 * (k.kxx * x**2 + k.kyy * y**2 - k.kxy * x * y)
        assert u_full == pytest.approx(u_quad, rel=0.01)


def test_characteristic_length():
    assert characteristic_length(make_trap(1e-12)) == pytest.approx(make_trap(0.0).waist_m, rel=1e-5)
    trap = make_trap(0.5)
    assert characteristic_length(trap) == pytest.approx(trap.waist_m / math.sqrt(3), rel=1e-12)
    trap9 = make_trap(0.9)
    assert characteristic_length(trap9) == pytest.approx(trap9.waist_m / math.sqrt(7), rel=1e-12)
    assert characteristic_length(trap9) > 1e-7  # several hundred nanometers
    with pytest.raises(ValueError):
        characteristic_length(make_trap(1.0))


def test_trap_depth_trends(particle, reference):
    depths = []
    for i_l in np.arange(0.25, 1.0, 0.05):
        trap = make_trap(float(i_l))
        depths.append(trap_depth(trap, derive(particle, trap, reference)))
    assert all(a >= b for a, b in zip(depths, depths[1:]))
    near_dark = make_trap(0.999)
    assert trap_depth(near_dark, derive(particle, near_dark, reference)) < 1e-3 * depths[0]

    trap = make_trap(0.5)
    base = trap_depth(trap, derive(particle, trap, reference))
    double = make_trap(0.5, power=140e-3)
    assert trap_depth(double, derive(particle, double, reference)) == pytest.approx(2 * base, rel=1e-6)


def test_trap_depth_equals_gaussian_weight_times_depth_scale(particle, reference):
    """The stable-axis interference zero pins the barrier at I_G * depth scale."""
    for i_l in (0.3, 0.6, 0.9):
        trap = make_trap(i_l)
        d = derive(particle, trap, reference)
        assert trap_depth(trap, d) == pytest.approx(d.depth_scale * (1 - i_l), rel=1e-3)
