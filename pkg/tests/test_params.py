import math

import pytest
from scipy.constants import hbar

from saddlesim import (
    ParticleParams,
    ReferenceTweezer,
    TrapConfig,
    absorbed_ratio,
    derive,
    localization_rate,
    recoil_rate,
)

from conftest import make_trap


def test_mass_from_sphere_volume(particle, reference, trap90):
    d = derive(particle, trap90, reference)
    expected = (4.0 / 3.0) * math.pi * (50e-9) ** 3 * 1850.0
    assert d.mass == pytest.approx(expected, rel=1e-12)
    assert d.mass == pytest.approx(9.69e-19, rel=2e-3)


def test_zero_point_amplitude(particle, reference, trap90):
    d = derive(particle, trap90, reference)
    expected = math.sqrt(hbar / (2.0 * d.mass * reference.frequency_x))
    assert d.x_zpf == pytest.approx(expected, rel=1e-12)
    assert d.x_zpf == pytest.approx(7.6e-12, rel=2e-3)


def test_clausius_mossotti_polarizability(particle):
    from scipy.constants import epsilon_0

    expected = 4 * math.pi * epsilon_0 * (50e-9) ** 3 * 1.1 / 4.1
    assert particle.polarizability == pytest.approx(expected, rel=1e-12)


def test_pure_laguerre_trap_has_no_recoil(particle, reference):
    trap = make_trap(1.0)
    d = derive(particle, trap, reference)
    assert d.recoil_rate_x == 0.0
    assert d.recoil_rate_y == 0.0
    assert d.localization_rate_x == 0.0


def test_recoil_anisotropy_ratio(particle, reference, trap90):
    d = derive(particle, trap90, reference)
    assert d.recoil_rate_y / d.recoil_rate_x == pytest.approx(2.0, rel=1e-12)


def test_recoil_scalings(particle, trap90):
    """Linear in P and I_G, quadratic in polarizability, quintic in k, 1/Omega."""
    base = recoil_rate(particle, trap90, 1e6, "x")
    double_p = recoil_rate(particle, make_trap(0.9, power=140e-3), 1e6, "x")
    assert double_p == pytest.approx(2 * base, rel=1e-12)

    half_ig = recoil_rate(particle, make_trap(0.95), 1e6, "x")
    assert half_ig == pytest.approx(0.5 * base, rel=1e-12)

    assert recoil_rate(particle, trap90, 2e6, "x") == pytest.approx(base / 2.0, rel=1e-12)

    fat = ParticleParams(radius=50e-9, density=1850.0, relative_permittivity=3.5)
    ratio = (fat.polarizability / particle.polarizability) ** 2
    assert recoil_rate(fat, trap90, 1e6, "x") == pytest.approx(base * ratio, rel=1e-12)

    half_wavelength = TrapConfig(
        power=70e-3,
        wavelength=1.55e-6 / 2,
        numerical_aperture=0.6,
        laguerre_fraction=0.9,
        waist=trap90.waist_m,
    )
    assert recoil_rate(particle, half_wavelength, 1e6, "x") == pytest.approx(base * 32.0, rel=1e-12)


def test_localization_rate_formula():
    assert localization_rate(100.0, 7.6e-12) == pytest.approx(100.0 / (2 * 7.6e-12**2), rel=1e-12)
    assert localization_rate(0.0, 7.6e-12) == 0.0


def test_localization_rate_pairing_is_frequency_invariant(particle, reference, trap90):
    """Gamma(Omega)/q_zpf(Omega)^2 must not depend on the quoted frequency."""
    d = derive(particle, trap90, reference)
    for omega in (1e4, 1e5, 1e6):
        zpf = math.sqrt(hbar / (2 * d.mass * omega))
        lam = localization_rate(recoil_rate(particle, trap90, omega, "x"), zpf)
        assert lam == pytest.approx(2.0 * d.localization_rate_x, rel=1e-12)


def test_absorbed_ratio(trap90):
    assert absorbed_ratio(trap90) == pytest.approx(0.1, abs=1e-15)
    assert absorbed_ratio(make_trap(0.0)) == 1.0
    assert absorbed_ratio(make_trap(0.5)) == 0.5


def test_curvature_frequencies(particle, reference):
    d = derive(particle, make_trap(0.5), reference)
    s = math.sqrt(0.25)
    assert d.omega_sq_x == pytest.approx(2 * d.v0 * (2 * s - 0.5) / d.mass, rel=1e-12)
    assert d.omega_sq_y == pytest.approx(2 * d.v0 * (2 * s + 0.5) / d.mass, rel=1e-12)
    assert d.omega_sq_y > d.omega_sq_x


def test_static_stiffness_sign_flips_at_one_fifth(particle, reference):
    """k_-(0) = I_G - 2 sqrt(I_G I_L) is negative exactly for I_L > 0.2."""
    for i_l, saddle in ((0.1, False), (0.19, False), (0.21, True), (0.9, True)):
        i_g = 1 - i_l
        k_minus = i_g - 2 * math.sqrt(i_g * i_l)
        assert (k_minus < 0) == saddle
        d = derive(particle, make_trap(i_l), reference)
        assert (d.omega_sq_x > 0) == saddle


def test_derive_is_deterministic(particle, reference, trap90):
    a = derive(particle, trap90, reference)
    b = derive(particle, trap90, reference)
    assert a == b


def test_dipole_regime_rejected(reference):
    big = ParticleParams(radius=400e-9, density=1850.0, relative_permittivity=2.1)
    with pytest.raises(ValueError, match="dipole"):
        derive(big, make_trap(0.9), reference)


def test_invalid_inputs_rejected():
    with pytest.raises(ValueError):
        ParticleParams(radius=50e-9, density=1850.0, relative_permittivity=0.9)
    with pytest.raises(ValueError):
        ParticleParams(radius=-1e-9, density=1850.0, relative_permittivity=2.1)
    with pytest.raises(ValueError):
        TrapConfig(power=70e-3, wavelength=1.55e-6, numerical_aperture=0.6, laguerre_fraction=1.2)
    with pytest.raises(ValueError):
        ReferenceTweezer(frequency_x=0.0, frequency_y=1.0)
    with pytest.raises(ValueError):
        recoil_rate(
            ParticleParams(radius=50e-9, density=1850.0, relative_permittivity=2.1),
            make_trap(0.9),
            -1.0,
            "x",
        )
