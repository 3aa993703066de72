import math

import pytest

from saddlesim import ParticleParams, ReferenceTweezer, TrapConfig


@pytest.fixture
def particle():
    return ParticleParams(radius=50e-9, density=1850.0, relative_permittivity=2.1)


@pytest.fixture
def reference():
    return ReferenceTweezer(
        frequency_x=2 * math.pi * 150e3,
        frequency_y=2 * math.pi * 150e3,
        occupation_x=0.8,
        occupation_y=0.8,
    )


def make_trap(laguerre_fraction: float, rotation_rate: float = 0.0, power: float = 70e-3) -> TrapConfig:
    return TrapConfig(
        power=power,
        wavelength=1.55e-6,
        numerical_aperture=0.6,
        laguerre_fraction=laguerre_fraction,
        rotation_rate=rotation_rate,
    )


@pytest.fixture
def trap90():
    return make_trap(0.9)


@pytest.fixture
def trap50():
    return make_trap(0.5)
