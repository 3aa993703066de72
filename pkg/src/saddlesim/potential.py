"""Time-dependent quadratic stiffness and the underlying structured-light field.

The trapping field is a coherent superposition of a fundamental Gaussian mode
and two Laguerre-Gauss modes of opposite azimuthal charge l = +/-2 with a
tunable relative phase theta.  Near the axis the resulting dipole potential is
the rotating quadratic form

    V(x, y, t) = v0 [k_-(t) x^2 + k_+(t) y^2 - k_xy(t) x y],

with k_+/-(t) = I_G +/- 2 sqrt(I_L I_G) cos(2 Omega t) and
k_xy(t) = 4 sqrt(I_L I_G) sin(2 Omega t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .params import DerivedParams, TrapConfig


@dataclass(frozen=True)
class StiffnessMatrix:
    """Dimensionless stiffness coefficients at one instant."""

    kxx: float
    kyy: float
    kxy: float
    time: float

    @property
    def matrix(self) -> np.ndarray:
        """Quadratic-form matrix M with V = v0 * r^T M r."""
        return np.array([[self.kxx, -self.kxy / 2.0], [-self.kxy / 2.0, self.kyy]])


@dataclass(frozen=True)
class FieldSample:
    """One evaluation point of the normalized intensity |E|^2 / E0^2."""

    r: float
    phi: float
    z: float
    intensity: float

    def __post_init__(self):
        if self.intensity < 0:
            raise ValueError("intensity cannot be negative")


def stiffness_coefficients(t: float, trap: TrapConfig) -> tuple[float, float, float]:
    """(k_minus, k_plus, k_xy) at time t for the trap's rotation rate."""
    i_g = trap.i_g
    s = 2.0 * math.sqrt(trap.i_l * i_g)
    phase = 2.0 * trap.rotation_rate * t
    c = math.cos(phase)
    return i_g - s * c, i_g + s * c, 2.0 * s * math.sin(phase)


def stiffness(t: float, trap: TrapConfig) -> StiffnessMatrix:
    km, kp, kxy = stiffness_coefficients(t, trap)
    return StiffnessMatrix(kxx=km, kyy=kp, kxy=kxy, time=t)


def force_and_curvature(
    mean_xy: np.ndarray, t: float, trap: TrapConfig, derived: DerivedParams
) -> tuple[np.ndarray, np.ndarray]:
    """SI force vector -grad V at the mean position, and the Hessian of V.

    The potential is exactly quadratic, so the force is linear in (x, y) and
    the Hessian 2 v0 [[k_-, -k_xy/2], [-k_xy/2, k_+]] is position-independent.
    """
    km, kp, kxy = stiffness_coefficients(t, trap)
    x, y = float(mean_xy[0]), float(mean_xy[1])
    v0 = derived.v0
    force = np.array([-v0 * (2.0 * km * x - kxy * y), -v0 * (2.0 * kp * y - kxy * x)])
    hessian = 2.0 * v0 * np.array([[km, -kxy / 2.0], [-kxy / 2.0, kp]])
    return force, hessian


def _gauss_params(z: float, w0: float, k: float) -> tuple[float, float, float]:
    """Beam radius w(z), inverse curvature 1/R(z), and Gouy phase psi(z)."""
    z_r = 0.5 * k * w0**2
    w = w0 * math.sqrt(1.0 + (z / z_r) ** 2)
    inv_radius = z / (z**2 + z_r**2)
    psi = math.atan2(z, z_r)
    return w, inv_radius, psi


def _mode_fundamental(r: float, z: float, w0: float, k: float) -> complex:
    w, inv_r, psi = _gauss_params(z, w0, k)
    amp = math.sqrt(2.0 / math.pi) / w * math.exp(-(r**2) / w**2)
    phase = -k * r**2 * inv_r / 2.0 + psi
    return amp * complex(math.cos(phase), math.sin(phase))


def _mode_charge2(r: float, phi: float, z: float, w0: float, k: float, sign: int) -> complex:
    w, inv_r, psi = _gauss_params(z, w0, k)
    amp = math.sqrt(1.0 / math.pi) * 2.0 * r**2 / w**3 * math.exp(-(r**2) / w**2)
    phase = -k * r**2 * inv_r / 2.0 + sign * 2.0 * phi + 3.0 * psi
    return amp * complex(math.cos(phase), math.sin(phase))


def field_intensity(r: float, phi: float, z: float, theta: float, trap: TrapConfig) -> FieldSample:
    """Normalized intensity of the three-mode superposition at one point.

    theta is the relative phase of the l = +/-2 components; a rotating trap
    corresponds to theta = Omega t.  Each constituent mode is normalized to
    unit transverse power, so the weights sqrt(I_G), sqrt(I_L/2) make the
    total carry unit power.
    """
    w0 = trap.waist_m
    k = trap.wavenumber
    field = math.sqrt(trap.i_g) * _mode_fundamental(r, z, w0, k)
    half = math.sqrt(trap.i_l / 2.0)
    rot = complex(math.cos(2.0 * theta), -math.sin(2.0 * theta))
    field += half * _mode_charge2(r, phi, z, w0, k, +1) * rot
    field += half * _mode_charge2(r, phi, z, w0, k, -1) * rot.conjugate()
    return FieldSample(r=r, phi=phi, z=z, intensity=abs(field) ** 2)


def characteristic_length(trap: TrapConfig) -> float:
    """Displacement scale below which the quadratic approximation holds.

    L = w0 / sqrt(1 + 2 sqrt(I_L / I_G)); diverges as I_G -> 0 where the
    quartic Laguerre core dominates at any amplitude.
    """
    if trap.i_g <= 0.0:
        raise ValueError("characteristic length undefined for I_G = 0 (ratio I_L/I_G diverges)")
    return trap.waist_m / math.sqrt(1.0 + 2.0 * math.sqrt(trap.i_l / trap.i_g))


def trap_depth(trap: TrapConfig, derived: DerivedParams) -> float:
    """Potential barrier [J] from the origin along the instantaneously stable axis.

    At theta = 0 the stable axis is y, where the Gaussian and Laguerre
    amplitudes interfere destructively; the barrier top is the intensity
    minimum of the 1-D profile.  Found by numerical minimization of the full
    (non-quadratic) intensity; returns zero when the origin is not an
    intensity maximum along the ray (no barrier).
    """
    w0 = trap.waist_m

    def intensity_along_stable_axis(rho: float) -> float:
        return field_intensity(rho * w0, math.pi / 2.0, 0.0, 0.0, trap).intensity

    at_origin = field_intensity(0.0, 0.0, 0.0, 0.0, trap).intensity
    result = minimize_scalar(intensity_along_stable_axis, bounds=(1e-9, 3.0), method="bounded")
    lowest = min(float(result.fun), intensity_along_stable_axis(3.0))
    barrier = at_origin - lowest
    if barrier <= 0.0:
        return 0.0
    # depth_scale absorbs Re{a} P / (c pi eps0 w0^2); the normalized intensity
    # carries the remaining 1/(pi w0^2)-type geometry, so rescale by pi w0^2/2.
    return 0.5 * math.pi * w0**2 * derived.depth_scale * barrier
