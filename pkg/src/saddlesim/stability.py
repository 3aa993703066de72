"""Rotational stability of the saddle trap.

Two independent routes are provided: the closed-form threshold rotation rate,
and Floquet analysis of the 4x4 linear time-periodic classical equations of
motion over one stiffness period T = pi / Omega.  The monodromy matrix is
built with fixed-step fourth-order integration so its determinant stays at
the symplectic value to tight tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedParams, TrapConfig
from .potential import stiffness_coefficients

MULTIPLIER_TOLERANCE = 1e-6


@dataclass(frozen=True)
class StabilityReport:
    threshold_omega0: float  # [rad/s]
    is_stable: bool
    floquet_multipliers: tuple[complex, complex, complex, complex]
    mode_frequencies: tuple[float, float]  # folded to [0, pi/T] [rad/s]
    beating_frequency: float  # [rad/s]


def threshold(trap: TrapConfig, derived: DerivedParams) -> float:
    """Closed-form critical rotation rate; 0.0 when no saddle exists.

    For I_L <= 0.2 the t = 0 potential is statically confining and no rotation
    is needed; the sentinel 0.0 is returned.  With gamma = 0 the expression
    reduces exactly to the stable-axis curvature frequency omega_y.
    """
    if trap.i_l <= 0.2:
        return 0.0
    wx2 = derived.omega_sq_x
    wy2 = derived.omega_sq_y
    g2 = trap.gas_damping**2
    inner = math.sqrt((g2 + wx2 - wy2) ** 2 + 4.0 * wx2 * wy2)
    return math.sqrt((-g2 + wy2 - wx2 + inner) / 2.0)


def _drift_matrix(t: float, trap: TrapConfig, derived: DerivedParams, gamma: float) -> np.ndarray:
    """Classical drift in (x, vx, y, vy) coordinates."""
    km, kp, kxy = stiffness_coefficients(t, trap)
    a = derived.v0 / derived.mass
    return np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [-2.0 * a * km, -gamma, a * kxy, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [a * kxy, 0.0, -2.0 * a * kp, -gamma],
        ]
    )


def monodromy(trap: TrapConfig, derived: DerivedParams, omega: float, gamma: float = 0.0) -> np.ndarray:
    """One-period fundamental matrix of the linearized classical motion."""
    if omega <= 0:
        raise ValueError("rotation rate must be positive")
    trap = trap.with_settings(rotation_rate=omega)
    period = math.pi / omega
    omega_max = max(
        omega,
        math.sqrt(abs(derived.omega_sq_x)),
        math.sqrt(derived.omega_sq_y),
    )
    steps = max(400, int(math.ceil(80.0 * omega_max * period)))
    h = period / steps
    phi = np.eye(4)
    for i in range(steps):
        t = i * h
        k1 = _drift_matrix(t, trap, derived, gamma) @ phi
        k2 = _drift_matrix(t + 0.5 * h, trap, derived, gamma) @ (phi + 0.5 * h * k1)
        k3 = _drift_matrix(t + 0.5 * h, trap, derived, gamma) @ (phi + 0.5 * h * k2)
        k4 = _drift_matrix(t + h, trap, derived, gamma) @ (phi + h * k3)
        phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(phi)):
            raise RuntimeError(f"monodromy integration failed at step {i} (step size {h:.3e} s)")
    return phi


def floquet(trap: TrapConfig, derived: DerivedParams, omega: float, gamma: float = 0.0) -> StabilityReport:
    """Floquet stability verdict, mode frequencies, and beating frequency.

    Stability requires every multiplier modulus to stay within 1 + 1e-6.
    Multiplier phases are folded to the first zone [0, Omega]; in the operating
    regime (mode frequencies below the rotation rate) the folding is the
    identity, so no branch tracking is needed.  The beating frequency is the
    arithmetic mean of the two folded mode frequencies, which at fast rotation
    converges to the average-trap value sqrt(2 v0 I_G / m).
    """
    phi = monodromy(trap, derived, omega, gamma)
    period = math.pi / omega
    multipliers = np.linalg.eigvals(phi)
    stable = bool(np.all(np.abs(multipliers) <= 1.0 + MULTIPLIER_TOLERANCE))
    folded = np.sort(np.abs(np.angle(multipliers)) / period)
    mode_freqs = (float(folded[0]), float(folded[2]))
    return StabilityReport(
        threshold_omega0=threshold(trap, derived),
        is_stable=stable,
        floquet_multipliers=tuple(complex(m) for m in multipliers),
        mode_frequencies=mode_freqs,
        beating_frequency=0.5 * (mode_freqs[0] + mode_freqs[1]),
    )


def beating_frequency(trap: TrapConfig, derived: DerivedParams, omega: float, gamma: float = 0.0) -> float:
    return floquet(trap, derived, omega, gamma).beating_frequency
