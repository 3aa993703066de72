"""Force-estimation sensitivity: response vectors, the quantum Fisher
information matrix, and the Cramer-Rao minimum detectable force.

A weak constant force enters the Hamiltonian as -F_x x - F_y y.  Because the
dynamics is linear, the derivative of the first-moment vector with respect to
the dimensionless force obeys the homogeneous mean flow with a constant unit
forcing in the conjugate momentum slot, independently of the covariance.  For
Gaussian states the information matrix is

    F_ij = 2 (dd/dF_i)^T  cov^-1  (dd/dF_j),

and the smallest resolvable SI force along axis q is
sqrt((F^-1)_qq) * hbar Omega_ref,q / q_zpf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar as HBAR

from .dynamics import DriveCoeffs, Trajectory, TrapSchedule, coefficients, max_step
from .params import DerivedParams, ParticleParams, ReferenceTweezer, TrapConfig


@dataclass
class SensitivitySet:
    """d(mean)/d(dimensionless force) on a trajectory time grid."""

    times: np.ndarray  # (n,)
    s_x: np.ndarray  # (n, 4)
    s_y: np.ndarray  # (n, 4)


@dataclass(frozen=True)
class ForceBound:
    qfim: np.ndarray  # (2, 2)
    min_force_x: float  # [N]
    min_force_y: float  # [N]
    time: float


def _sensitivity_rhs(t: float, s: np.ndarray, coeffs: DriveCoeffs, forcing: np.ndarray) -> np.ndarray:
    return s @ coeffs.drift_matrix(t).T + forcing


def sensitivities(
    schedule: TrapSchedule,
    step: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    sample_stride: int = 1,
) -> SensitivitySet:
    """Integrate the two force-response vectors alongside one another.

    The dimensionless force maps to SI via f_q = F_q hbar Omega_ref,q / q_zpf,
    which puts a constant sqrt(2) Omega_ref,q into the conjugate-momentum
    slot of the response equation.  Both responses start at zero (the force
    switches on at t = 0).
    """
    bound = max_step(particle, trap, ref, schedule)
    if step > bound * (1.0 + 1e-12):
        raise ValueError(f"step {step:.3e} s exceeds the resolution bound {bound:.3e} s")

    forcing = np.array(
        [
            [0.0, math.sqrt(2.0) * ref.frequency_x, 0.0, 0.0],
            [0.0, 0.0, 0.0, math.sqrt(2.0) * ref.frequency_y],
        ]
    )
    s = np.zeros((2, 4))
    t = 0.0
    times = [t]
    records = [s.copy()]
    for seg in schedule.segments:
        seg_trap = trap.with_settings(
            laguerre_fraction=seg.laguerre_fraction, rotation_rate=seg.rotation_rate, power=seg.power
        )
        if seg.duration == 0.0:
            continue
        coeffs = coefficients(particle, seg_trap, ref)
        n = max(1, int(math.ceil(seg.duration / step)))
        h = seg.duration / n
        t0 = t
        for i in range(n):
            k1 = _sensitivity_rhs(t, s, coeffs, forcing)
            k2 = _sensitivity_rhs(t + 0.5 * h, s + 0.5 * h * k1, coeffs, forcing)
            k3 = _sensitivity_rhs(t + 0.5 * h, s + 0.5 * h * k2, coeffs, forcing)
            k4 = _sensitivity_rhs(t + h, s + h * k3, coeffs, forcing)
            s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = t0 + (i + 1) * h
            if (i + 1) % sample_stride == 0 or i == n - 1:
                times.append(t)
                records.append(s.copy())
    arr = np.array(records)
    return SensitivitySet(times=np.array(times), s_x=arr[:, 0, :], s_y=arr[:, 1, :])


def qfim(
    s_x: np.ndarray,
    s_y: np.ndarray,
    cov: np.ndarray,
    derived: DerivedParams,
    ref: ReferenceTweezer,
    time: float = 0.0,
) -> ForceBound:
    """Information matrix and minimum detectable force at one instant.

    A singular information matrix (for example at t = 0 where the responses
    vanish) yields infinite minimum force for the unresolvable directions
    rather than an error.
    """
    inv_cov = np.linalg.inv(cov)
    f = 2.0 * np.array(
        [
            [s_x @ inv_cov @ s_x, s_x @ inv_cov @ s_y],
            [s_x @ inv_cov @ s_y, s_y @ inv_cov @ s_y],
        ]
    )
    conv_x = HBAR * ref.frequency_x / derived.x_zpf
    conv_y = HBAR * ref.frequency_y / derived.y_zpf
    det = f[0, 0] * f[1, 1] - f[0, 1] * f[1, 0]
    scale = max(f[0, 0], f[1, 1], 0.0)
    if det <= 1e-30 * max(scale, 1.0) ** 2:
        inv_xx = math.inf if f[0, 0] <= 0 or det <= 0 else f[1, 1] / det
        inv_yy = math.inf if f[1, 1] <= 0 or det <= 0 else f[0, 0] / det
    else:
        inv_xx = f[1, 1] / det
        inv_yy = f[0, 0] / det
    return ForceBound(
        qfim=f,
        min_force_x=math.sqrt(inv_xx) * conv_x if math.isfinite(inv_xx) else math.inf,
        min_force_y=math.sqrt(inv_yy) * conv_y if math.isfinite(inv_yy) else math.inf,
        time=time,
    )


def force_bound_series(
    trajectory: Trajectory,
    sens: SensitivitySet,
    derived: DerivedParams,
    ref: ReferenceTweezer,
) -> list[ForceBound]:
    """Pointwise bounds along a trajectory sharing the sensitivity time grid.

    The trajectory covariance must be force-independent, which holds here
    because the covariance equations never see the constant force.
    """
    if len(trajectory.times) != len(sens.times) or not np.allclose(
        trajectory.times, sens.times, rtol=0.0, atol=1e-12
    ):
        raise ValueError("trajectory and sensitivity grids differ")
    out = []
    for i in range(len(sens.times)):
        out.append(
            qfim(
                sens.s_x[i],
                sens.s_y[i],
                trajectory.covs[i],
                derived,
                ref,
                time=float(sens.times[i]),
            )
        )
    return out
