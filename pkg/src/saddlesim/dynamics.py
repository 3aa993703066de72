"""Unconditional Gaussian-moment dynamics under the rotating saddle stiffness.

The state is carried as a flat 14-vector in dimensionless quadrature units:

    y = [<x>, <p_x>, <y>, <p_y>,
         s_xx, s_pxpx, s_yy, s_pypy,
         C_xy, C_xpx, C_xpy, C_ypx, C_ypy, C_pxpy]

(4 first moments followed by the 10 independent covariance entries).  The
potential is quadratic, so these moments close exactly; photon recoil enters
as momentum diffusion on the two momentum variances.  Integration is
fixed-step classical fourth-order for reproducibility; the step must resolve
the fastest of the rotation rate and the trap curvature frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PhysicalityError
from .gaussian import GaussianState, is_physical
from .params import DerivedParams, ParticleParams, ReferenceTweezer, TrapConfig, derive

MEAN_SLICE = slice(0, 4)
COV_ORDER = (
    "s_xx",
    "s_pxpx",
    "s_yy",
    "s_pypy",
    "C_xy",
    "C_xpx",
    "C_xpy",
    "C_ypx",
    "C_ypy",
    "C_pxpy",
)

# Minimum number of integrator steps per fastest period.
STEPS_PER_PERIOD = 200


@dataclass(frozen=True)
class Segment:
    """One piecewise-constant stretch of trap settings.

    Zero-duration segments are allowed and skipped by the integrators.
    """

    duration: float  # [s]
    rotation_rate: float  # [rad/s]
    laguerre_fraction: float
    power: float  # [W]

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("segment durations must be non-negative")


@dataclass(frozen=True)
class TrapSchedule:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a schedule needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)


class DriveCoeffs:
    """Precomputed scalar coefficients of the moment equations (one segment).

    In internal units the equations read

        d<x>/dt   = orx <p_x>
        d<p_x>/dt = -Gx(t) <x> + Gc(t) <y> - gamma <p_x>
        Gx(t) = ax_c - ax_m cos(2 Omega t)
        Gy(t) = ay_c + ay_m cos(2 Omega t)
        Gc(t) = ac sin(2 Omega t)

    with ax_c = 2 v0 I_G / (m orx) etc.; dpx/dpy are the momentum-variance
    diffusion rates 2 Lambda_x l_x^2 and the y analogue.
    """

    __slots__ = ("orx", "ory", "ax_c", "ax_m", "ay_c", "ay_m", "ac", "omega", "gamma", "dpx", "dpy")

    def __init__(self, orx, ory, ax_c, ax_m, ay_c, ay_m, ac, omega, gamma, dpx, dpy):
        self.orx = orx
        self.ory = ory
        self.ax_c = ax_c
        self.ax_m = ax_m
        self.ay_c = ay_c
        self.ay_m = ay_m
        self.ac = ac
        self.omega = omega
        self.gamma = gamma
        self.dpx = dpx
        self.dpy = dpy

    def stiffness_rates(self, t: float) -> tuple[float, float, float]:
        """(Gx, Gy, Gc) at time t."""
        phase = 2.0 * self.omega * t
        c = math.cos(phase)
        return self.ax_c - self.ax_m * c, self.ay_c + self.ay_m * c, self.ac * math.sin(phase)

    def drift_matrix(self, t: float) -> np.ndarray:
        gx, gy, gc = self.stiffness_rates(t)
        g = self.gamma
        return np.array(
            [
                [0.0, self.orx, 0.0, 0.0],
                [-gx, -g, gc, 0.0],
                [0.0, 0.0, 0.0, self.ory],
                [gc, 0.0, -gy, -g],
            ]
        )


def coefficients(
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    lam_x: float | None = None,
    lam_y: float | None = None,
) -> DriveCoeffs:
    """Build the moment-equation coefficients for one trap setting.

    ``lam_x``/``lam_y`` override the SI localization rates [1/(m^2 s)];
    by default the photon-recoil values of the trap itself are used.
    """
    d = derive(particle, trap, ref)
    if lam_x is None:
        lam_x = d.localization_rate_x
    if lam_y is None:
        lam_y = d.localization_rate_y
    return coefficients_from_derived(d, trap, ref, lam_x, lam_y)


def coefficients_from_derived(
    derived: DerivedParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    lam_x: float,
    lam_y: float,
) -> DriveCoeffs:
    m = derived.mass
    orx, ory = ref.frequency_x, ref.frequency_y
    cx = 2.0 * derived.v0 / (m * orx)
    cy = 2.0 * derived.v0 / (m * ory)
    cc = derived.v0 / (m * math.sqrt(orx * ory))
    s2 = 2.0 * math.sqrt(trap.i_l * trap.i_g)
    return DriveCoeffs(
        orx=orx,
        ory=ory,
        ax_c=cx * trap.i_g,
        ax_m=cx * s2,
        ay_c=cy * trap.i_g,
        ay_m=cy * s2,
        ac=cc * 2.0 * s2,
        omega=trap.rotation_rate,
        gamma=trap.gas_damping,
        dpx=2.0 * lam_x * derived.length_unit_x**2,
        dpy=2.0 * lam_y * derived.length_unit_y**2,
    )


def mean_rates(t: float, y, coeffs: DriveCoeffs, ux: float = 0.0, uy: float = 0.0):
    """Drift of the four first moments; ux, uy are momentum-rate inputs."""
    gx, gy, gc = coeffs.stiffness_rates(t)
    mx, mpx, my, mpy = y[0], y[1], y[2], y[3]
    g = coeffs.gamma
    return (
        coeffs.orx * mpx,
        -gx * mx + gc * my - g * mpx + ux,
        coeffs.ory * mpy,
        gc * mx - gy * my - g * mpy + uy,
    )


def cov_rates(t: float, y, coeffs: DriveCoeffs):
    """Time derivatives of the 10 covariance entries (unconditional)."""
    gx, gy, gc = coeffs.stiffness_rates(t)
    a, b, g = coeffs.orx, coeffs.ory, coeffs.gamma
    sxx, spxpx, syy, spypy = y[4], y[5], y[6], y[7]
    cxy, cxpx, cxpy, cypx, cypy, cpxpy = y[8], y[9], y[10], y[11], y[12], y[13]
    return (
        2.0 * a * cxpx,
        -2.0 * (gx * cxpx - gc * cypx) - 2.0 * g * spxpx + coeffs.dpx,
        2.0 * b * cypy,
        -2.0 * (gy * cypy - gc * cxpy) - 2.0 * g * spypy + coeffs.dpy,
        a * cypx + b * cxpy,
        a * spxpx - (gx * sxx - gc * cxy) - g * cxpx,
        a * cpxpy - (gy * cxy - gc * sxx) - g * cxpy,
        b * cpxpy - (gx * cxy - gc * syy) - g * cypx,
        b * spypy - (gy * syy - gc * cxy) - g * cypy,
        -(gx * cxpy - gc * cypy) - (gy * cypx - gc * cxpx) - 2.0 * g * cpxpy,
    )


def rhs_unconditional(t: float, y, coeffs: DriveCoeffs):
    """Full 14-component derivative of the unconditional moment equations."""
    return mean_rates(t, y, coeffs) + cov_rates(t, y, coeffs)


def rk4_step(t: float, y, h: float, coeffs: DriveCoeffs):
    k1 = rhs_unconditional(t, y, coeffs)
    y2 = [y[i] + 0.5 * h * k1[i] for i in range(14)]
    k2 = rhs_unconditional(t + 0.5 * h, y2, coeffs)
    y3 = [y[i] + 0.5 * h * k2[i] for i in range(14)]
    k3 = rhs_unconditional(t + 0.5 * h, y3, coeffs)
    y4 = [y[i] + h * k3[i] for i in range(14)]
    k4 = rhs_unconditional(t + h, y4, coeffs)
    return [y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(14)]


def state_to_vector(state: GaussianState) -> list[float]:
    m, c = state.mean, state.cov
    return [
        m[0],
        m[1],
        m[2],
        m[3],
        c[0, 0],
        c[1, 1],
        c[2, 2],
        c[3, 3],
        c[0, 2],
        c[0, 1],
        c[0, 3],
        c[2, 1],
        c[2, 3],
        c[1, 3],
    ]


def vector_to_state(y, t: float) -> GaussianState:
    mean = np.array(y[0:4], dtype=float)
    sxx, spxpx, syy, spypy = y[4], y[5], y[6], y[7]
    cxy, cxpx, cxpy, cypx, cypy, cpxpy = y[8], y[9], y[10], y[11], y[12], y[13]
    cov = np.array(
        [
            [sxx, cxpx, cxy, cxpy],
            [cxpx, spxpx, cypx, cpxpy],
            [cxy, cypx, syy, cypy],
            [cxpy, cpxpy, cypy, spypy],
        ]
    )
    return GaussianState(mean=mean, cov=cov, time=t)


@dataclass
class Trajectory:
    """Sampled moment history; diagnostics are computed on demand."""

    times: np.ndarray  # (n,)
    means: np.ndarray  # (n, 4)
    covs: np.ndarray  # (n, 4, 4)
    schedule: TrapSchedule
    step: float

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> GaussianState:
        return GaussianState(mean=self.means[i], cov=self.covs[i], time=float(self.times[i]))

    def __iter__(self):
        return (self.state(i) for i in range(len(self.times)))

    @property
    def samples(self) -> list[GaussianState]:
        return list(self)


def fastest_rate(
    particle: ParticleParams, trap: TrapConfig, ref: ReferenceTweezer, schedule: TrapSchedule
) -> float:
    """Largest angular frequency appearing anywhere in the schedule [rad/s].

    The stable-axis curvature frequency bounds the beating frequency from
    above, so max(Omega, omega_y) covers all dynamical rates.
    """
    worst = 0.0
    for seg in schedule.segments:
        seg_trap = trap.with_settings(
            laguerre_fraction=seg.laguerre_fraction, rotation_rate=seg.rotation_rate, power=seg.power
        )
        d = derive(particle, seg_trap, ref)
        worst = max(worst, seg.rotation_rate, math.sqrt(abs(d.omega_sq_x)), math.sqrt(d.omega_sq_y))
    return worst


def max_step(
    particle: ParticleParams, trap: TrapConfig, ref: ReferenceTweezer, schedule: TrapSchedule
) -> float:
    return (2.0 * math.pi / fastest_rate(particle, trap, ref, schedule)) / STEPS_PER_PERIOD


def integrate(
    initial: GaussianState,
    schedule: TrapSchedule,
    step: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    lam_x: float | None = None,
    lam_y: float | None = None,
    sample_stride: int = 1,
) -> Trajectory:
    """Propagate the unconditional moments through a piecewise-constant schedule.

    Trap settings switch suddenly at segment boundaries (the state is carried
    over unchanged).  Every recorded sample is checked against the Heisenberg
    condition; a violation beyond tolerance aborts with the offending time.
    ``sample_stride`` records every Nth step (the initial and final states are
    always included).
    """
    bound = max_step(particle, trap, ref, schedule)
    if step > bound * (1.0 + 1e-12):
        raise ValueError(f"step {step:.3e} s exceeds the resolution bound {bound:.3e} s")

    y = state_to_vector(initial)
    t = initial.time
    times = [t]
    records = [list(y)]

    for seg in schedule.segments:
        seg_trap = trap.with_settings(
            laguerre_fraction=seg.laguerre_fraction, rotation_rate=seg.rotation_rate, power=seg.power
        )
        if seg.duration == 0.0:
            continue
        coeffs = coefficients(particle, seg_trap, ref, lam_x=lam_x, lam_y=lam_y)
        n = max(1, int(math.ceil(seg.duration / step)))
        h = seg.duration / n
        t0 = t
        for i in range(n):
            y = rk4_step(t, y, h, coeffs)
            t = t0 + (i + 1) * h
            if (i + 1) % sample_stride == 0 or i == n - 1:
                times.append(t)
                records.append(list(y))

    traj = _records_to_trajectory(times, records, schedule, step)
    for i in range(len(traj)):
        if not is_physical(traj.covs[i]):
            raise PhysicalityError(float(traj.times[i]))
    return traj


def _records_to_trajectory(times, records, schedule, step) -> Trajectory:
    n = len(times)
    means = np.empty((n, 4))
    covs = np.empty((n, 4, 4))
    for i, y in enumerate(records):
        means[i] = y[0:4]
        sxx, spxpx, syy, spypy = y[4], y[5], y[6], y[7]
        cxy, cxpx, cxpy, cypx, cypy, cpxpy = y[8], y[9], y[10], y[11], y[12], y[13]
        covs[i] = [
            [sxx, cxpx, cxy, cxpy],
            [cxpx, spxpx, cypx, cpxpy],
            [cxy, cypx, syy, cypy],
            [cxpy, cpxpy, cypy, spypy],
        ]
    return Trajectory(times=np.array(times), means=means, covs=covs, schedule=schedule, step=step)
