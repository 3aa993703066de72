"""Conditional dynamics under continuous position measurement, with feedback.

Conditioned on the measurement record, the first moments obey stochastic
(Euler-Maruyama) updates whose noise loading is set by the covariance columns,
while the covariance matrix obeys deterministic Riccati equations: the
unconditional rates minus the information-gain terms proportional to the
measurement strength.  With zero efficiency everything reduces to the
unconditional dynamics.

Noise streams are counter-based for cross-platform reproducibility: the
normal draws for realization r are the sequential output of
``Generator(Philox(key=[master_seed, r]))``, consumed as one (x, y) pair per
time step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .dynamics import (
    DriveCoeffs,
    Segment,
    Trajectory,
    TrapSchedule,
    coefficients,
    cov_rates,
    max_step,
    mean_rates,
    state_to_vector,
    _records_to_trajectory,
)
from .errors import PhysicalityError
from .gaussian import GaussianState, is_physical, thermal_state
from .params import ParticleParams, ReferenceTweezer, TrapConfig, derive


@dataclass(frozen=True)
class MeasurementModel:
    """Continuous position measurement of both transverse axes.

    ``rate_x``/``rate_y`` are SI localization rates [1/(m^2 s)]; ``None``
    means "use the photon-recoil rate of the trap segment being integrated"
    (the scattered trap light is the measured field).
    """

    efficiency: float
    rate_x: float | None = None
    rate_y: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in [0, 1]")
        for r in (self.rate_x, self.rate_y):
            if r is not None and r < 0:
                raise ValueError("measurement rates must be non-negative")


@dataclass(frozen=True)
class FeedbackLaw:
    """Linear feedback u_q = gain_position <q> + gain_momentum <p_q>.

    The applied force is -u_q, so positive gains oppose the motion.
    ``gain_position`` is in N/m, ``gain_momentum`` in 1/s (force per unit
    momentum, i.e. the cold-damping rate).
    """

    gain_position: float = 0.0
    gain_momentum: float = 0.0
    enabled: bool = False

    def __post_init__(self):
        if self.enabled and (self.gain_position < 0 or self.gain_momentum < 0):
            raise ValueError("feedback gains must be non-negative when enabled")


@dataclass
class RecoveryResult:
    trajectory: Trajectory
    success: bool
    settling_time: float  # [s]; time cap when unsuccessful
    steady_energy: float  # conditional steady-state quadrature energy [hbar Omega_ref]
    final_energy: float


class NoiseStream:
    """Counter-based standard-normal stream; one (x, y) pair per step."""

    def __init__(self, master_seed: int, realization: int = 0):
        self._gen = Generator(Philox(key=np.array([master_seed, realization], dtype=np.uint64)))

    def normals(self, n_steps: int) -> np.ndarray:
        return self._gen.standard_normal((n_steps, 2))


def feedback_force(mean, law: FeedbackLaw) -> tuple[float, float]:
    """SI control signals (u_x, u_y) from the estimated first moments.

    For a linear Gaussian system with exact model knowledge the optimal state
    estimate is the conditional mean itself, so that is what gets fed back.
    The mean is (x, p_x, y, p_y) in SI units.
    """
    if not law.enabled:
        return 0.0, 0.0
    ux = law.gain_position * mean[0] + law.gain_momentum * mean[1]
    uy = law.gain_position * mean[2] + law.gain_momentum * mean[3]
    return ux, uy


def conditional_cov_rates(t: float, y, coeffs: DriveCoeffs, beta_x: float, beta_y: float):
    """Riccati rates: unconditional rates minus the information-gain terms.

    beta_q = 2 eta Lambda_q in internal units.  Setting both betas to zero
    reproduces the unconditional covariance equations exactly.
    """
    base = cov_rates(t, y, coeffs)
    if beta_x == 0.0 and beta_y == 0.0:
        return base
    sxx, spxpx, syy, spypy = y[4], y[5], y[6], y[7]
    cxy, cxpx, cxpy, cypx, cypy, cpxpy = y[8], y[9], y[10], y[11], y[12], y[13]
    info = (
        beta_x * sxx * sxx + beta_y * cxy * cxy,
        beta_x * cxpx * cxpx + beta_y * cypx * cypx,
        beta_x * cxy * cxy + beta_y * syy * syy,
        beta_x * cxpy * cxpy + beta_y * cypy * cypy,
        beta_x * sxx * cxy + beta_y * cxy * syy,
        beta_x * sxx * cxpx + beta_y * cxy * cypx,
        beta_x * sxx * cxpy + beta_y * cxy * cypy,
        beta_x * cxy * cxpx + beta_y * syy * cypx,
        beta_x * cxy * cxpy + beta_y * syy * cypy,
        beta_x * cxpx * cxpy + beta_y * cypx * cypy,
    )
    return tuple(base[i] - info[i] for i in range(10))


def _cov_rk4(t, y, h, coeffs, beta_x, beta_y):
    """Fourth-order step of the 10 covariance entries; means left untouched."""

    def rate(tt, yy):
        return conditional_cov_rates(tt, yy, coeffs, beta_x, beta_y)

    k1 = rate(t, y)
    y2 = list(y)
    for i in range(10):
        y2[4 + i] = y[4 + i] + 0.5 * h * k1[i]
    k2 = rate(t + 0.5 * h, y2)
    y3 = list(y)
    for i in range(10):
        y3[4 + i] = y[4 + i] + 0.5 * h * k2[i]
    k3 = rate(t + 0.5 * h, y3)
    y4 = list(y)
    for i in range(10):
        y4[4 + i] = y[4 + i] + h * k3[i]
    k4 = rate(t + h, y4)
    return [y[4 + i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(10)]


class _ConditionalKernel:
    """Per-segment precomputation for the conditional stepper."""

    def __init__(
        self,
        particle: ParticleParams,
        trap: TrapConfig,
        ref: ReferenceTweezer,
        meas: MeasurementModel,
        feedback: FeedbackLaw,
    ):
        derived = derive(particle, trap, ref)
        lam_x = meas.rate_x if meas.rate_x is not None else derived.localization_rate_x
        lam_y = meas.rate_y if meas.rate_y is not None else derived.localization_rate_y
        self.coeffs = coefficients(particle, trap, ref, lam_x=lam_x, lam_y=lam_y)
        eta = meas.efficiency
        self.beta_x = eta * self.coeffs.dpx  # = 2 eta Lambda_x l_x^2
        self.beta_y = eta * self.coeffs.dpy
        self.sqrt_bx = math.sqrt(self.beta_x)
        self.sqrt_by = math.sqrt(self.beta_y)
        self.feedback = feedback
        # Internal feedback rates: -u/momentum_unit expressed via the means.
        self.fb_pos_x = feedback.gain_position / (derived.mass * ref.frequency_x)
        self.fb_pos_y = feedback.gain_position / (derived.mass * ref.frequency_y)
        self.fb_mom = feedback.gain_momentum

    def control_rates(self, y) -> tuple[float, float]:
        if not self.feedback.enabled:
            return 0.0, 0.0
        ux = -(self.fb_pos_x * y[0] + self.fb_mom * y[1])
        uy = -(self.fb_pos_y * y[2] + self.fb_mom * y[3])
        return ux, uy

    def step(self, t: float, y, h: float, dz_x: float, dz_y: float):
        """One Euler-Maruyama mean update plus fourth-order Riccati update."""
        ux, uy = self.control_rates(y)
        drift = mean_rates(t, y, self.coeffs, ux, uy)
        sxx, syy = y[4], y[6]
        cxy, cxpx, cxpy, cypx, cypy = y[8], y[9], y[10], y[11], y[12]
        root_h = math.sqrt(h)
        wx = self.sqrt_bx * dz_x * root_h
        wy = self.sqrt_by * dz_y * root_h
        new_cov = _cov_rk4(t, y, h, self.coeffs, self.beta_x, self.beta_y)
        return [
            y[0] + h * drift[0] + sxx * wx + cxy * wy,
            y[1] + h * drift[1] + cxpx * wx + cypx * wy,
            y[2] + h * drift[2] + cxy * wx + syy * wy,
            y[3] + h * drift[3] + cxpy * wx + cypy * wy,
        ] + new_cov


def step_conditional(
    state: GaussianState,
    t: float,
    dt: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    meas: MeasurementModel,
    feedback: FeedbackLaw,
    noise: tuple[float, float],
) -> GaussianState:
    """Advance one conditional step; ``noise`` holds the two standard normals."""
    kernel = _ConditionalKernel(particle, trap, ref, meas, feedback)
    y = state_to_vector(state)
    y = kernel.step(t, y, dt, noise[0], noise[1])
    from .dynamics import vector_to_state

    return vector_to_state(y, t + dt)


def run_conditional(
    initial: GaussianState,
    schedule: TrapSchedule,
    step: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    meas: MeasurementModel,
    feedback: FeedbackLaw,
    realization: int = 0,
    sample_stride: int = 1,
) -> Trajectory:
    """Integrate one seeded conditional realization through a schedule."""
    bound = max_step(particle, trap, ref, schedule)
    if step > bound * (1.0 + 1e-12):
        raise ValueError(f"step {step:.3e} s exceeds the resolution bound {bound:.3e} s")

    stream = NoiseStream(meas.seed, realization)
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
        kernel = _ConditionalKernel(particle, seg_trap, ref, meas, feedback)
        n = max(1, int(math.ceil(seg.duration / step)))
        h = seg.duration / n
        noise = stream.normals(n)
        t0 = t
        for i in range(n):
            y = kernel.step(t, y, h, noise[i, 0], noise[i, 1])
            t = t0 + (i + 1) * h
            if (i + 1) % sample_stride == 0 or i == n - 1:
                times.append(t)
                records.append(list(y))
                if y[4] <= 0.0 or y[6] <= 0.0:
                    raise PhysicalityError(t, "conditional covariance lost positivity")

    traj = _records_to_trajectory(times, records, schedule, step)
    for i in range(len(traj)):
        if not is_physical(traj.covs[i]):
            raise PhysicalityError(float(traj.times[i]))
    return traj


def quadrature_energy(means: np.ndarray, covs: np.ndarray) -> np.ndarray:
    """Total quadrature energy (mean + fluctuation) in units of hbar Omega_ref."""
    m = np.asarray(means, dtype=float).reshape(-1, 4)
    c = np.asarray(covs, dtype=float).reshape(-1, 4, 4)
    return 0.5 * np.sum(m**2, axis=1) + 0.5 * np.trace(c, axis1=1, axis2=2)


def steady_state_energy(
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    meas: MeasurementModel,
    step: float,
    duration: float = 3e-4,
) -> float:
    """Quadrature energy of the conditional covariance steady state.

    Integrates the (deterministic) Riccati equations with zero means until the
    periodic steady state and averages the energy over the last quarter of the
    run.
    """
    kernel = _ConditionalKernel(particle, trap, ref, meas, FeedbackLaw())
    y = state_to_vector(thermal_state(ref.occupation_x, ref.occupation_y))
    n = max(1, int(math.ceil(duration / step)))
    h = duration / n
    energies = []
    t = 0.0
    for i in range(n):
        y[4:14] = _cov_rk4(t, y, h, kernel.coeffs, kernel.beta_x, kernel.beta_y)
        t = (i + 1) * h
        if i >= (3 * n) // 4:
            energies.append(0.5 * (y[4] + y[5] + y[6] + y[7]))
    return float(np.mean(energies))


def recover(
    initial_displacement: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    meas: MeasurementModel,
    feedback: FeedbackLaw,
    step: float,
    time_cap: float,
    realization: int = 0,
    sample_stride: int = 20,
) -> RecoveryResult:
    """Cool the particle back from a large displacement [m] along x.

    Runs the monitored, feedback-controlled dynamics until the quadrature
    energy falls to three times the conditional steady-state value or the time
    cap is reached.  Exceeding the cap is reported as failure, not raised.
    """
    derived = derive(particle, trap, ref)
    x0 = initial_displacement / derived.length_unit_x
    init = thermal_state(ref.occupation_x, ref.occupation_y)
    init = GaussianState(mean=np.array([x0, 0.0, 0.0, 0.0]), cov=init.cov, time=0.0)

    e_ss = steady_state_energy(particle, trap, ref, meas, step)
    threshold_energy = 3.0 * e_ss

    schedule = TrapSchedule(
        (
            Segment(
                duration=time_cap,
                rotation_rate=trap.rotation_rate,
                laguerre_fraction=trap.laguerre_fraction,
                power=trap.power,
            ),
        )
    )
    traj = run_conditional(
        init, schedule, step, particle, trap, ref, meas, feedback,
        realization=realization, sample_stride=sample_stride,
    )
    energies = quadrature_energy(traj.means, traj.covs)
    below = np.nonzero(energies <= threshold_energy)[0]
    if below.size:
        return RecoveryResult(
            trajectory=traj,
            success=True,
            settling_time=float(traj.times[below[0]]),
            steady_energy=e_ss,
            final_energy=float(energies[-1]),
        )
    return RecoveryResult(
        trajectory=traj,
        success=False,
        settling_time=time_cap,
        steady_energy=e_ss,
        final_energy=float(energies[-1]),
    )


def ensemble_conditional_means(
    initial: GaussianState,
    schedule: TrapSchedule,
    step: float,
    particle: ParticleParams,
    trap: TrapConfig,
    ref: ReferenceTweezer,
    meas: MeasurementModel,
    feedback: FeedbackLaw,
    n_realizations: int,
    sample_stride: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Propagate many realizations at once (shared Riccati covariance).

    Returns (times, means) with means of shape (n_samples, n_realizations, 4).
    Realization r consumes the same noise stream as
    ``run_conditional(..., realization=r)``, so the two paths agree draw for
    draw.
    """
    streams = [NoiseStream(meas.seed, r) for r in range(n_realizations)]
    y = state_to_vector(initial)
    means = np.tile(np.asarray(y[0:4]), (n_realizations, 1))
    t = initial.time
    times = [t]
    out = [means.copy()]
    for seg in schedule.segments:
        seg_trap = trap.with_settings(
            laguerre_fraction=seg.laguerre_fraction, rotation_rate=seg.rotation_rate, power=seg.power
        )
        if seg.duration == 0.0:
            continue
        kernel = _ConditionalKernel(particle, seg_trap, ref, meas, feedback)
        coeffs = kernel.coeffs
        n = max(1, int(math.ceil(seg.duration / step)))
        h = seg.duration / n
        root_h = math.sqrt(h)
        chunk = 2048
        t0 = t
        done = 0
        while done < n:
            m = min(chunk, n - done)
            noise = np.stack([s.normals(m) for s in streams], axis=1)  # (m, R, 2)
            for i in range(m):
                step_idx = done + i
                tt = t0 + step_idx * h
                a_mat = coeffs.drift_matrix(tt)
                sxx, syy = y[4], y[6]
                cxy, cxpx, cxpy, cypx, cypy = y[8], y[9], y[10], y[11], y[12]
                loading = np.array(
                    [
                        [kernel.sqrt_bx * sxx, kernel.sqrt_by * cxy],
                        [kernel.sqrt_bx * cxpx, kernel.sqrt_by * cypx],
                        [kernel.sqrt_bx * cxy, kernel.sqrt_by * syy],
                        [kernel.sqrt_bx * cxpy, kernel.sqrt_by * cypy],
                    ]
                )
                drift = means @ a_mat.T
                if feedback.enabled:
                    ux = -(kernel.fb_pos_x * means[:, 0] + kernel.fb_mom * means[:, 1])
                    uy = -(kernel.fb_pos_y * means[:, 2] + kernel.fb_mom * means[:, 3])
                    drift[:, 1] += ux
                    drift[:, 3] += uy
                means = means + h * drift + root_h * (noise[i] @ loading.T)
                y[4:14] = _cov_rk4(tt, y, h, coeffs, kernel.beta_x, kernel.beta_y)
                if (step_idx + 1) % sample_stride == 0 or step_idx == n - 1:
                    times.append(t0 + (step_idx + 1) * h)
                    out.append(means.copy())
            done += m
        t = t0 + seg.duration
    return np.array(times), np.array(out)
