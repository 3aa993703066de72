"""Physical inputs and derived quantities.

Conventions used throughout the package:

* Polarizability follows Clausius-Mossotti, alpha = 4 pi eps0 R^3 (eps-1)/(eps+2).
* The quadratic stiffness scale ``v0`` [J/m^2] is defined so that the trap
  potential near the axis is ``V = v0 (k_minus x^2 + k_plus y^2 - k_xy x y)``
  with x, y in meters, giving curvature frequencies
  ``m w_x^2 = 2 v0 (2 sqrt(I_G I_L) - I_G)`` (signed; negative means the t = 0
  saddle axis is statically stable) and the ``+ I_G`` analogue along y.
* Photon-recoil heating is the standard Rayleigh-scattering result: momentum
  diffusion ``D_p = C_q (hbar k)^2 R_scatt`` with the dipole anisotropy factors
  C = (1/5, 2/5) for the transverse axes, expressed as a phonon rate
  ``Gamma_q = C_q I_G P k^5 |alpha|^2 / (3 pi^2 eps0^2 c m Omega_q w0^2)``.
  Gamma_q refers to the oscillator of frequency Omega_q, but the product
  ``Gamma_q q_zpf(Omega_q)^-2`` is independent of that choice, so the
  master-equation coefficient does not depend on which oscillator the rate is
  quoted for.
* The factor pairing the heating rate with the position-localization rate of
  the master equation is convention-dependent in the field.  This package
  adopts ``dsigma_p^2/dt = 2 hbar^2 Lambda_q = m hbar Omega_q Gamma_q``,
  i.e. ``Lambda_q = Gamma_q / (4 q_zpf^2)``: half a recoil quantum per
  scattering time flows into each transverse axis.  The alternative pairing
  ``Lambda_q = Gamma_q / (2 q_zpf^2)`` (exposed as :func:`localization_rate`)
  doubles the decoherence; see README "Conventions" for the discussion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import epsilon_0 as EPS0
from scipy.constants import hbar as HBAR

# Fraction of the recoil momentum kicked along the polarization axis (x) and
# the transverse axis (y) for dipole scattering.
RECOIL_ANISOTROPY_X = 1.0 / 5.0
RECOIL_ANISOTROPY_Y = 2.0 / 5.0

# Largest particle-radius-to-wavelength ratio still treated as a point dipole.
DIPOLE_RATIO_MAX = 0.2


@dataclass(frozen=True)
class ParticleParams:
    """Material and geometric description of the levitated sphere."""

    radius: float  # [m]
    density: float  # [kg/m^3]
    relative_permittivity: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("particle radius must be positive")
        if self.density <= 0:
            raise ValueError("particle density must be positive")
        if self.relative_permittivity <= 1:
            raise ValueError("relative permittivity must exceed 1 for a trappable dielectric")

    @property
    def mass(self) -> float:
        return (4.0 / 3.0) * math.pi * self.radius**3 * self.density

    @property
    def polarizability(self) -> float:
        eps = self.relative_permittivity
        return 4.0 * math.pi * EPS0 * self.radius**3 * (eps - 1.0) / (eps + 2.0)


@dataclass(frozen=True)
class TrapConfig:
    """Optical and geometric parameters of the saddle beam.

    ``laguerre_fraction`` is the fractional power I_L carried by the two
    l = +/-2 modes; the Gaussian mode carries I_G = 1 - I_L.  ``waist`` may be
    omitted, in which case the paraxial relation w0 = wavelength/(pi NA) is
    used.
    """

    power: float  # [W]
    wavelength: float  # [m]
    numerical_aperture: float
    laguerre_fraction: float
    rotation_rate: float = 0.0  # [rad/s]
    gas_damping: float = 0.0  # [1/s]
    waist: float | None = None  # [m]

    def __post_init__(self):
        if self.power <= 0 or self.wavelength <= 0:
            raise ValueError("power and wavelength must be positive")
        if not 0.0 <= self.laguerre_fraction <= 1.0:
            raise ValueError("laguerre_fraction must lie in [0, 1]")
        if self.gas_damping < 0:
            raise ValueError("gas damping must be non-negative")
        if self.waist is not None and self.waist <= 0:
            raise ValueError("waist must be positive")
        if self.waist is None and self.numerical_aperture <= 0:
            raise ValueError("need either a waist or a positive numerical aperture")

    @property
    def i_l(self) -> float:
        return self.laguerre_fraction

    @property
    def i_g(self) -> float:
        return 1.0 - self.laguerre_fraction

    @property
    def waist_m(self) -> float:
        if self.waist is not None:
            return self.waist
        return self.wavelength / (math.pi * self.numerical_aperture)

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def with_settings(self, *, laguerre_fraction=None, rotation_rate=None, power=None) -> "TrapConfig":
        """Copy with selected fields replaced (used by piecewise schedules)."""
        return TrapConfig(
            power=self.power if power is None else power,
            wavelength=self.wavelength,
            numerical_aperture=self.numerical_aperture,
            laguerre_fraction=self.laguerre_fraction if laguerre_fraction is None else laguerre_fraction,
            rotation_rate=self.rotation_rate if rotation_rate is None else rotation_rate,
            gas_damping=self.gas_damping,
            waist=self.waist,
        )


@dataclass(frozen=True)
class ReferenceTweezer:
    """The conventional Gaussian tweezer the particle starts in.

    Its angular frequencies fix the zero-point scales that define the
    dimensionless quadratures used internally.
    """

    frequency_x: float  # [rad/s]
    frequency_y: float  # [rad/s]
    occupation_x: float = 0.0
    occupation_y: float = 0.0

    def __post_init__(self):
        if self.frequency_x <= 0 or self.frequency_y <= 0:
            raise ValueError("reference frequencies must be positive")
        if self.occupation_x < 0 or self.occupation_y < 0:
            raise ValueError("occupations must be non-negative")


@dataclass(frozen=True)
class DerivedParams:
    """All derived quantities; produced by :func:`derive`."""

    mass: float  # [kg]
    polarizability_real: float  # [C m^2/V]
    v0: float  # stiffness scale [J/m^2]
    depth_scale: float  # on-axis dipole energy scale Re{a} P/(c pi eps0 w0^2) [J]
    x_zpf: float  # [m]
    y_zpf: float  # [m]
    px_zpf: float  # [kg m/s]
    py_zpf: float  # [kg m/s]
    recoil_rate_x: float  # [1/s], referred to the reference tweezer frequency
    recoil_rate_y: float  # [1/s]
    localization_rate_x: float  # master-equation coefficient [1/(m^2 s)], half-quantum pairing
    localization_rate_y: float  # [1/(m^2 s)]
    absorbed_ratio: float
    omega_sq_x: float  # signed curvature frequency squared [rad^2/s^2]
    omega_sq_y: float  # [rad^2/s^2]

    # Dimensionless-quadrature unit system: x = length_unit * X with vacuum
    # variance of X equal to 1/2, i.e. length_unit = sqrt(2) * x_zpf, and
    # momentum_unit = hbar / length_unit.
    @property
    def length_unit_x(self) -> float:
        return math.sqrt(2.0) * self.x_zpf

    @property
    def length_unit_y(self) -> float:
        return math.sqrt(2.0) * self.y_zpf

    @property
    def momentum_unit_x(self) -> float:
        return HBAR / self.length_unit_x

    @property
    def momentum_unit_y(self) -> float:
        return HBAR / self.length_unit_y


def absorbed_ratio(trap: TrapConfig) -> float:
    """Absorbed power of the saddle beam relative to a Gaussian trap.

    Only the Gaussian component has intensity on the axis, so in the dipole
    limit the ratio is simply the Gaussian power fraction 1 - I_L.
    """
    if not 0.0 <= trap.laguerre_fraction <= 1.0:
        raise ValueError("laguerre_fraction must lie in [0, 1]")
    return 1.0 - trap.laguerre_fraction


def recoil_rate(
    particle: ParticleParams,
    trap: TrapConfig,
    oscillation_frequency: float,
    axis: str,
) -> float:
    """Photon-recoil heating rate [phonons/s] for the given transverse axis.

    ``oscillation_frequency`` is the angular frequency of the oscillator the
    phonon rate refers to (reference tweezer or the saddle beating frequency).
    Only the Gaussian component scatters at leading order in the displacement,
    hence the proportionality to I_G.
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    if oscillation_frequency <= 0:
        raise ValueError("oscillation frequency must be positive")
    c_q = RECOIL_ANISOTROPY_X if axis == "x" else RECOIL_ANISOTROPY_Y
    k = trap.wavenumber
    alpha = particle.polarizability
    w0 = trap.waist_m
    return (
        c_q
        * trap.i_g
        * trap.power
        * k**5
        * alpha**2
        / (3.0 * math.pi**2 * EPS0**2 * SPEED_OF_LIGHT * particle.mass * oscillation_frequency * w0**2)
    )


def localization_rate(gamma: float, zpf: float) -> float:
    """Map a phonon heating rate to the position-localization rate.

    Lambda = Gamma / (2 q_zpf^2), chosen so the momentum-diffusion term
    2 hbar^2 Lambda in the covariance equations grows the oscillator energy at
    hbar Omega_q Gamma_q (one recoil quantum per 1/Gamma_q).  Gamma and the
    zero-point amplitude must refer to the same oscillator frequency; the
    product is then frequency-independent.
    """
    if gamma < 0 or zpf <= 0:
        raise ValueError("heating rate must be non-negative and zpf positive")
    return gamma / (2.0 * zpf**2)


def zero_point_amplitude(mass: float, frequency: float) -> float:
    """Ground-state position spread sqrt(hbar / (2 m Omega))."""
    if frequency <= 0:
        raise ValueError("frequency must be positive")
    return math.sqrt(HBAR / (2.0 * mass * frequency))


def derive(particle: ParticleParams, trap: TrapConfig, ref: ReferenceTweezer) -> DerivedParams:
    """Compute every derived quantity from the primary inputs.

    Raises if the dipole approximation is violated (R/wavelength >= 0.2).
    Recoil rates are quoted at the reference-tweezer frequencies; callers that
    want the rate referred to the in-saddle oscillation use
    :func:`recoil_rate` directly (the localization rate comes out the same
    either way).  The localization rates stored here follow the half-quantum
    pairing Lambda_q = Gamma_q / (4 q_zpf^2) described in the module
    docstring; these are the coefficients the dynamics and monitoring modules
    consume.
    """
    if particle.radius / trap.wavelength >= DIPOLE_RATIO_MAX:
        raise ValueError(
            f"dipole regime violated: R/wavelength = {particle.radius / trap.wavelength:.3f} >= {DIPOLE_RATIO_MAX}"
        )

    mass = particle.mass
    alpha = particle.polarizability
    w0 = trap.waist_m

    depth_scale = alpha * trap.power / (SPEED_OF_LIGHT * math.pi * w0**2 * EPS0)
    v0 = 2.0 * depth_scale / w0**2

    x_zpf = zero_point_amplitude(mass, ref.frequency_x)
    y_zpf = zero_point_amplitude(mass, ref.frequency_y)

    gamma_x = recoil_rate(particle, trap, ref.frequency_x, "x")
    gamma_y = recoil_rate(particle, trap, ref.frequency_y, "y")

    s = math.sqrt(trap.i_g * trap.i_l)
    omega_sq_x = 2.0 * v0 * (2.0 * s - trap.i_g) / mass
    omega_sq_y = 2.0 * v0 * (2.0 * s + trap.i_g) / mass

    return DerivedParams(
        mass=mass,
        polarizability_real=alpha,
        v0=v0,
        depth_scale=depth_scale,
        x_zpf=x_zpf,
        y_zpf=y_zpf,
        px_zpf=HBAR / (2.0 * x_zpf),
        py_zpf=HBAR / (2.0 * y_zpf),
        recoil_rate_x=gamma_x,
        recoil_rate_y=gamma_y,
        localization_rate_x=localization_rate(gamma_x, x_zpf) / 2.0,
        localization_rate_y=localization_rate(gamma_y, y_zpf) / 2.0,
        absorbed_ratio=absorbed_ratio(trap),
        omega_sq_x=omega_sq_x,
        omega_sq_y=omega_sq_y,
    )
