"""Two-mode Gaussian motional states and their diagnostics.

States live in dimensionless quadratures (x, p_x, y, p_y) where the vacuum
covariance is I/2.  Purity and logarithmic negativity follow the standard
continuous-variable formulas in that convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ReferenceTweezer

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
SQUEEZE_TOL = 1e-9

# Symplectic form for ordering (x, p_x, y, p_y).
SYMPLECTIC_FORM = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and symmetric covariance matrix at one instant."""

    mean: np.ndarray
    cov: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(4)
        cov = np.asarray(self.cov, dtype=float).reshape(4, 4)
        if np.linalg.norm(cov - cov.T) >= SYMMETRY_TOL * max(1.0, np.linalg.norm(cov)):
            raise ValueError("covariance matrix must be symmetric")
        object.__setattr__(self, "mean", mean.copy())
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))


@dataclass(frozen=True)
class Diagnostics:
    purity: float
    log_negativity: float
    delta_x: float
    delta_p_x: float
    delta_y: float
    delta_p_y: float
    squeezed_x: bool
    squeezed_p_x: bool
    squeezed_y: bool
    squeezed_p_y: bool
    delta_x_over_radius: float = field(default=float("nan"))


def thermal_state(n_x: float, n_y: float, time: float = 0.0) -> GaussianState:
    """Product thermal state with the given mean occupations."""
    if n_x < 0 or n_y < 0:
        raise ValueError("occupations must be non-negative")
    diag = [n_x + 0.5, n_x + 0.5, n_y + 0.5, n_y + 0.5]
    return GaussianState(mean=np.zeros(4), cov=np.diag(diag), time=time)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum (two values, ascending); vacuum gives (1/2, 1/2)."""
    eigs = np.linalg.eigvals(SYMPLECTIC_FORM @ cov)
    nus = np.sort(np.abs(eigs.imag))
    return np.array([nus[2], nus[3]])


def is_physical(cov: np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    """Heisenberg condition cov + (i/2) Sigma >= 0 within tolerance.

    The tolerance is scaled with the covariance norm: at extreme squeezing the
    symplectic spectrum is only computable to machine precision relative to
    the largest matrix entry.
    """
    scale = max(1.0, float(np.max(np.abs(cov))))
    nus = symplectic_eigenvalues(cov)
    return bool(nus[0] >= 0.5 - tol * scale)


def purity(state: GaussianState) -> float:
    """Tr(rho^2) = 1 / (4 sqrt(det cov)) for two modes with vacuum cov = I/2."""
    det = float(np.linalg.det(state.cov))
    if det <= 0:
        raise ValueError("covariance matrix must be positive definite")
    if not is_physical(state.cov):
        raise ValueError("state violates the Heisenberg condition")
    return 1.0 / (4.0 * math.sqrt(det))


def purity_figure_norm(state: GaussianState) -> float:
    """1 / sqrt(det cov): the figure-axis normalization of purity.

    Equals 4 Tr(rho^2) for two modes; an initial thermal state with
    n = 0.8 on both axes gives about 0.59.  Returns NaN when the determinant
    is not numerically positive (extreme squeezing).
    """
    det = float(np.linalg.det(state.cov))
    if det <= 0 or not math.isfinite(det):
        return float("nan")
    return 1.0 / math.sqrt(det)


def log_negativity(state: GaussianState) -> float:
    """Logarithmic negativity of the x-y mode split.

    Uses the partial-transpose symplectic eigenvalue: with covariance blocks
    A, B, C, Delta = det A + det B - 2 det C and
    nu^2 = (Delta - sqrt(Delta^2 - 4 det cov)) / 2, L_N = max(0, -ln 2 nu).
    """
    cov = state.cov
    a = np.linalg.det(cov[:2, :2])
    b = np.linalg.det(cov[2:, 2:])
    c = np.linalg.det(cov[:2, 2:])
    det = np.linalg.det(cov)
    delta = a + b - 2.0 * c
    disc = delta**2 - 4.0 * det
    if disc < 0.0:
        if disc < -1e-12 * max(1.0, delta**2):
            raise ValueError("partial-transpose discriminant negative beyond tolerance")
        disc = 0.0
    nu_sq = (delta - math.sqrt(disc)) / 2.0
    if nu_sq <= 0.0:
        raise ValueError("partial-transpose symplectic eigenvalue not positive; state unphysical")
    nu = math.sqrt(nu_sq)
    return max(0.0, -math.log(2.0 * nu))


def uncertainties(
    state: GaussianState,
    ref: ReferenceTweezer,
    x_zpf: float | None = None,
    radius: float | None = None,
) -> Diagnostics:
    """Quadrature spreads and squeezing flags.

    Spreads are reported in the internal quadrature units where the vacuum
    value is 1/sqrt(2); a quadrature is flagged squeezed when it drops below
    that.  When both the reference zero-point amplitude and the particle
    radius are given, delta_x is also reported in units of the radius
    (delta_x sqrt(2) x_zpf / R).
    """
    # ref anchors the unit convention but does not enter numerically.
    cov = state.cov
    if not is_physical(cov):
        raise ValueError("state violates the Heisenberg condition")
    dx, dpx, dy, dpy = (math.sqrt(float(cov[i, i])) for i in range(4))
    vac = 1.0 / math.sqrt(2.0)
    dx_over_r = float("nan")
    if x_zpf is not None and radius is not None:
        dx_over_r = dx * math.sqrt(2.0) * x_zpf / radius
    return Diagnostics(
        purity=purity(state),
        log_negativity=log_negativity(state),
        delta_x=dx,
        delta_p_x=dpx,
        delta_y=dy,
        delta_p_y=dpy,
        squeezed_x=dx < vac - SQUEEZE_TOL,
        squeezed_p_x=dpx < vac - SQUEEZE_TOL,
        squeezed_y=dy < vac - SQUEEZE_TOL,
        squeezed_p_y=dpy < vac - SQUEEZE_TOL,
        delta_x_over_radius=dx_over_r,
    )
