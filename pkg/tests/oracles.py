"""Independent reference implementations used to cross-check the package.

Everything here deliberately avoids the code paths under test: the Monte
Carlo sampler propagates phase-space points (not moments), the Fock-basis
quantities are truncated operator sums, and the steady-state covariance comes
from LAPACK's algebraic Riccati solver.
"""

import math

import numpy as np
from scipy.linalg import solve_continuous_are


def langevin_ensemble(coeffs, cov0, duration, step, n_traj, seed, mean0=None):
    """Classical phase-space ensemble with matched momentum diffusion.

    The drift is integrated with a fourth-order step (the noise is additive,
    so adding the Wiener increment afterwards keeps the weak error dominated
    by statistics); returns (means, covariance) at the final time.
    """
    rng = np.random.default_rng(seed)
    x = rng.multivariate_normal(np.zeros(4) if mean0 is None else mean0, cov0, size=n_traj)
    n = int(round(duration / step))
    h = duration / n
    sx, sy = math.sqrt(coeffs.dpx * h), math.sqrt(coeffs.dpy * h)
    for i in range(n):
        t = i * h
        k1 = x @ coeffs.drift_matrix(t).T
        k2 = (x + 0.5 * h * k1) @ coeffs.drift_matrix(t + 0.5 * h).T
        k3 = (x + 0.5 * h * k2) @ coeffs.drift_matrix(t + 0.5 * h).T
        k4 = (x + h * k3) @ coeffs.drift_matrix(t + h).T
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[:, 1] += sx * rng.standard_normal(n_traj)
        x[:, 3] += sy * rng.standard_normal(n_traj)
    return x.mean(axis=0), np.cov(x.T)


def fock_thermal_purity(n_x: float, n_y: float, cutoff: int = 60) -> float:
    """Tr(rho^2) of a two-mode thermal product state, truncated Fock sums."""

    def single(nbar):
        if nbar == 0:
            return 1.0
        r = nbar / (1.0 + nbar)
        probs = np.array([(1 - r) * r**n for n in range(cutoff + 1)])
        return float(np.sum(probs**2))

    return single(n_x) * single(n_y)


def fock_tmsv_log_negativity(r: float, cutoff: int = 60) -> float:
    """Log-negativity of a two-mode squeezed vacuum from its Schmidt series.

    For a pure state the trace norm of the partial transpose is the squared
    sum of Schmidt coefficients: ||rho^PT||_1 = (sum_n c_n)^2 with
    c_n = sech(r) tanh(r)^n.
    """
    c = np.array([math.tanh(r) ** n for n in range(cutoff + 1)]) / math.cosh(r)
    return 2.0 * math.log(np.sum(c))


def tmsv_covariance(r: float) -> np.ndarray:
    """Covariance of the two-mode squeezed vacuum, vacuum = I/2 convention."""
    ch, sh = math.cosh(2 * r) / 2.0, math.sinh(2 * r) / 2.0
    return np.array(
        [
            [ch, 0, sh, 0],
            [0, ch, 0, -sh],
            [sh, 0, ch, 0],
            [0, -sh, 0, ch],
        ]
    )


def static_riccati_fixed_point(a_mat: np.ndarray, diffusion: np.ndarray, beta_x: float, beta_y: float) -> np.ndarray:
    """Steady conditional covariance from the filter algebraic Riccati equation.

    Solves A P + P A^T - P C^T C P + Q = 0 with C^T C = diag(beta_x, 0,
    beta_y, 0) via the control-form CARE on the transposed system.
    """
    c = np.zeros((2, 4))
    c[0, 0] = math.sqrt(beta_x)
    c[1, 2] = math.sqrt(beta_y)
    return solve_continuous_are(a_mat.T, c.T, diffusion, np.eye(2))
