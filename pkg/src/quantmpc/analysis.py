"""Certified bounds and trend fits for the quantized control loop.

Turns an identified model plus the resolution-bias law into an explicit
ultimate-bound certificate for the closed loop, and provides the line
and power-law fits used to summarize sweep results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mpc import tail_sup
from .numerics import riccati_recursion, sym_eig_extremes


class InvalidWeights(Exception):
    """Stage cost weights are not positive definite."""


class DegenerateAbscissa(Exception):
    """Line fit needs at least two distinct x values."""


class NonPositiveValue(Exception):
    """Power-law fit needs strictly positive values."""


@dataclass(frozen=True)
class BoundConfig:
    """Free parameters of the ultimate-bound certificate.

    theta splits the Lyapunov decrement; rho is the radius of the ball
    on which the value function's Lipschitz constant is taken and must
    contain the closed-loop trajectory for the certificate to apply.
    """

    theta: float = 0.5
    rho: float = 2.0
    tail_fraction: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0,1), got {self.theta}")
        if not self.rho > 0.0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not 0.0 < self.tail_fraction <= 1.0:
            raise ValueError(f"tail_fraction must lie in (0,1], got {self.tail_fraction}")


def default_bound_config(x0, theta=0.5, tail_fraction=0.2):
    """Bound parameters with rho sized to the starting state.

    rho = 2 ||x0|| keeps the whole regulation transient inside the ball
    for the loops exercised here; a unit floor covers x0 = 0.
    """
    rho = max(2.0 * float(np.linalg.norm(np.asarray(x0, dtype=float))), 1.0)
    return BoundConfig(theta=theta, rho=rho, tail_fraction=tail_fraction)


@dataclass(frozen=True)
class UltimateBoundReport:
    """Every quantity entering the closed-loop ultimate bound.

    C_eps = omega_v^2 eps^4 (cA^2/(2 alpha1) + cB^2/(2 alpha2)) collects
    the model-error disturbance power; the bound radius is
    delta_eps = sqrt((lambda_max/lambda_min) * 2 C_eps/(theta alpha1)).
    Both follow the printed formulas exactly so reports can be
    recomputed and cross-checked field by field.
    """

    P: np.ndarray
    lambda_min: float
    lambda_max: float
    alpha1: float
    alpha2: float
    cA: float
    cB: float
    omega_v: float
    C_eps: float
    delta_eps: float


def ultimate_bound_report(model, Q, R, Qf, Th, pred, eps, cfg):
    """Evaluate the ultimate-bound certificate for one resolution.

    P is the cost-to-go of the model's horizon problem (the first matrix
    of the backward recursion), alpha1/alpha2 floor the stage cost, and
    cA/cB come from the resolution-bias law in `pred`. omega_v is the
    Lipschitz constant 2 lambda_max(P) rho of the value function on the
    rho-ball.
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    alpha1 = float(sym_eig_extremes(Q)[0])
    alpha2 = float(sym_eig_extremes(R)[0])
    if alpha1 <= 0.0 or alpha2 <= 0.0:
        raise InvalidWeights(f"min eigenvalues Q: {alpha1:.3e}, R: {alpha2:.3e}")
    P = riccati_recursion(model.Ahat, model.Bhat, Q, R, Qf, Th)[-1]
    lam_min, lam_max = sym_eig_extremes(P)
    omega_v = 2.0 * lam_max * cfg.rho
    C_eps = omega_v**2 * eps**4 * (pred.cA**2 / (2.0 * alpha1) + pred.cB**2 / (2.0 * alpha2))
    delta_eps = float(np.sqrt((lam_max / lam_min) * 2.0 * C_eps / (cfg.theta * alpha1)))
    return UltimateBoundReport(
        P=P,
        lambda_min=float(lam_min),
        lambda_max=float(lam_max),
        alpha1=alpha1,
        alpha2=alpha2,
        cA=pred.cA,
        cB=pred.cB,
        omega_v=float(omega_v),
        C_eps=float(C_eps),
        delta_eps=delta_eps,
    )


def empirical_ultimate_bound(res, tail_fraction=0.2):
    """Sup of the state norm over the trailing fraction of a closed loop."""
    return tail_sup(res.states, tail_fraction)


def trajectory_exceeds_radius(states, rho):
    """True when any state leaves the rho-ball the certificate assumes."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    return bool(np.max(np.linalg.norm(states, axis=1)) > rho)


def fit_slope(xs, ys):
    """Ordinary least-squares line fit; returns (slope, intercept, r2)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 2 or np.unique(xs).size < 2:
        raise DegenerateAbscissa(f"need at least 2 distinct x values, got {xs.tolist()}")
    slope, intercept = np.polyfit(xs, ys, 1)
    ss_res = float(np.sum((ys - (slope * xs + intercept)) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res <= 1e-24 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)


def scaling_exponent(pairs):
    """Exponent p of a power law value ~ eps^p from (eps, value) pairs."""
    eps = np.array([p[0] for p in pairs], dtype=float)
    values = np.array([p[1] for p in pairs], dtype=float)
    if np.any(values <= 0.0) or np.any(eps <= 0.0):
        raise NonPositiveValue("power-law fit needs positive resolutions and values")
    slope, _, _ = fit_slope(np.log(eps), np.log(values))
    return slope
