"""Least-squares identification from snapshots, with executable error laws.

Besides the estimator itself this module provides the two analytic
handles on quantization error: the large-data resolution-bias law
(the deterministic part of the error, quadratic in the resolution) and
the exact finite-data decomposition of the estimate into the
unquantized estimate plus perturbation terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import lstsq_right


class NotPositiveDefinite(Exception):
    """The excitation Gram (1/T) Psi Psi^T is not positive definite."""


class SingularMeps(Exception):
    """Perturbation system could not be solved; resample the dither."""


@dataclass(frozen=True)
class IdentifiedModel:
    """Estimate G = [A, B] with the conditioning of the regressor."""

    Ahat: np.ndarray
    Bhat: np.ndarray
    Ghat: np.ndarray
    cond_psi: float


@dataclass(frozen=True)
class ResolutionBiasLaw:
    """Large-data bias of the estimate as a function of resolution eps.

    predicted_Ghat = [A, B] - eps^2 [DeltaA, DeltaB] with
    [DeltaA, DeltaB] = [A, B] (12 S + eps^2 I)^-1 and S the excitation
    Gram (1/T) Psi Psi^T of the unquantized data. cA and cB are the
    Frobenius norms of DeltaA and DeltaB; downstream bound computations
    use them as the per-unit-eps^2 model-error constants.
    """

    DeltaA: np.ndarray
    DeltaB: np.ndarray
    cA: float
    cB: float
    predicted_Ghat: np.ndarray


@dataclass(frozen=True)
class FiniteDataDecomposition:
    """Exact split of the quantized-data estimate at finite sample size.

    The identity Ghat = G_uqz - G_uqz K + L holds in exact arithmetic;
    residual reports its numerical defect. M_eps and N_eps are the
    perturbations of the regressor Gram and the cross term induced by
    the quantization errors.
    """

    G_uqz: np.ndarray
    K: np.ndarray
    L: np.ndarray
    M_eps: np.ndarray
    N_eps: np.ndarray
    residual: float


def identify(snap):
    """Least-squares model Ghat = Xplus Psi^T (Psi Psi^T)^-1 from snapshots.

    Raises RankDeficient (from the solver) when the data is not
    persistently exciting; enlarging the dataset is the usual fix.
    """
    Ghat = lstsq_right(snap.Xplus, snap.Psi)
    n = snap.X.shape[0]
    sv = np.linalg.svd(snap.Psi, compute_uv=False)
    return IdentifiedModel(
        Ahat=Ghat[:, :n],
        Bhat=Ghat[:, n:],
        Ghat=Ghat,
        cond_psi=float(sv[0] / sv[-1]),
    )


def relative_errors(model, truth):
    """Frobenius-relative errors (relA, relB) of the estimate vs truth."""
    relA = np.linalg.norm(truth.A - model.Ahat) / np.linalg.norm(truth.A)
    relB = np.linalg.norm(truth.B - model.Bhat) / np.linalg.norm(truth.B)
    return float(relA), float(relB)


def predict_resolution_bias(truth, raw, eps):
    """Evaluate the large-data bias law at resolution eps.

    `raw` must be unquantized excitation data; its Gram stands in for
    the infinite-data limit, so predictions carry an O(1/sqrt(T))
    Monte-Carlo gap on top of the law itself.
    """
    T = raw.Psi.shape[1]
    S = (raw.Psi @ raw.Psi.T) / T
    lam = np.linalg.eigvalsh(S)
    if lam[0] <= 0.0:
        raise NotPositiveDefinite(f"excitation Gram has min eigenvalue {lam[0]:.3e}")
    G = np.hstack([truth.A, truth.B])
    p = S.shape[0]
    # Delta (12 S + eps^2 I) = G, solved without forming an inverse
    Delta = np.linalg.solve(12.0 * S + eps**2 * np.eye(p), G.T).T
    n = truth.n
    DeltaA, DeltaB = Delta[:, :n], Delta[:, n:]
    return ResolutionBiasLaw(
        DeltaA=DeltaA,
        DeltaB=DeltaB,
        cA=float(np.linalg.norm(DeltaA)),
        cB=float(np.linalg.norm(DeltaB)),
        predicted_Ghat=G - eps**2 * Delta,
    )


def decompose_finite_data_error(raw, quantized, errs, model):
    """Exact perturbation decomposition of the quantized-data estimate.

    With E the stacked regressor error and F the error of Xplus (both
    raw minus quantized), the Gram and cross-term perturbations are

        M_eps = -(E Psi^T + Psi E^T + E E^T)
        N_eps = -(F Psi^T + Xplus E^T + F E^T)

    in terms of the quantized matrices, and the estimate satisfies
    Ghat = G_uqz - G_uqz K + L with K = M_eps (Psi Psi^T)^-1 and
    L = N_eps (Psi Psi^T)^-1. K is evaluated in that equivalent form
    rather than by inverting M_eps itself, which keeps the computation
    defined even for vanishing errors and avoids amplifying roundoff
    through a small, nearly singular perturbation matrix.
    """
    G_uqz = lstsq_right(raw.Xplus, raw.Psi)
    E = errs.EPsi
    F = errs.Explus
    Psi_q = quantized.Psi
    Xp_q = quantized.Xplus
    cross = E @ Psi_q.T
    M_eps = -(cross + cross.T + E @ E.T)
    N_eps = -(F @ Psi_q.T + Xp_q @ E.T + F @ E.T)
    S1 = Psi_q @ Psi_q.T
    try:
        K = np.linalg.solve(S1, M_eps).T
        L = np.linalg.solve(S1, N_eps.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularMeps(f"perturbation solve failed: {exc}") from exc
    if not (np.all(np.isfinite(K)) and np.all(np.isfinite(L))):
        raise SingularMeps("perturbation solve produced non-finite entries")
    residual = float(np.linalg.norm(model.Ghat - (G_uqz - G_uqz @ K + L)))
    return FiniteDataDecomposition(G_uqz=G_uqz, K=K, L=L, M_eps=M_eps, N_eps=N_eps, residual=residual)
