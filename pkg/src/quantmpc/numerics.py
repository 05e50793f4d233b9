"""Dense linear-algebra kernel shared by the identification and control code.

Everything here is a pure function of its arguments. Matrices are plain
row-major numpy arrays; sizes stay small (n <= 10 state dims), so clarity
wins over blocking tricks throughout.
"""

import numpy as np
import scipy.linalg


class RankDeficient(Exception):
    """Regressor Gram matrix is numerically singular (data not exciting)."""


class NoConvergence(Exception):
    """Fixed-point iteration exhausted its iteration budget."""


class NotSymmetric(Exception):
    """A symmetric-only routine was handed an asymmetric matrix."""


RCOND_MIN = 1e-12


def lstsq_right(Y, Psi):
    """Minimize ||Y - G Psi||_F over G, i.e. G = Y Psi^T (Psi Psi^T)^-1.

    The Gram matrix is formed explicitly (p x p with p small) and the
    system is solved by partially pivoted LU; no pseudo-inverse is built.
    Raises RankDeficient when the reciprocal condition number of the Gram
    falls below 1e-12.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    Psi = np.atleast_2d(np.asarray(Psi, dtype=float))
    if Y.shape[1] != Psi.shape[1]:
        raise ValueError(f"column mismatch: Y has {Y.shape[1]}, Psi has {Psi.shape[1]}")
    if Psi.shape[1] < Psi.shape[0]:
        raise RankDeficient(f"need at least {Psi.shape[0]} samples, got {Psi.shape[1]}")
    gram = Psi @ Psi.T
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[0] <= 0.0 or sv[-1] / sv[0] < RCOND_MIN:
        raise RankDeficient(f"gram rcond {0.0 if sv[0] <= 0 else sv[-1] / sv[0]:.3e} below {RCOND_MIN}")
    # G gram = Y Psi^T  =>  gram G^T = Psi Y^T
    G = np.linalg.solve(gram, Psi @ Y.T).T
    # optimality certificate: the residual must be orthogonal to the rows of Psi
    orth = np.linalg.norm((Y - G @ Psi) @ Psi.T)
    scale = np.linalg.norm(Y) * np.linalg.norm(Psi)
    if orth > 1e-8 * max(scale, 1e-300):
        raise RankDeficient(f"orthogonality defect {orth:.3e} vs scale {scale:.3e}: gram solve unreliable")
    return G


def riccati_recursion(A, B, Q, R, Qf, Th):
    """Backward Riccati sweep over a horizon of Th steps.

    Returns [P_Th, ..., P_0] with P_Th = Qf and
    P_{k-1} = A^T P_k A - A^T P_k B (R + B^T P_k B)^-1 B^T P_k A + Q.
    """
    if Th < 1:
        raise ValueError("horizon must be at least 1")
    A, B, Q, R, Qf = (np.asarray(M, dtype=float) for M in (A, B, Q, R, Qf))
    seq = [Qf]
    P = Qf
    for _ in range(Th):
        PA = P @ A
        PB = P @ B
        P = A.T @ PA - A.T @ PB @ np.linalg.solve(R + B.T @ PB, PB.T @ A) + Q
        P = 0.5 * (P + P.T)
        seq.append(P)
    return seq


def dare(A, B, Q, R, tol=1e-11, max_iter=10000):
    """Stationary solution of the discrete-time algebraic Riccati equation.

    Iterates the same backward recursion used for the finite-horizon
    terminal cost until successive iterates agree to `tol`; raises
    NoConvergence when the budget runs out (unstabilizable pair the usual
    culprit).
    """
    A, B, Q, R = (np.asarray(M, dtype=float) for M in (A, B, Q, R))
    P = np.array(Q, dtype=float)
    for _ in range(max_iter):
        PA = P @ A
        PB = P @ B
        Pn = A.T @ PA - A.T @ PB @ np.linalg.solve(R + B.T @ PB, PB.T @ A) + Q
        Pn = 0.5 * (Pn + Pn.T)
        if np.max(np.abs(Pn - P)) <= tol * max(1.0, np.max(np.abs(Pn))):
            return Pn
        P = Pn
    raise NoConvergence(f"Riccati fixed point not reached in {max_iter} iterations")


def sym_eig_extremes(P, sym_tol=1e-10):
    """Smallest and largest eigenvalue of a symmetric matrix."""
    P = np.asarray(P, dtype=float)
    scale = max(1.0, np.max(np.abs(P)))
    if np.max(np.abs(P - P.T)) > sym_tol * scale:
        raise NotSymmetric(f"asymmetry {np.max(np.abs(P - P.T)):.3e} exceeds tolerance")
    w = np.linalg.eigvalsh(0.5 * (P + P.T))
    return float(w[0]), float(w[-1])


def expm(M):
    """Matrix exponential (scaling-and-squaring, delegated to scipy)."""
    return scipy.linalg.expm(np.asarray(M, dtype=float))
