"""Linear-algebra kernel: solver contracts, Riccati recursion, DARE, expm."""

import numpy as np
import pytest

from quantmpc.numerics import (
    NoConvergence,
    NotSymmetric,
    RankDeficient,
    dare,
    expm,
    lstsq_right,
    riccati_recursion,
    sym_eig_extremes,
)

# Scalar DARE with a = b = q = r = 1 reduces to p = 1 + p - p^2/(1+p),
# whose positive root is the golden ratio.
GOLDEN_RATIO = 1.618033988749895


def random_system(rng, n, m):
    A = rng.uniform(-1.0, 1.0, (n, n)) * 0.9 / n
    B = rng.uniform(-1.0, 1.0, (n, m))
    return A, B


def test_lstsq_right_recovers_exact_model():
    rng = np.random.default_rng(0)
    G = rng.normal(size=(3, 5))
    Psi = rng.normal(size=(5, 40))
    est = lstsq_right(G @ Psi, Psi)
    assert np.max(np.abs(est - G)) < 1e-12


def test_lstsq_right_matches_reference_solver():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n, p, T = rng.integers(1, 5), rng.integers(1, 6), 50
        Y = rng.normal(size=(n, T))
        Psi = rng.normal(size=(p, T))
        est = lstsq_right(Y, Psi)
        ref = np.linalg.lstsq(Psi.T, Y.T, rcond=None)[0].T
        assert np.max(np.abs(est - ref)) < 1e-10


def test_lstsq_right_rejects_column_mismatch():
    with pytest.raises(ValueError):
        lstsq_right(np.ones((2, 5)), np.ones((3, 6)))


def test_lstsq_right_rejects_underdetermined():
    with pytest.raises(RankDeficient):
        lstsq_right(np.ones((2, 2)), np.ones((3, 2)))


def test_lstsq_right_rejects_rank_deficient_gram():
    Psi = np.vstack([np.ones(20), np.ones(20)])
    with pytest.raises(RankDeficient):
        lstsq_right(np.ones((1, 20)), Psi)


def test_riccati_single_step_matches_hand_formula():
    A = np.array([[1.0, 0.3], [0.0, 0.8]])
    B = np.array([[0.0], [1.0]])
    Q = np.eye(2)
    R = np.array([[2.0]])
    Qf = np.diag([3.0, 1.0])
    seq = riccati_recursion(A, B, Q, R, Qf, 1)
    PB = Qf @ B
    expected = A.T @ Qf @ A - A.T @ PB @ np.linalg.solve(R + B.T @ PB, PB.T @ A) + Q
    assert np.allclose(seq[0], Qf)
    assert np.allclose(seq[-1], expected, atol=1e-14)


def test_riccati_sequence_length_and_symmetry():
    rng = np.random.default_rng(2)
    A, B = random_system(rng, 3, 2)
    seq = riccati_recursion(A, B, np.eye(3), np.eye(2), np.eye(3), 7)
    assert len(seq) == 8
    for P in seq:
        assert np.allclose(P, P.T)


def test_riccati_rejects_empty_horizon():
    with pytest.raises(ValueError):
        riccati_recursion(np.eye(1), np.eye(1), np.eye(1), np.eye(1), np.eye(1), 0)


def test_dare_scalar_golden_ratio():
    P = dare(np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]))
    assert abs(P[0, 0] - GOLDEN_RATIO) < 1e-10


def test_dare_satisfies_fixed_point_residual():
    rng = np.random.default_rng(3)
    for _ in range(5):
        A, B = random_system(rng, 3, 2)
        Q, R = np.eye(3), np.eye(2)
        P = dare(A, B, Q, R)
        PB = P @ B
        resid = A.T @ P @ A - A.T @ PB @ np.linalg.solve(R + B.T @ PB, PB.T @ A) + Q - P
        assert np.max(np.abs(resid)) < 1e-9


def test_dare_is_riccati_limit():
    rng = np.random.default_rng(4)
    A, B = random_system(rng, 2, 1)
    P = dare(A, B, np.eye(2), np.eye(1))
    P_long = riccati_recursion(A, B, np.eye(2), np.eye(1), np.eye(2), 400)[-1]
    assert np.max(np.abs(P - P_long)) < 1e-9


def test_dare_diverges_for_unstabilizable_pair():
    A = np.array([[1.0, 0.0], [0.0, 1.0]])
    B = np.array([[1.0], [0.0]])
    with pytest.raises(NoConvergence):
        dare(A, B, np.eye(2), np.eye(1), max_iter=500)


def test_sym_eig_extremes_on_known_spectrum():
    lo, hi = sym_eig_extremes(np.diag([4.0, -1.0, 2.5]))
    assert lo == pytest.approx(-1.0)
    assert hi == pytest.approx(4.0)


def test_sym_eig_extremes_rejects_asymmetry():
    with pytest.raises(NotSymmetric):
        sym_eig_extremes(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_expm_nilpotent_exact():
    M = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(expm(M), np.array([[1.0, 1.0], [0.0, 1.0]]), atol=1e-15)


def test_expm_inverse_product_residual():
    rng = np.random.default_rng(5)
    for _ in range(5):
        M = rng.normal(size=(4, 4))
        resid = expm(M) @ expm(-M) - np.eye(4)
        assert np.linalg.norm(resid) < 1e-9
