"""Receding-horizon control: terminal synthesis, condensed QP, closed loop.

The controller predicts with an identified model while the driver applies
the resulting inputs to the true plant, so model error shows up exactly
where it would in the field. States are eliminated from the horizon
problem up front; what remains is a box-constrained quadratic program in
the stacked input sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .numerics import dare, sym_eig_extremes
from .systems import LtiSystem, controllability_rank


class Uncontrollable(Exception):
    """Model matrices do not form a controllable pair."""


class MaxIterations(Exception):
    """QP solver hit its iteration budget before reaching tolerance."""

    def __init__(self, residual, budget):
        self.residual = residual
        self.budget = budget
        super().__init__(f"no convergence in {budget} iterations, residual {residual:.3e}")


SOFT_PENALTY_WEIGHT = 1e6


def _matrices(model):
    """Accept either an identified model (Ahat/Bhat) or a plant (A/B)."""
    if hasattr(model, "Ahat"):
        return np.asarray(model.Ahat, dtype=float), np.asarray(model.Bhat, dtype=float)
    return np.asarray(model.A, dtype=float), np.asarray(model.B, dtype=float)


@dataclass(frozen=True)
class MpcConfig:
    """Horizon problem data: weights, horizon, constraint boxes.

    Qf=None means the terminal cost is synthesized from the model at use
    time. Boxes are per-dimension (lo, hi) tuples, with None meaning
    unbounded; infinities are allowed for one-sided bounds. terminal_mode
    is None or ("level_set", radius), the latter pulling the terminal
    state into the named sublevel set of the terminal cost via a soft
    penalty.
    """

    Q: np.ndarray
    R: np.ndarray
    Qf: np.ndarray = None
    Th: int = 20
    input_box: tuple = None
    state_box: tuple = None
    terminal_mode: tuple = None

    def __post_init__(self):
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        R = np.atleast_2d(np.asarray(self.R, dtype=float))
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)
        if self.Qf is not None:
            object.__setattr__(self, "Qf", np.atleast_2d(np.asarray(self.Qf, dtype=float)))
        for name, M in (("Q", Q), ("R", R)):
            lo, _ = sym_eig_extremes(M)
            if lo <= 0.0:
                raise ValueError(f"{name} must be positive definite, min eigenvalue {lo:.3e}")
        if self.Th < 1:
            raise ValueError("horizon must be at least 1")


def synthesize_terminal(model, Q, R):
    """Terminal cost and feedback gain from the model's Riccati fixed point.

    Returns (Qf, Kgain) with Qf the stationary cost-to-go and Kgain the
    matching state-feedback gain; the pair makes the terminal cost an
    exact control Lyapunov function for the model.
    """
    A, B = _matrices(model)
    sys_view = LtiSystem(A, B)
    rank = controllability_rank(sys_view)
    if rank < sys_view.n:
        raise Uncontrollable(f"controllability matrix rank {rank} < {sys_view.n}")
    Qf = dare(A, B, np.atleast_2d(np.asarray(Q, float)), np.atleast_2d(np.asarray(R, float)))
    Kgain = np.linalg.solve(np.atleast_2d(np.asarray(R, float)) + B.T @ Qf @ B, B.T @ Qf @ A)
    return Qf, Kgain


def resolve_config(model, cfg):
    """Fill in a synthesized Qf when the config leaves it unset."""
    if cfg.Qf is not None:
        return cfg
    Qf, _ = synthesize_terminal(model, cfg.Q, cfg.R)
    return replace(cfg, Qf=Qf)


@dataclass(frozen=True)
class CondensedQp:
    """Horizon problem reduced to the stacked input vector u.

    Objective: u^T H u + 2 f^T u + const, plus the soft penalties when
    constraint boxes are active. Gamma and x_offset give the predicted
    states as x_stack = Gamma u + x_offset for penalty evaluation.
    """

    H: np.ndarray
    f: np.ndarray
    const: float
    lo: np.ndarray
    hi: np.ndarray
    Gamma: np.ndarray
    x_offset: np.ndarray
    state_lo: np.ndarray
    state_hi: np.ndarray
    terminal_Qf: np.ndarray
    terminal_radius: float


def _tile_box(box, dims, count):
    if box is None:
        return None, None
    if len(box) != dims:
        raise ValueError(f"box has {len(box)} dims, expected {dims}")
    lo = np.tile(np.array([b[0] for b in box], dtype=float), count)
    hi = np.tile(np.array([b[1] for b in box], dtype=float), count)
    return lo, hi


def condense(model, cfg, x_t, ref):
    """Eliminate states from the horizon problem at the current state.

    Prediction x_k = A^k x_t + sum_j A^(k-1-j) B u_j turns the horizon
    cost into a quadratic in the stacked inputs; the QP objective equals
    the horizon objective up to a constant independent of u.
    """
    A, B = _matrices(model)
    cfg = resolve_config(model, cfg)
    n, m, Th = A.shape[0], B.shape[1], cfg.Th
    x_t = np.asarray(x_t, dtype=float).reshape(n)
    ref = np.zeros(n) if ref is None else np.asarray(ref, dtype=float).reshape(n)

    powers = [np.eye(n)]
    for _ in range(Th):
        powers.append(A @ powers[-1])
    Phi = np.vstack([powers[k] for k in range(1, Th + 1)])
    Gamma = np.zeros((n * Th, m * Th))
    for k in range(1, Th + 1):
        for j in range(k):
            Gamma[(k - 1) * n : k * n, j * m : (j + 1) * m] = powers[k - 1 - j] @ B

    W = np.zeros((n * Th, n * Th))
    for k in range(Th - 1):
        W[k * n : (k + 1) * n, k * n : (k + 1) * n] = cfg.Q
    W[(Th - 1) * n :, (Th - 1) * n :] = cfg.Qf
    Rbar = np.kron(np.eye(Th), cfg.R)

    x_offset = Phi @ x_t
    ref_stack = np.tile(ref, Th)
    dev = x_offset - ref_stack
    H = Rbar + Gamma.T @ W @ Gamma
    f = Gamma.T @ (W @ dev)
    d0 = x_t - ref
    const = float(d0 @ cfg.Q @ d0 + dev @ W @ dev)

    lo, hi = _tile_box(cfg.input_box, m, Th)
    state_lo, state_hi = _tile_box(cfg.state_box, n, Th)
    terminal_Qf, terminal_radius = None, None
    if cfg.terminal_mode is not None:
        mode, radius = cfg.terminal_mode
        if mode != "level_set":
            raise ValueError(f"unknown terminal mode {mode!r}")
        terminal_Qf, terminal_radius = cfg.Qf, float(radius)
    return CondensedQp(
        H=H,
        f=f,
        const=const,
        lo=lo,
        hi=hi,
        Gamma=Gamma,
        x_offset=x_offset,
        state_lo=state_lo,
        state_hi=state_hi,
        terminal_Qf=terminal_Qf,
        terminal_radius=terminal_radius,
    )


def _power_lambda_max(H, iters=200, tol=1e-12):
    """Dominant eigenvalue of a symmetric PSD matrix by power iteration."""
    v = np.ones(H.shape[0]) / np.sqrt(H.shape[0])
    lam = 0.0
    for _ in range(iters):
        w = H @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_new = float(v @ H @ v)
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def _penalty_value_grad(qp, u):
    """Soft-constraint penalty and gradient at u (zero when inactive)."""
    value = 0.0
    grad = np.zeros_like(u)
    if qp.state_lo is not None or qp.terminal_Qf is not None:
        x = qp.Gamma @ u + qp.x_offset
    if qp.state_lo is not None:
        over = np.maximum(0.0, x - qp.state_hi)
        under = np.maximum(0.0, qp.state_lo - x)
        value += SOFT_PENALTY_WEIGHT * float(over @ over + under @ under)
        grad += 2.0 * SOFT_PENALTY_WEIGHT * (qp.Gamma.T @ (over - under))
    if qp.terminal_Qf is not None:
        n = qp.terminal_Qf.shape[0]
        xT = x[-n:]
        gap = float(xT @ qp.terminal_Qf @ xT) - qp.terminal_radius**2
        if gap > 0.0:
            value += SOFT_PENALTY_WEIGHT * gap**2
            grad += 4.0 * SOFT_PENALTY_WEIGHT * gap * (qp.Gamma[-n:].T @ (qp.terminal_Qf @ xT))
    return value, grad


def _has_penalty(qp):
    return qp.state_lo is not None or qp.terminal_Qf is not None


QP_TOL = 1e-8
QP_MAX_ITER = 20000


def solve_qp(qp, u_init=None):
    """Minimize the condensed objective; returns (u, iterations, residual).

    Unconstrained problems are solved exactly. Otherwise an accelerated
    projected-gradient iteration runs with step 1/lambda_max, the
    dominant curvature found by power iteration, until the fixed-point
    residual ||u - proj(u - grad/L)||_inf drops to 1e-8. Soft-penalty
    curvature is folded into the step. The penalty for a terminal level
    set is not globally quadratic, so its step is safeguarded twice:
    L doubles whenever the objective rises between checkpoints, and a
    non-finite iterate rolls back to the last finite one with a larger L
    and restarted momentum. Momentum is never restarted otherwise.
    """
    dim = qp.H.shape[0]
    if qp.lo is None and not _has_penalty(qp):
        u = np.linalg.solve(qp.H, -qp.f)
        residual = float(np.max(np.abs(qp.H @ u + qp.f)))
        return u, 0, residual

    L = _power_lambda_max(qp.H) * 1.01
    if qp.state_lo is not None or qp.terminal_Qf is not None:
        L += SOFT_PENALTY_WEIGHT * _power_lambda_max(qp.Gamma.T @ qp.Gamma) * 1.01

    def grad(u):
        g = qp.H @ u + qp.f
        if _has_penalty(qp):
            _, pg = _penalty_value_grad(qp, u)
            g = g + 0.5 * pg
        return g

    def value(u):
        v = float(u @ qp.H @ u + 2.0 * qp.f @ u)
        if _has_penalty(qp):
            pv, _ = _penalty_value_grad(qp, u)
            v += pv
        return v

    def proj(u):
        if qp.lo is None:
            return u
        return np.clip(u, qp.lo, qp.hi)

    u = proj(np.zeros(dim) if u_init is None else np.asarray(u_init, dtype=float).copy())
    u_prev = u.copy()
    t_acc = 1.0
    guard = qp.terminal_Qf is not None
    if guard:
        u_best = u.copy()
        best_val = value(u)
    residual = np.inf
    for it in range(1, QP_MAX_ITER + 1):
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_acc**2))
        y = u + ((t_acc - 1.0) / t_next) * (u - u_prev)
        u_prev = u
        with np.errstate(over="ignore", invalid="ignore"):
            u = proj(y - grad(y) / L)
        t_acc = t_next
        if guard:
            with np.errstate(over="ignore", invalid="ignore"):
                val = value(u) if np.all(np.isfinite(u)) else np.inf
            if not np.isfinite(val):
                u = u_best.copy()
                u_prev = u_best.copy()
                t_acc = 1.0
                L *= 4.0
                continue
            if val < best_val:
                best_val = val
                u_best = u.copy()
            if it % 100 == 0 and val > best_val * (1.0 + 1e-9) and val > best_val + 1e-12:
                L *= 2.0
        residual = float(np.max(np.abs(u - proj(u - grad(u) / L))))
        if residual <= QP_TOL:
            return u, it, residual
    raise MaxIterations(residual, QP_MAX_ITER)


@dataclass(frozen=True)
class MpcSolution:
    """One horizon solve: input sequence, predicted states, cost."""

    u_seq: np.ndarray
    x_pred: np.ndarray
    Jstar: float
    iterations: int
    kkt_residual: float


def mpc_step(model, cfg, x_t, ref=None, u_init=None):
    """Solve the horizon problem at x_t and package the solution.

    x_pred is rebuilt through the model recursion (not read off the
    condensed algebra) so it satisfies the prediction dynamics exactly;
    Jstar is the horizon objective evaluated on that trajectory.
    """
    A, B = _matrices(model)
    cfg = resolve_config(model, cfg)
    n, m = A.shape[0], B.shape[1]
    x_t = np.asarray(x_t, dtype=float).reshape(n)
    ref_v = np.zeros(n) if ref is None else np.asarray(ref, dtype=float).reshape(n)

    qp = condense(model, cfg, x_t, ref_v)
    u_vec, iterations, residual = solve_qp(qp, u_init)
    u_seq = u_vec.reshape(cfg.Th, m)

    x_pred = np.empty((cfg.Th + 1, n))
    x_pred[0] = x_t
    for k in range(cfg.Th):
        x_pred[k + 1] = A @ x_pred[k] + B @ u_seq[k]

    J = 0.0
    for k in range(cfg.Th):
        dx = x_pred[k] - ref_v
        J += float(dx @ cfg.Q @ dx + u_seq[k] @ cfg.R @ u_seq[k])
    dT = x_pred[cfg.Th] - ref_v
    J += float(dT @ cfg.Qf @ dT)
    return MpcSolution(u_seq=u_seq, x_pred=x_pred, Jstar=J, iterations=iterations, kkt_residual=residual)


@dataclass(frozen=True)
class ClosedLoopResult:
    """Trajectory of the true plant under receding-horizon inputs."""

    states: np.ndarray
    inputs: np.ndarray
    stage_costs: np.ndarray
    total_cost: float
    tail_norm: float


def tail_sup(states, fraction=0.2):
    """Sup of the state norm over the trailing fraction of a trajectory."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    count = max(1, int(np.ceil(fraction * states.shape[0])))
    return float(np.max(np.linalg.norm(states[-count:], axis=1)))


def run_closed_loop(plant, model, cfg, x0, ref=None, T_sim=100):
    """Drive the true plant with inputs planned on the model.

    Each step solves the horizon problem at the measured state, applies
    only the first input to the plant, and warm-starts the next solve
    with the shifted sequence. Stage costs are measured on the plant
    trajectory with the configured weights.
    """
    if T_sim < 1:
        raise ValueError("T_sim must be at least 1")
    cfg = resolve_config(model, cfg)
    n, m = plant.n, plant.m
    ref_v = np.zeros(n) if ref is None else np.asarray(ref, dtype=float).reshape(n)
    states = np.empty((T_sim + 1, n))
    inputs = np.empty((T_sim, m))
    stage_costs = np.empty(T_sim)
    states[0] = np.asarray(x0, dtype=float).reshape(n)
    warm = None
    for t in range(T_sim):
        sol = mpc_step(model, cfg, states[t], ref_v, warm)
        u = sol.u_seq[0]
        inputs[t] = u
        dx = states[t] - ref_v
        stage_costs[t] = float(dx @ cfg.Q @ dx + u @ cfg.R @ u)
        states[t + 1] = plant.A @ states[t] + plant.B @ u
        warm = np.concatenate([sol.u_seq[1:].ravel(), sol.u_seq[-1]])
    return ClosedLoopResult(
        states=states,
        inputs=inputs,
        stage_costs=stage_costs,
        total_cost=float(np.sum(stage_costs)),
        tail_norm=tail_sup(states),
    )
