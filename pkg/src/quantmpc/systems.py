"""True-plant models: discrete LTI pairs, ZOH discretization, benchmarks.

The two benchmark constructors return the printed discrete-time matrices
verbatim; those rounded values are the ground truth all experiments measure
against. The continuous-time motor model is kept only to cross-check the
discretization path against the printed pair.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .numerics import expm


class DimensionMismatch(Exception):
    pass


@dataclass(frozen=True)
class LtiSystem:
    A: np.ndarray
    B: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        if B.shape[0] != A.shape[0]:
            raise DimensionMismatch(f"B rows {B.shape[0]} != state dim {A.shape[0]}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]


@dataclass(frozen=True)
class ContinuousLti:
    Ac: np.ndarray
    Bc: np.ndarray


def step(sys, x, u):
    """One plant transition x+ = Ax + Bu."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != (sys.n,):
        raise DimensionMismatch(f"state has shape {x.shape}, expected ({sys.n},)")
    if u.shape != (sys.m,):
        raise DimensionMismatch(f"input has shape {u.shape}, expected ({sys.m},)")
    return sys.A @ x + sys.B @ u


def discretize_zoh(cont, dt):
    """Zero-order-hold discretization via the augmented-block exponential.

    exp([[Ac, Bc], [0, 0]] * dt) carries (A, B) in its top rows.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    Ac = np.atleast_2d(np.asarray(cont.Ac, dtype=float))
    Bc = np.atleast_2d(np.asarray(cont.Bc, dtype=float))
    n, m = Bc.shape
    M = np.zeros((n + m, n + m))
    M[:n, :n] = Ac
    M[:n, n:] = Bc
    E = expm(M * dt)
    return LtiSystem(E[:n, :n], E[:n, n:], name="zoh")


def motor_continuous():
    """DC-motor ODE with position, angular velocity, and current states.

    Parameters: inertia J=0.01, damping c=0.1, torque constant K=0.01,
    back-EMF constant K_e=0.01, resistance r=1, inductance L=0.5.
    Inputs are (voltage, load torque).
    """
    J, c, K, Ke, r, L = 0.01, 0.1, 0.01, 0.01, 1.0, 0.5
    Ac = np.array([[0.0, 1.0, 0.0],
                   [0.0, -c / J, K / J],
                   [0.0, -Ke / L, -r / L]])
    Bc = np.array([[0.0, 0.0],
                   [0.0, 1.0 / J],
                   [1.0 / L, 0.0]])
    return ContinuousLti(Ac, Bc)


def motor_discrete():
    """DC-motor benchmark, 1 s sampling (published rounded matrices)."""
    A = np.array([[1.000, 0.099, 0.041],
                  [0.000, 0.000, 0.016],
                  [0.000, 0.000, 0.135]])
    B = np.array([[0.048, 8.996],
                  [0.083, 9.991],
                  [0.864, -0.083]])
    return LtiSystem(A, B, name="motor")


def boeing_discrete():
    """Passenger-jet longitudinal model in steady level flight."""
    A = np.array([[0.99, 0.03, -0.02, -0.32],
                  [0.01, 0.47, 4.70, 0.00],
                  [0.02, -0.06, 0.40, 0.00],
                  [0.01, -0.04, 0.72, 0.99]])
    B = np.array([[0.01, 0.99],
                  [-3.44, 1.66],
                  [-0.83, 0.44],
                  [-0.47, 0.25]])
    return LtiSystem(A, B, name="boeing747")


def controllability_rank(sys):
    """Rank of [B, AB, ..., A^{n-1}B] with an SVD threshold tied to the data."""
    blocks = [sys.B]
    for _ in range(sys.n - 1):
        blocks.append(sys.A @ blocks[-1])
    C = np.hstack(blocks)
    sv = np.linalg.svd(C, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > 1e-9 * sv[0]))


_BENCHMARKS = {
    "motor": motor_discrete,
    "boeing747": boeing_discrete,
}


def load_system(path):
    """Custom plant from a JSON file with fields {"A": [[...]], "B": [[...]]}."""
    with open(path) as f:
        doc = json.load(f)
    return LtiSystem(np.array(doc["A"], dtype=float),
                     np.array(doc["B"], dtype=float),
                     name=doc.get("name", "custom"))


def get_system(spec_str):
    """Resolve a benchmark name or a path to a custom-system JSON file."""
    if spec_str in _BENCHMARKS:
        return _BENCHMARKS[spec_str]()
    return load_system(spec_str)
