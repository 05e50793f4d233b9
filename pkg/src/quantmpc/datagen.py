"""Excitation data for identification, and its dithered quantization.

Data is arranged as snapshot matrices: columns of X, Xplus, U are
(x_t, x_{t+1}, u_t) triples concatenated across independent trajectories,
and Psi stacks X over U. Every random draw comes from the counter-based
generator in `quantizer`, so results are pure functions of the seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .quantizer import (
    QuantizerSpec,
    counter_uniforms,
    dither_quantize_array,
    spec_from_samples,
    stable_seed,
)


class SaturationExceeded(Exception):
    """Too many raw samples fell outside the quantizer range."""

    def __init__(self, fraction, limit):
        self.fraction = fraction
        self.limit = limit
        super().__init__(
            f"saturation fraction {fraction:.2e} exceeds limit {limit:.2e}; "
            "widen the quantizer ranges or regenerate the excitation"
        )


def centered_box(dims, half_width=1.0):
    """Per-dimension interval tuple (-half_width, half_width) x dims."""
    return tuple((-float(half_width), float(half_width)) for _ in range(dims))


@dataclass(frozen=True)
class ExcitationConfig:
    """Open-loop excitation: random initial states, i.i.d. uniform inputs.

    Boxes are per-dimension (lo, hi) tuples. Each trajectory consumes a
    dedicated slice of the counter stream keyed by `seed`, so trajectories
    can be generated in any order (or in parallel) with identical results.
    """

    n_traj: int
    steps_per_traj: int
    init_box: tuple
    input_box: tuple
    seed: int

    def __post_init__(self):
        if self.n_traj < 1 or self.steps_per_traj < 1:
            raise ValueError("n_traj and steps_per_traj must be at least 1")
        for name, box in (("init_box", self.init_box), ("input_box", self.input_box)):
            if len(box) == 0:
                raise ValueError(f"{name} has no dimensions")
            for lo, hi in box:
                if not lo <= hi:
                    raise ValueError(f"{name} interval ({lo}, {hi}) is empty")


@dataclass(frozen=True)
class SnapshotData:
    """Columnwise data matrices with Psi = [X; U].

    steps_per_traj records the trajectory length so that downstream code
    can recover which columns are consecutive in time; all trajectories
    share this length and columns are trajectory-major.
    """

    X: np.ndarray
    Xplus: np.ndarray
    U: np.ndarray
    Psi: np.ndarray
    steps_per_traj: int

    @classmethod
    def assemble(cls, X, Xplus, U, steps_per_traj):
        # normalize to row-major so downstream BLAS calls take the same
        # code path whether the data was just generated or cache-loaded
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=float)))
        Xplus = np.ascontiguousarray(np.atleast_2d(np.asarray(Xplus, dtype=float)))
        U = np.ascontiguousarray(np.atleast_2d(np.asarray(U, dtype=float)))
        T = X.shape[1]
        if Xplus.shape != X.shape:
            raise ValueError(f"Xplus shape {Xplus.shape} != X shape {X.shape}")
        if U.shape[1] != T:
            raise ValueError(f"U has {U.shape[1]} columns, X has {T}")
        if T % steps_per_traj != 0:
            raise ValueError(f"{T} columns not divisible by steps_per_traj {steps_per_traj}")
        return cls(X=X, Xplus=Xplus, U=U, Psi=np.vstack([X, U]), steps_per_traj=int(steps_per_traj))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def m(self):
        return self.U.shape[0]

    @property
    def T(self):
        return self.X.shape[1]

    @property
    def n_traj(self):
        return self.T // self.steps_per_traj


@dataclass(frozen=True)
class ErrorMatrices:
    """Quantization errors raw - quantized, stacked like the snapshots."""

    Ex: np.ndarray
    Explus: np.ndarray
    Eu: np.ndarray
    EPsi: np.ndarray

    @classmethod
    def assemble(cls, Ex, Explus, Eu):
        Ex, Explus, Eu = (np.ascontiguousarray(M) for M in (Ex, Explus, Eu))
        return cls(Ex=Ex, Explus=Explus, Eu=Eu, EPsi=np.vstack([Ex, Eu]))


def _box_arrays(box):
    lo = np.array([b[0] for b in box], dtype=float)
    hi = np.array([b[1] for b in box], dtype=float)
    return lo, hi


def generate_raw(sys, cfg):
    """Simulate cfg.n_traj independent trajectories of the plant.

    Trajectory k owns the counter block [k*L, (k+1)*L) with
    L = n + steps*m: first its initial state, then its inputs in time
    order. Columns never pair states across trajectory boundaries.
    """
    n, m = sys.n, sys.m
    if len(cfg.init_box) != n:
        raise ValueError(f"init_box has {len(cfg.init_box)} dims, state has {n}")
    if len(cfg.input_box) != m:
        raise ValueError(f"input_box has {len(cfg.input_box)} dims, input has {m}")
    K, steps = cfg.n_traj, cfg.steps_per_traj
    length = n + steps * m
    draws = counter_uniforms(cfg.seed, 0, K * length).reshape(K, length)
    ilo, ihi = _box_arrays(cfg.init_box)
    ulo, uhi = _box_arrays(cfg.input_box)
    x = ilo + (ihi - ilo) * draws[:, :n]
    u_all = ulo + (uhi - ulo) * draws[:, n:].reshape(K, steps, m)

    X = np.empty((K, steps, n))
    Xplus = np.empty((K, steps, n))
    for t in range(steps):
        X[:, t] = x
        x = x @ sys.A.T + u_all[:, t] @ sys.B.T
        Xplus[:, t] = x
    return SnapshotData.assemble(
        X.reshape(K * steps, n).T,
        Xplus.reshape(K * steps, n).T,
        u_all.reshape(K * steps, m).T,
        steps,
    )


def balanced_excitation(sys, n_traj, seed, input_floor=0.05, state_floor=0.02):
    """Single-step excitation whose successor spread matches the initial spread.

    With a unit box on every dimension, systems whose |A| rows have large
    entries produce successors that spread far beyond the regressor spread
    of the same coordinate. The pooled quantizer range is then set by the
    successor, and the effective resolution seen by the regressor collapses,
    which inflates the identification bias at coarse word lengths.

    This solves for per-dimension initial half-widths c minimizing the
    spread gain lam subject to |A| c + |B| beta <= lam * c, with the input
    half-widths fixed at input_floor (small, but enough excitation to keep
    the input columns identifiable), then rescales so max(c) = 1. The
    constraint is a worst-case L1 spread model, so the realized gain is
    conservative. Returns an ExcitationConfig with steps_per_traj = 1.
    """
    absA = np.abs(np.asarray(sys.A, dtype=float))
    absB = np.abs(np.asarray(sys.B, dtype=float))
    n, m = absA.shape[0], absB.shape[1]
    beta = np.full(m, float(input_floor))
    drive = absB @ beta

    def least_fixed_point(lam):
        # Monotone iteration from the floor converges to the least c with
        # c >= max(floor, (|A| c + drive)/lam), or escapes past 1 if none
        # exists below the unit box.
        c = np.full(n, state_floor)
        for _ in range(10000):
            cn = np.maximum(state_floor, (absA @ c + drive) / lam)
            if cn.max() > 1.0:
                return None
            if np.max(np.abs(cn - c)) <= 1e-14:
                return cn
            c = cn
        return c

    hi = float((absA @ np.ones(n) + drive).max()) + 1.0
    lo = 1e-3
    best = least_fixed_point(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        c = least_fixed_point(mid)
        if c is None:
            lo = mid
        else:
            hi, best = mid, c
    c = best / best.max()
    return ExcitationConfig(
        n_traj=n_traj,
        steps_per_traj=1,
        init_box=tuple((-ci, ci) for ci in c),
        input_box=tuple((-bi, bi) for bi in beta),
        seed=seed,
    )


def _per_dim_specs(spec, dims):
    if isinstance(spec, QuantizerSpec):
        return (spec,) * dims
    specs = tuple(spec)
    if len(specs) != dims:
        raise ValueError(f"{len(specs)} quantizer specs for {dims} dimensions")
    return specs


def specs_from_snapshots(raw, b, percentile=99.9, margin=1.1):
    """Freeze per-dimension quantizer specs from a dry (unquantized) pass.

    Returns (state_specs, input_specs). State ranges cover all physical
    samples of that dimension, X and Xplus together.
    """
    state_specs = tuple(
        spec_from_samples(np.concatenate([raw.X[d], raw.Xplus[d]]), b, percentile, margin)
        for d in range(raw.n)
    )
    input_specs = tuple(spec_from_samples(raw.U[d], b, percentile, margin) for d in range(raw.m))
    return state_specs, input_specs


def common_spec_from_snapshots(raw, b, percentile=99.9, margin=1.1):
    """One shared quantizer spec covering every signal dimension.

    Used when a single resolution must apply to states and inputs alike;
    the price is a coarser effective resolution on small-range signals.
    """
    pooled = np.concatenate([raw.X.ravel(), raw.Xplus.ravel(), raw.U.ravel()])
    return spec_from_samples(pooled, b, percentile, margin)


def _physical_states(raw):
    """All state samples, each exactly once: (K, steps+1, n)."""
    K, steps, n = raw.n_traj, raw.steps_per_traj, raw.n
    phys = np.empty((K, steps + 1, n))
    phys[:, :steps] = raw.X.T.reshape(K, steps, n)
    phys[:, steps] = raw.Xplus.T.reshape(K, steps, n)[:, steps - 1]
    return phys


def saturation_fraction(raw, state_spec, input_spec):
    """Fraction of raw samples outside their quantizer range."""
    state_specs = _per_dim_specs(state_spec, raw.n)
    input_specs = _per_dim_specs(input_spec, raw.m)
    phys = _physical_states(raw)
    out = 0
    total = 0
    for d, spec in enumerate(state_specs):
        col = phys[:, :, d]
        out += int(np.count_nonzero((col < spec.x_min) | (col > spec.x_max)))
        total += col.size
    for d, spec in enumerate(input_specs):
        row = raw.U[d]
        out += int(np.count_nonzero((row < spec.x_min) | (row > spec.x_max)))
        total += row.size
    return out / total


SATURATION_LIMIT = 1e-3


def quantize_snapshots(raw, state_spec, input_spec, seed):
    """Dither-quantize the snapshots; returns (quantized, errors).

    Each physical state sample is quantized exactly once, so within a
    trajectory column t of the quantized Xplus equals column t+1 of the
    quantized X: the stream x_1, x_2, ... is measured once and reused.
    Specs may be a single QuantizerSpec per signal or one per dimension.
    Dither streams are keyed by (seed, signal, dimension) and advance in
    column order, independent of batching.
    """
    state_specs = _per_dim_specs(state_spec, raw.n)
    input_specs = _per_dim_specs(input_spec, raw.m)
    frac = saturation_fraction(raw, state_specs, input_specs)
    if frac > SATURATION_LIMIT:
        raise SaturationExceeded(frac, SATURATION_LIMIT)

    K, steps, n, m = raw.n_traj, raw.steps_per_traj, raw.n, raw.m
    phys = _physical_states(raw)
    phys_q = np.empty_like(phys)
    phys_e = np.empty_like(phys)
    for d, spec in enumerate(state_specs):
        xq, e, _ = dither_quantize_array(spec, phys[:, :, d].ravel(), stable_seed(seed, 0, d), 0)
        phys_q[:, :, d] = xq.reshape(K, steps + 1)
        phys_e[:, :, d] = e.reshape(K, steps + 1)
    Uq = np.empty_like(raw.U)
    Eu = np.empty_like(raw.U)
    for d, spec in enumerate(input_specs):
        uq, e, _ = dither_quantize_array(spec, raw.U[d], stable_seed(seed, 1, d), 0)
        Uq[d] = uq
        Eu[d] = e

    Xq = phys_q[:, :steps].reshape(K * steps, n).T
    Xplusq = phys_q[:, 1:].reshape(K * steps, n).T
    quantized = SnapshotData.assemble(Xq, Xplusq, Uq, steps)
    errors = ErrorMatrices.assemble(
        phys_e[:, :steps].reshape(K * steps, n).T,
        phys_e[:, 1:].reshape(K * steps, n).T,
        Eu,
    )
    return quantized, errors


def save_snapshots(path, snap, meta=None):
    """Write snapshots as a one-line JSON header plus raw float64 bytes.

    The header records dims and any caller metadata (seed, quantizer
    specs); the payload is X, Xplus, U back to back in C order.
    """
    header = {
        "n": snap.n,
        "m": snap.m,
        "T": snap.T,
        "steps_per_traj": snap.steps_per_traj,
        "dtype": "float64",
        "layout": ["X", "Xplus", "U"],
    }
    if meta:
        header["meta"] = meta
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        fh.write(np.ascontiguousarray(snap.X).tobytes())
        fh.write(np.ascontiguousarray(snap.Xplus).tobytes())
        fh.write(np.ascontiguousarray(snap.U).tobytes())


def load_snapshots(path):
    """Inverse of save_snapshots; returns (SnapshotData, header dict)."""
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        payload = fh.read()
    n, m, T = header["n"], header["m"], header["T"]
    need = (2 * n + m) * T * 8
    if len(payload) != need:
        raise ValueError(f"payload is {len(payload)} bytes, header implies {need}")
    flat = np.frombuffer(payload, dtype=np.float64)
    X = flat[: n * T].reshape(n, T)
    Xplus = flat[n * T : 2 * n * T].reshape(n, T)
    U = flat[2 * n * T :].reshape(m, T)
    snap = SnapshotData.assemble(X, Xplus, U, header["steps_per_traj"])
    return snap, header
