"""Benchmark systems, stepping, ZOH discretization, and system loading."""

import json
import math

import numpy as np
import pytest

from quantmpc.systems import (
    ContinuousLti,
    DimensionMismatch,
    LtiSystem,
    boeing_discrete,
    controllability_rank,
    discretize_zoh,
    get_system,
    load_system,
    motor_continuous,
    motor_discrete,
    step,
)

MOTOR_A = [[1.000, 0.099, 0.041], [0.0, 0.0, 0.016], [0.0, 0.0, 0.135]]
MOTOR_B = [[0.048, 8.996], [0.083, 9.991], [0.864, -0.083]]
BOEING_A = [
    [0.99, 0.03, -0.02, -0.32],
    [0.01, 0.47, 4.70, 0.0],
    [0.02, -0.06, 0.40, 0.0],
    [0.01, -0.04, 0.72, 0.99],
]
BOEING_B = [[0.01, 0.99], [-3.44, 1.66], [-0.83, 0.44], [-0.47, 0.25]]


def test_motor_matches_published_matrices():
    sys = motor_discrete()
    assert sys.name == "motor"
    assert np.array_equal(sys.A, np.array(MOTOR_A))
    assert np.array_equal(sys.B, np.array(MOTOR_B))
    assert (sys.n, sys.m) == (3, 2)


def test_boeing_matches_published_matrices():
    sys = boeing_discrete()
    assert sys.name == "boeing747"
    assert np.array_equal(sys.A, np.array(BOEING_A))
    assert np.array_equal(sys.B, np.array(BOEING_B))
    assert (sys.n, sys.m) == (4, 2)


def test_zoh_scalar_closed_form():
    a, b, dt = -0.7, 2.0, 0.5
    disc = discretize_zoh(ContinuousLti(np.array([[a]]), np.array([[b]])), dt)
    assert disc.A[0, 0] == pytest.approx(math.exp(a * dt), abs=1e-12)
    assert disc.B[0, 0] == pytest.approx((math.exp(a * dt) - 1.0) / a * b, abs=1e-12)


def test_zoh_integrator_limit():
    disc = discretize_zoh(ContinuousLti(np.zeros((1, 1)), np.array([[3.0]])), 0.25)
    assert disc.A[0, 0] == pytest.approx(1.0, abs=1e-13)
    assert disc.B[0, 0] == pytest.approx(0.75, abs=1e-13)


def test_zoh_motor_reproduces_published_to_print_precision():
    disc = discretize_zoh(motor_continuous(), 1.0)
    assert np.max(np.abs(disc.A - np.array(MOTOR_A))) < 5e-3
    assert np.max(np.abs(disc.B - np.array(MOTOR_B))) < 5e-3


def test_step_applies_dynamics():
    sys = LtiSystem(np.array([[0.5, 0.1], [0.0, 0.9]]), np.array([[1.0], [2.0]]))
    x1 = step(sys, np.array([1.0, -1.0]), np.array([0.5]))
    assert np.allclose(x1, sys.A @ [1.0, -1.0] + sys.B @ [0.5])


def test_step_rejects_wrong_shapes():
    sys = motor_discrete()
    with pytest.raises(DimensionMismatch):
        step(sys, np.zeros(2), np.zeros(2))
    with pytest.raises(DimensionMismatch):
        step(sys, np.zeros(3), np.zeros(3))


def test_lti_system_rejects_mismatched_blocks():
    with pytest.raises(DimensionMismatch):
        LtiSystem(np.eye(2), np.ones((3, 1)))


def test_controllability_ranks():
    assert controllability_rank(motor_discrete()) == 3
    assert controllability_rank(boeing_discrete()) == 4
    dead = LtiSystem(np.eye(2), np.zeros((2, 1)))
    assert controllability_rank(dead) == 0


def test_load_system_roundtrip(tmp_path):
    path = tmp_path / "plant.json"
    path.write_text(json.dumps({"A": [[0.5, 0.0], [0.1, 0.3]], "B": [[1.0], [0.0]], "name": "demo"}))
    sys = load_system(path)
    assert sys.name == "demo"
    assert sys.A[1, 0] == 0.1
    assert get_system(str(path)).name == "demo"


def test_get_system_resolves_benchmarks():
    assert get_system("motor").name == "motor"
    assert get_system("boeing747").name == "boeing747"
    with pytest.raises(Exception):
        get_system("no-such-system")
