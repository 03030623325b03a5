from __future__ import annotations

import numpy as np
import pytest

from nlsground.energy import EnergyParams, pohozaev_J
from nlsground.errors import BracketFailure, NonpositiveAmplitude
from nlsground.grid import Profile, RadialGrid, State, kinetic
from nlsground.nonlinearity import cubic, power_sum
from nlsground.scalar import (Outcome, ScalarGroundState, ShootingConfig,
                              shoot, solve_scalar)
from conftest import CUBIC_ACTION, CUBIC_CENTER


def test_shoot_classifies_amplitudes():
    nl = cubic()
    low = shoot(nl, 2.0)
    assert low.outcome is Outcome.TURNS_UP
    assert low.radius is not None and low.radius > 0.0
    high = shoot(nl, 10.0)
    assert high.outcome is Outcome.CROSSES
    assert high.radius is not None and high.radius > 0.0


def test_shoot_rejects_nonpositive_amplitude():
    with pytest.raises(NonpositiveAmplitude):
        shoot(cubic(), 0.0)
    with pytest.raises(NonpositiveAmplitude):
        shoot(cubic(), -3.0)


def test_shooting_config_validation():
    with pytest.raises(ValueError):
        ShootingConfig(a_min=2.0, a_max=1.0)
    with pytest.raises(ValueError):
        ShootingConfig(a_min=-1.0, a_max=1.0)
    with pytest.raises(ValueError):
        ShootingConfig(ode_step=0.0)


def test_solve_scalar_cubic_matches_oracles(cubic_scalar):
    assert cubic_scalar.center_value == pytest.approx(CUBIC_CENTER, rel=5e-4)
    assert cubic_scalar.action == pytest.approx(CUBIC_ACTION, rel=1e-5)
    assert cubic_scalar.residual < 1e-6
    vals = cubic_scalar.profile.values
    assert np.all(vals[:-1] > 0.0)
    assert np.all(np.diff(vals) <= 1e-12 * vals[0])


def test_solve_scalar_satisfies_pohozaev(grid, cubic_scalar):
    params = EnergyParams(cubic(), cubic(), 0.0)
    st = State(cubic_scalar.profile, Profile.zero(grid))
    K = kinetic(st.u)
    assert abs(pohozaev_J(st, params)) <= 1e-5 * (1.0 + K)


def test_solve_scalar_log_family(log_scalar):
    assert isinstance(log_scalar, ScalarGroundState)
    assert log_scalar.residual < 1e-6
    assert log_scalar.center_value > 0.0
    assert log_scalar.action > 0.0
    vals = log_scalar.profile.values
    assert np.all(np.diff(vals) <= 1e-12 * vals[0])


def test_solve_scalar_deterministic():
    g = RadialGrid(R=20.0, N=800)
    a = solve_scalar(cubic(), g)
    b = solve_scalar(cubic(), g)
    assert np.array_equal(a.profile.values, b.profile.values)
    assert a.center_value == b.center_value


def test_bracket_without_transition_fails():
    # every amplitude below the critical one turns up: no sign change to find
    with pytest.raises(BracketFailure):
        solve_scalar(cubic(), RadialGrid(R=20.0, N=500),
                     ShootingConfig(a_min=0.1, a_max=2.0))


def test_linear_equation_has_no_ground_state():
    # f == 0 leaves -Δw + w = 0, whose positive trajectories all turn up
    with pytest.raises(BracketFailure):
        solve_scalar(power_sum([]), RadialGrid(R=20.0, N=500))


def test_solve_scalar_small_grid_consistency():
    # the same state at N=800 should match the session solution loosely
    g = RadialGrid(R=20.0, N=800)
    gs = solve_scalar(cubic(), g)
    assert gs.center_value == pytest.approx(CUBIC_CENTER, rel=5e-3)
    assert gs.action == pytest.approx(CUBIC_ACTION, rel=1e-3)
