from __future__ import annotations

import numpy as np
import pytest

from nlsground import (EnergyParams, RadialGrid, cubic, log_enhanced,
                       solve_coupled, solve_scalar)

# Frozen reference values, computed with an independent adaptive-quadrature
# + stiff-ODE pipeline before this package was written.  See the test
# bodies for which checks anchor to which constant.
CUBIC_CENTER = 4.33738767997569          # center value of the cubic bound state
CUBIC_ACTION = 18.89725130251493         # its action
GAUSS_INT = 5.568327996831708            # ∫ exp(-|x|²) over ℝ³ = π^{3/2}
GAUSS_R2_INT = 8.352491995247561         # ∫ |x|² exp(-|x|²) = (3/2)π^{3/2}
GAUSS_NARROW_INT = 1.9687012432153024    # ∫ exp(-2|x|²) = (π/2)^{3/2}
AMP3_TBAR = 0.9198030415026162           # manifold dilation of 3·exp(-r²/2), cubic
AMP3_PROJECTED = 23.047942624064888      # its projected energy


@pytest.fixture(scope="session")
def grid():
    return RadialGrid(R=20.0, N=4000)


@pytest.fixture(scope="session")
def cubic_nl():
    return cubic()


@pytest.fixture(scope="session")
def log_nl():
    return log_enhanced()


@pytest.fixture(scope="session")
def cubic_scalar(grid, cubic_nl):
    return solve_scalar(cubic_nl, grid)


@pytest.fixture(scope="session")
def log_scalar(grid, log_nl):
    return solve_scalar(log_nl, grid)


@pytest.fixture(scope="session")
def coupled_beta2(grid, cubic_nl, cubic_scalar):
    params = EnergyParams(cubic_nl, cubic_nl, 2.0)
    gs = solve_coupled(params, grid, baselines=(cubic_scalar, cubic_scalar))
    return params, gs


@pytest.fixture(scope="session")
def coupled_beta01(grid, cubic_nl, cubic_scalar):
    params = EnergyParams(cubic_nl, cubic_nl, 0.1)
    gs = solve_coupled(params, grid, baselines=(cubic_scalar, cubic_scalar))
    return params, gs


def gaussian_bumps(grid, rng, n, amp=(0.3, 3.0), width=(0.5, 3.0),
                   center=(0.0, 8.0)):
    """Random smooth nonnegative profile: a sum of radial Gaussian bumps."""
    vals = np.zeros(grid.N + 1)
    for _ in range(n):
        a = rng.uniform(*amp)
        s = rng.uniform(*width)
        c = rng.uniform(*center)
        vals += a * np.exp(-((grid.r - c) ** 2) / (2 * s * s))
    vals[-1] = 0.0
    return vals
