"""Action functional, Pohozaev functional, and the dilation projection.

For a state (u, v) with coupling strength beta the action is

    I = 1/2 ||u||^2 - int F(u) + 1/2 ||v||^2 - int G(v) - (beta/2) int u^2 v^2

with ||.|| the H^1 norm.  Writing K for the total Dirichlet energy, M for
the total mass int (u^2 + v^2) and P for the potential term
int [F(u) + G(v) + (beta/2) u^2 v^2], the action is I = K/2 + M/2 - P and
the Pohozaev functional is J = K/2 - 3W with the well depth W = P - M/2.
States with J = 0 form the constraint manifold; on it I = K/3.  The ray
t -> (u(./t), v(./t)) has action (t/2)K - t^3 W, so whenever W > 0 it
crosses the manifold exactly once, at t = sqrt(K/(6W)); projecting along
dilations is therefore closed-form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoProjection, ZeroState
from .grid import (Profile, State, dilate, flux_laplacian_interior, integrate,
                   kinetic)
from .nonlinearity import Nonlinearity, eval_F, eval_f

__all__ = [
    "EnergyParams", "EnergyReport", "energy_I", "pohozaev_J",
    "first_variation", "residuals", "project_pohozaev", "projected_energy",
    "energy_report",
]


@dataclass(frozen=True)
class EnergyParams:
    """Problem data: the two nonlinearities and the coupling strength."""

    f: Nonlinearity
    g: Nonlinearity
    beta: float


@dataclass(frozen=True)
class EnergyReport:
    I: float
    J: float
    K: float
    W: float
    normH1_sq: float
    residual_u: float
    residual_v: float

    def lines(self) -> str:
        keys = ("I", "J", "K", "W", "normH1_sq", "residual_u", "residual_v")
        return "\n".join(f"{k}={format(getattr(self, k), '.17g')}" for k in keys)


def _terms(state: State, params: EnergyParams) -> tuple[float, float, float]:
    """Raw integrals (K, M, P): Dirichlet energy, mass, potential."""
    gr = state.grid
    u = state.u.values
    v = state.v.values
    K = kinetic(state.u) + kinetic(state.v)
    M = integrate(gr, u * u + v * v)
    P = integrate(gr, eval_F(params.f, u) + eval_F(params.g, v)
                  + 0.5 * params.beta * (u * u) * (v * v))
    return K, M, P


def energy_I(state: State, params: EnergyParams) -> float:
    K, M, P = _terms(state, params)
    return 0.5 * K + 0.5 * M - P


def pohozaev_J(state: State, params: EnergyParams) -> float:
    K, M, P = _terms(state, params)
    return 0.5 * K - 3.0 * (P - 0.5 * M)


def _variation_one(grid, y, coupling_sq, nl: Nonlinearity, beta: float):
    source = y - eval_f(nl, y) - beta * y * coupling_sq
    out = np.empty(grid.N + 1)
    out[1:-1] = -flux_laplacian_interior(grid, y) + source[1:-1]
    out[0] = -6.0 * (y[1] - y[0]) / grid.h ** 2 + source[0]
    out[-1] = 0.0  # Dirichlet node carries no variation
    return out


def first_variation(state: State, params: EnergyParams):
    """Pointwise L^2-gradient pair (-Δu + u - f(u) - βuv², same with u↔v, f→g).

    Interior nodes use the flux-form Laplacian (the exact adjoint of the
    discrete kinetic energy); the origin uses the symmetry-limit stencil.
    """
    gr = state.grid
    u = state.u.values
    v = state.v.values
    ru = _variation_one(gr, u, v * v, params.f, params.beta)
    rv = _variation_one(gr, v, u * u, params.g, params.beta)
    return ru, rv


def _h1_norm(p: Profile) -> float:
    return math.sqrt(kinetic(p) + integrate(p.grid, p.values ** 2))


def residuals(state: State, params: EnergyParams) -> tuple[float, float]:
    """Relative weighted-L² norms of the two first-variation components."""
    gr = state.grid
    ru, rv = first_variation(state, params)
    nu = math.sqrt(integrate(gr, ru * ru)) / (1.0 + _h1_norm(state.u))
    nv = math.sqrt(integrate(gr, rv * rv)) / (1.0 + _h1_norm(state.v))
    return nu, nv


def project_pohozaev(state: State, params: EnergyParams) -> tuple[State, float]:
    """Dilate the state onto the constraint manifold; returns (state, t̄).

    t̄ = sqrt(K/(6W)) is the unique positive critical point of
    t ↦ (t/2)K − t³W.  Interpolation makes a single dilation miss J = 0 by
    O(h²), so the closed-form step is iterated; because dilating by 1 is
    the exact identity, the residual contracts by O(h²) per pass and two
    or three passes reach roundoff.  A state already on the manifold is
    returned unchanged with t̄ = 1.  Raises ZeroState for the origin and
    NoProjection when W ≤ 0 (the dilation ray never meets the manifold).
    """
    K, M, P = _terms(state, params)
    if K == 0.0 and M == 0.0:
        raise ZeroState("cannot project the zero state")
    W = P - 0.5 * M
    if W <= 0.0:
        raise NoProjection(f"W={W:.6g} <= 0: dilation ray misses the manifold")
    tbar = 1.0
    for _ in range(12):
        t = math.sqrt(K / (6.0 * W))
        if t != 1.0:
            state = State(dilate(state.u, t), dilate(state.v, t))
            tbar *= t
        K, M, P = _terms(state, params)
        W = P - 0.5 * M
        J = 0.5 * K - 3.0 * W
        if abs(J) <= 1e-12 * (1.0 + K):
            break
    return state, tbar


def projected_energy(state: State, params: EnergyParams) -> float:
    """Closed-form action after projection: (K/3)^{3/2} (2W)^{-1/2}.

    Dilation-invariant in exact arithmetic, since K scales like t and W
    like t³ along the ray.
    """
    K, M, P = _terms(state, params)
    W = P - 0.5 * M
    if W <= 0.0:
        raise NoProjection(f"W={W:.6g} <= 0: dilation ray misses the manifold")
    return (K / 3.0) ** 1.5 / math.sqrt(2.0 * W)


def energy_report(state: State, params: EnergyParams) -> EnergyReport:
    K, M, P = _terms(state, params)
    ru, rv = residuals(state, params)
    return EnergyReport(I=0.5 * K + 0.5 * M - P,
                        J=0.5 * K - 3.0 * (P - 0.5 * M),
                        K=K, W=P - 0.5 * M, normH1_sq=K + M,
                        residual_u=ru, residual_v=rv)
