"""Exception hierarchy for the ground-state solver.

Validation errors (bad arguments, malformed configs) derive from
``ValueError``; failures of the numerical pipeline derive from
``NumericalError``.  The CLI maps these onto its exit-code contract.
"""
from __future__ import annotations


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


class InvalidExponent(ValueError):
    """Growth exponent outside the admissible open interval (1, 5)."""


class LengthMismatch(ValueError):
    """Sample array length does not match the grid node count."""


class GridMismatch(ValueError):
    """Profiles defined on different grids were combined."""


class NonpositiveDilation(ValueError):
    """Dilation parameter t must be positive."""


class ZeroState(ValueError):
    """Operation requires a state with at least one nonzero component."""


class NonpositiveAmplitude(ValueError):
    """Shooting amplitude must be positive."""


class NegativeBeta(ValueError):
    """Coupled radial pipeline requires a positive coupling beta."""


class InvalidBracket(ValueError):
    """Bisection bracket endpoints do not straddle a transition."""


class NumericalError(RuntimeError):
    """Base class for failures of the numerical pipeline."""


class Blowup(NumericalError):
    """ODE trajectory left the trust region (|w| > 1e6)."""


class BracketFailure(NumericalError):
    """No sign change of the shooting outcome inside [a_min, a_max]."""


class NoConvergence(NumericalError):
    """Iteration stagnated above tolerance."""


class NoProjection(NumericalError):
    """The dilation ray never meets the constraint set (W <= 0)."""


class InfeasibleStart(NumericalError):
    """Every initialization lies outside the feasible cone W > 0."""


class CertificationFailure(NumericalError):
    """A-posteriori certificate violated; carries the failed clause."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        msg = f"certificate clause violated: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
