"""Nonlinearity catalog and numerical certification of the standing assumptions.

Two closed-form families are shipped:

``power_sum``
    f(t) = sum_k a_k |t|^(p_k - 1) t with a_k > 0 and p_k in (1, 5),
    F(t) = sum_k a_k |t|^(p_k + 1) / (p_k + 1).

``log_enhanced``
    F(t) = a t^2 ln(1 + t^2) / 2,
    f(t) = a [t ln(1 + t^2) + t^3 / (1 + t^2)].

Both are odd in f / even in F by construction.  The log-enhanced family is
superquadratic but f(t)t / F(t) decreases to 2 as t grows, so it violates the
classical superquadraticity (Ambrosetti-Rabinowitz) condition while still
admitting a ground state; ``check_assumptions`` is built to detect exactly
this distinction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidExponent

POWER_SUM = "power_sum"
LOG_ENHANCED = "log_enhanced"

# Margin for the superquadraticity certificate: ar_ok requires
# inf_t f(t)t/F(t) >= 2 + AR_MARGIN over the sampled range.
AR_MARGIN = 0.05
# The AR infimum is an asymptotic quantity; the scan always extends
# logarithmically out to this horizon regardless of the user's t_max.
AR_HORIZON = 1.0e9

_EPS_GRID = (0.1, 0.01, 0.001)


@dataclass(frozen=True)
class Nonlinearity:
    """A member of the catalog, closed under odd reflection.

    Parameters
    ----------
    family : str
        ``"power_sum"`` or ``"log_enhanced"``.
    terms : tuple of (float, float)
        For power_sum: (coefficient, exponent) pairs, coefficients > 0 and
        exponents in the open subcritical window (1, 5).
    amplitude : float
        For log_enhanced: overall factor a > 0.
    """

    family: str
    terms: tuple[tuple[float, float], ...] = ()
    amplitude: float = 1.0

    def __post_init__(self):
        if self.family not in (POWER_SUM, LOG_ENHANCED):
            raise ValueError(f"unknown nonlinearity family: {self.family!r}")
        if self.family == POWER_SUM:
            terms = tuple((float(a), float(p)) for a, p in self.terms)
            object.__setattr__(self, "terms", terms)
            for a, p in terms:
                if not (1.0 < p < 5.0):
                    raise InvalidExponent(
                        f"exponent {p} outside the admissible range (1, 5)")
                if not a > 0.0:
                    raise ValueError(f"coefficient {a} must be positive")
        else:
            if not self.amplitude > 0.0:
                raise ValueError("log_enhanced amplitude must be positive")


def power_sum(terms) -> Nonlinearity:
    """Build a power-sum nonlinearity from (coefficient, exponent) pairs."""
    return Nonlinearity(POWER_SUM, terms=tuple((a, p) for a, p in terms))


def log_enhanced(amplitude: float = 1.0) -> Nonlinearity:
    """Build the log-enhanced nonlinearity F(t) = a t^2 ln(1+t^2)/2."""
    return Nonlinearity(LOG_ENHANCED, amplitude=float(amplitude))


def cubic() -> Nonlinearity:
    """The classical cubic f(t) = t^3."""
    return power_sum([(1.0, 3.0)])


def eval_f(nl: Nonlinearity, t):
    """Evaluate f(t); odd in t, vectorized over numpy arrays."""
    t = np.asarray(t, dtype=float)
    if nl.family == POWER_SUM:
        at = np.abs(t)
        out = np.zeros_like(t)
        for a, p in nl.terms:
            out += a * at ** (p - 1.0)
        out = out * t
    else:
        t2 = t * t
        out = nl.amplitude * (t * np.log1p(t2) + t * t2 / (1.0 + t2))
    return float(out) if out.ndim == 0 else out


def eval_F(nl: Nonlinearity, t):
    """Evaluate the exact primitive F(t) = int_0^t f; even in t, F(0) = 0."""
    t = np.asarray(t, dtype=float)
    if nl.family == POWER_SUM:
        at = np.abs(t)
        out = np.zeros_like(t)
        for a, p in nl.terms:
            out += a / (p + 1.0) * at ** (p + 1.0)
    else:
        t2 = t * t
        out = 0.5 * nl.amplitude * t2 * np.log1p(t2)
    return float(out) if out.ndim == 0 else out


def eval_df(nl: Nonlinearity, t):
    """Evaluate f'(t) (even in t); used by Newton polishing."""
    t = np.asarray(t, dtype=float)
    if nl.family == POWER_SUM:
        at = np.abs(t)
        out = np.zeros_like(t)
        for a, p in nl.terms:
            out += a * p * at ** (p - 1.0)
    else:
        t2 = t * t
        opt2 = 1.0 + t2
        out = nl.amplitude * (np.log1p(t2) + 2.0 * t2 / opt2
                              + (3.0 * t2 + t2 * t2) / (opt2 * opt2))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the sampled assumption checks, with reproducible witnesses.

    ``growth_constants`` rows are (eps, C_f, C_F, C_Fstar): the clamped
    suprema certifying |f| <= eps|t| + C_f |t|^p, |F| <= eps t^2 + C_F
    |t|^(p+1), and the critical-power variant |F| <= eps t^2 + C_Fstar |t|^6.
    """

    f1_ok: bool
    f2_ok: bool
    p_test: float
    f3_ok: bool
    T1: float | None
    ar_ok: bool
    mu: float            # certified inf of f(t)t/F(t) over the scan
    ar_witness: tuple[float, float] | None   # (mu_required, t) when ar fails
    growth_constants: tuple[tuple[float, float, float, float], ...] = field(
        default=())


def _loglog_slope(t, ratio):
    """Least-squares slope of log(ratio) against log(t), ignoring zeros."""
    mask = ratio > 0.0
    if mask.sum() < 2:
        return 0.0
    x = np.log(t[mask])
    y = np.log(ratio[mask])
    x = x - x.mean()
    return float((x * y).sum() / (x * x).sum())


def check_assumptions(nl: Nonlinearity, p_test: float,
                      sample_spec: tuple[float, int] = (10.0, 400),
                      ) -> AssumptionReport:
    """Certify (f1)-(f3) and the superquadraticity condition on samples.

    Parameters
    ----------
    nl : Nonlinearity
    p_test : float
        Growth exponent to test against, in (1, 5).
    sample_spec : (t_max, n_samples)
        Range and resolution of the linear sampling used for the T1 scan
        and the near-origin / large-argument ramps.

    Returns
    -------
    AssumptionReport

    Notes
    -----
    The limit conditions are decided from log-log trends on sample ramps,
    not symbolically: (f1) requires f(t)/t -> 0 at 0 (positive slope of the
    ratio), (f2) requires f(t)/t^p_test non-growing at infinity.  The
    superquadraticity infimum inf f(t)t/F(t) is scanned out to t = 1e9
    because it is an asymptotic quantity; ar_ok demands the infimum clear
    2 by the margin 0.05.
    """
    t_max, n_samples = float(sample_spec[0]), int(sample_spec[1])
    if not (1.0 < p_test < 5.0):
        raise InvalidExponent(f"p_test={p_test} outside (1, 5)")
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")

    # (f1): f(t)/t -> 0 as t -> 0+.
    t_small = np.logspace(-8.0, 0.0, 65)
    r_small = np.abs(eval_f(nl, t_small)) / t_small
    if np.all(r_small < 1e-300):
        f1_ok = True       # identically zero near the origin
    else:
        slope = _loglog_slope(t_small, r_small)
        f1_ok = slope >= 0.02 and r_small[0] <= r_small[-1] * (1.0 + 1e-9)

    # (f2): f(t)/t^p_test stays bounded (non-growing trend) at large t.
    t_big = np.logspace(np.log10(t_max), np.log10(t_max) + 4.0, 65)
    r_big = np.abs(eval_f(nl, t_big)) / t_big ** p_test
    if np.all(r_big < 1e-300):
        f2_ok = True
    else:
        f2_ok = _loglog_slope(t_big, r_big) <= 0.02

    # (f3): scan for a witness T1 with F(T1) > T1^2 / 2.
    t_lin = np.linspace(t_max / n_samples, t_max, n_samples)
    gap = eval_F(nl, t_lin) - 0.5 * t_lin * t_lin
    hits = np.nonzero(gap > 0.0)[0]
    f3_ok = hits.size > 0
    T1 = float(t_lin[hits[0]]) if f3_ok else None

    # Superquadraticity: infimum of f(t)t/F(t) over linear samples plus a
    # logarithmic tail out to the asymptotic horizon.
    t_ar = np.concatenate([t_lin, np.logspace(-4.0, np.log10(AR_HORIZON), 257)])
    Fv = eval_F(nl, t_ar)
    good = Fv > 0.0
    if good.any():
        ratio = eval_f(nl, t_ar[good]) * t_ar[good] / Fv[good]
        k = int(np.argmin(ratio))
        mu = float(ratio[k])
        t_at_min = float(t_ar[good][k])
    else:
        mu = 0.0
        t_at_min = 0.0
    ar_ok = mu >= 2.0 + AR_MARGIN
    ar_witness = None if ar_ok else (2.0 + AR_MARGIN, t_at_min)

    # Growth constants for the subcritical and critical-power bounds.
    t_pos = np.concatenate([t_lin, np.logspace(-6.0, np.log10(t_max), 129)])
    fa = np.abs(eval_f(nl, t_pos))
    Fa = np.abs(eval_F(nl, t_pos))
    rows = []
    for eps in _EPS_GRID:
        c_f = np.max(np.maximum(fa - eps * t_pos, 0.0) / t_pos ** p_test)
        c_F = np.max(np.maximum(Fa - eps * t_pos ** 2, 0.0)
                     / t_pos ** (p_test + 1.0))
        c_Fs = np.max(np.maximum(Fa - eps * t_pos ** 2, 0.0) / t_pos ** 6)
        rows.append((eps, float(c_f), float(c_F), float(c_Fs)))

    return AssumptionReport(
        f1_ok=bool(f1_ok), f2_ok=bool(f2_ok), p_test=p_test,
        f3_ok=bool(f3_ok), T1=T1, ar_ok=bool(ar_ok), mu=mu,
        ar_witness=ar_witness, growth_constants=tuple(rows))
