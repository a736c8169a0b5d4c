"""Model fitting: quadratic growth laws, Gumbel and lognormal distribution
fits, the skewness power law, and the record-rate model tau(q, x)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .arith import EULER_GAMMA
from .errors import (
    DegenerateInputError,
    InsufficientPointsError,
    NonPositiveValueError,
    SingularSystemError,
)

TWO_TERM = "two-term"
THREE_TERM = "three-term"
MOMENTS = "moments"
MLE = "mle"


@dataclass(frozen=True)
class QuadFit:
    a: float  # n^2 coefficient
    b: float  # n coefficient
    c: float  # constant, fixed 0 for the two-term form
    rms_residual: float
    form: str

    def value(self, n: float) -> float:
        return self.a * n * n + self.b * n + self.c


@dataclass(frozen=True)
class GumbelParams:
    mu: float
    beta: float
    method: str


@dataclass(frozen=True)
class LognormalParams:
    log_mu: float
    log_sigma: float

    def model_skewness(self) -> float:
        """Skewness implied by the fitted lognormal: (w+2)*sqrt(w-1), w = e^(sigma^2)."""
        w = math.exp(self.log_sigma**2)
        return (w + 2.0) * math.sqrt(w - 1.0)


@dataclass(frozen=True)
class PowerLawFit:
    c: float
    alpha: float  # decay exponent: s ~ c * n^(-alpha)
    rms_log_residual: float

    def value(self, n: float) -> float:
        return self.c * n ** (-self.alpha)


@dataclass(frozen=True)
class TauModelFit:
    kappa: float
    delta: float
    points_used: int

    def value(self, x: float) -> float:
        return 2.0 - self.kappa / (math.log(x) - self.delta)


def _lstsq(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    coeffs, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise SingularSystemError("design matrix is rank-deficient")
    return coeffs


def fit_quadratic(
    points: Sequence[tuple[int, float]], form: str = TWO_TERM
) -> QuadFit:
    """Least-squares fit of y ~ a*n^2 + b*n (+ c for the three-term form)."""
    if form not in (TWO_TERM, THREE_TERM):
        raise ValueError(f"unknown form {form!r}")
    needed = 2 if form == TWO_TERM else 3
    if len(points) < needed:
        raise InsufficientPointsError(
            f"{form} fit needs >= {needed} points, got {len(points)}"
        )
    ns = np.array([float(n) for n, _ in points])
    if len(set(n for n, _ in points)) != len(points):
        raise SingularSystemError("duplicate abscissae")
    y = np.array([float(v) for _, v in points])
    cols = [ns**2, ns]
    if form == THREE_TERM:
        cols.append(np.ones_like(ns))
    design = np.column_stack(cols)
    coeffs = _lstsq(design, y)
    residuals = design @ coeffs - y
    rms = float(np.sqrt(np.mean(residuals**2)))
    a, b = float(coeffs[0]), float(coeffs[1])
    c = float(coeffs[2]) if form == THREE_TERM else 0.0
    return QuadFit(a=a, b=b, c=c, rms_residual=rms, form=form)


def fit_gumbel(values: Sequence[float], method: str = MOMENTS) -> GumbelParams:
    """Fit a Gumbel distribution.

    MOMENTS inverts the closed-form moments: beta = stddev*sqrt(6)/pi and
    mu = mean - euler_gamma*beta.  MLE solves the profile likelihood for beta
    with a safeguarded bracketing solve (the score is increasing in beta),
    then recovers mu in closed form.
    """
    if method not in (MOMENTS, MLE):
        raise ValueError(f"unknown method {method!r}")
    if len(values) < 2:
        raise DegenerateInputError(
            f"gumbel fit needs at least 2 values, got {len(values)}"
        )
    v = np.asarray(values, dtype=np.float64)
    mean = float(v.mean())
    sd = float(v.std(ddof=1))
    if sd == 0.0:
        raise DegenerateInputError("gumbel fit undefined for constant data")
    beta0 = sd * math.sqrt(6.0) / math.pi
    if method == MOMENTS:
        return GumbelParams(mu=mean - EULER_GAMMA * beta0, beta=beta0, method=MOMENTS)

    shift = float(v.min())  # stabilizes the exponentials; the score is shift-invariant

    def score(beta: float) -> float:
        w = np.exp(-(v - shift) / beta)
        return beta - mean + float(np.sum(v * w) / np.sum(w))

    lo = hi = beta0
    while score(lo) > 0.0:
        lo /= 2.0
        if lo < 1e-12 * beta0:
            raise DegenerateInputError("gumbel MLE bracket collapsed")
    while score(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12 * beta0:
            raise DegenerateInputError("gumbel MLE bracket diverged")
    beta = float(brentq(score, lo, hi, xtol=1e-12 * beta0, rtol=8.9e-16))
    mu = shift - beta * math.log(float(np.mean(np.exp(-(v - shift) / beta))))
    return GumbelParams(mu=mu, beta=beta, method=MLE)


def fit_lognormal(values: Sequence[float]) -> LognormalParams:
    """Fit a two-parameter lognormal: mean and sample stddev of ln(values)."""
    if len(values) < 2:
        raise DegenerateInputError(
            f"lognormal fit needs at least 2 values, got {len(values)}"
        )
    v = np.asarray(values, dtype=np.float64)
    if np.any(v <= 0.0):
        raise NonPositiveValueError("lognormal fit requires positive values")
    logs = np.log(v)
    sigma = float(logs.std(ddof=1))
    if sigma == 0.0:
        raise DegenerateInputError("lognormal fit undefined for constant data")
    return LognormalParams(log_mu=float(logs.mean()), log_sigma=sigma)


def fit_power_law(points: Sequence[tuple[int, float]]) -> PowerLawFit:
    """Fit s ~ c * n^(-alpha) by least squares on (ln n, ln s)."""
    if len(points) < 2:
        raise InsufficientPointsError(
            f"power-law fit needs >= 2 points, got {len(points)}"
        )
    if any(s <= 0.0 for _, s in points):
        raise NonPositiveValueError("power-law fit requires positive values")
    if len(set(n for n, _ in points)) != len(points):
        raise SingularSystemError("duplicate abscissae")
    ln_n = np.array([math.log(n) for n, _ in points])
    ln_s = np.array([math.log(s) for _, s in points])
    design = np.column_stack([np.ones_like(ln_n), -ln_n])
    coeffs = _lstsq(design, ln_s)
    residuals = design @ coeffs - ln_s
    return PowerLawFit(
        c=float(math.exp(coeffs[0])),
        alpha=float(coeffs[1]),
        rms_log_residual=float(np.sqrt(np.mean(residuals**2))),
    )


def fit_tau_model(points: Sequence[tuple[float, float]]) -> TauModelFit:
    """Fit tau(x) ~ 2 - kappa/(ln x - delta).

    Linearization: 1/(2 - tau) = (1/kappa)*ln x - delta/kappa.  Points with
    tau >= 2 sit past the pole of the linearization and are excluded; the
    count of surviving points is reported.
    """
    usable = [(float(x), float(t)) for x, t in points if t < 2.0]
    if len(usable) < 2:
        raise InsufficientPointsError(
            f"tau fit needs >= 2 points with tau < 2, got {len(usable)}"
        )
    ln_x = np.array([math.log(x) for x, _ in usable])
    y = np.array([1.0 / (2.0 - t) for _, t in usable])
    design = np.column_stack([ln_x, np.ones_like(ln_x)])
    slope, intercept = _lstsq(design, y)
    if slope == 0.0:
        raise SingularSystemError("zero slope; kappa is unbounded")
    kappa = 1.0 / float(slope)
    delta = -float(intercept) * kappa
    return TauModelFit(kappa=kappa, delta=delta, points_used=len(usable))


def gumbel_pdf(x: np.ndarray | float, params: GumbelParams) -> np.ndarray | float:
    z = (np.asarray(x, dtype=np.float64) - params.mu) / params.beta
    return np.exp(-z - np.exp(-z)) / params.beta


def lognormal_pdf(x: np.ndarray | float, params: LognormalParams) -> np.ndarray | float:
    v = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(v, dtype=np.float64)
    pos = v > 0.0
    z = (np.log(v[pos]) - params.log_mu) / params.log_sigma
    out[pos] = np.exp(-0.5 * z * z) / (
        v[pos] * params.log_sigma * math.sqrt(2.0 * math.pi)
    )
    return out
