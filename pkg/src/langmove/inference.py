"""Closed-form pseudo-likelihood estimation from observed tracks.

Under the Euler transition approximation, the normalized increments
``Y_i = (x_{i+1} - x_i) / sqrt(dt_i)`` follow a standard linear model

    Y = (T D) nu + E,    E ~ N(0, gamma2 * I),    nu = gamma2 * beta,

where ``D`` stacks the halved covariate partial derivatives at the first
``n`` locations (x-block then y-block) and ``T`` is the diagonal matrix of
``sqrt(dt_i)``.  Ordinary least squares then gives ``nu`` and the residual
variance gives ``gamma2``; the habitat coefficients follow from an
inverse-chi-square moment correction that makes them exactly unbiased,
with a closed-form covariance.  No numerical optimization is involved;
:func:`pseudo_log_likelihood` exists for cross-checks and diagnostics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular
from scipy.stats import chi2, norm

from .covariates import Covariate
from .errors import (
    DegenerateFitError,
    InsufficientDataError,
    OutOfDomainError,
    SingularDesignError,
)
from .langevin import Track
from .rsf import RsfModel

__all__ = [
    "DesignMatrices",
    "FitResult",
    "build_design",
    "pooled_design",
    "fit",
    "pooled_fit",
    "pseudo_log_likelihood",
]


@dataclass(frozen=True, eq=False)
class DesignMatrices:
    """Regression blocks for one or more tracks.

    ``y`` is the ``2n``-vector of normalized increments (all x components,
    then all y components), ``d`` the ``(2n, J)`` matrix of halved covariate
    partials at the increment start points, and ``t_delta`` the ``2n``
    diagonal of the sqrt-interval weighting, repeated over both blocks.
    """

    y: np.ndarray
    d: np.ndarray
    t_delta: np.ndarray
    n: int
    J: int


def build_design(track: Track, covariates: Sequence[Covariate]) -> DesignMatrices:
    """Assemble the linear-model blocks for a single track.

    Covariate gradients are evaluated at ``x_0 .. x_{n-1}`` only, so the
    final location may lie outside gridded covariate domains.

    Raises
    ------
    OutOfDomainError
        If a non-final location falls outside a covariate domain (the
        message carries the location index).
    """
    covariates = list(covariates)
    if len(covariates) == 0:
        raise ValueError("need at least one covariate")
    if len(track) < 2:
        raise ValueError("track must contain at least two locations")
    n = len(track) - 1
    J = len(covariates)
    deltas = track.intervals
    sqrt_d = np.sqrt(deltas)

    incr = np.diff(track.xy, axis=0) / sqrt_d[:, None]
    y = np.concatenate([incr[:, 0], incr[:, 1]])

    d = np.empty((2 * n, J))
    for i in range(n):
        p = track.xy[i]
        for j, cov in enumerate(covariates):
            try:
                gx, gy = cov.gradient(p)
            except OutOfDomainError:
                raise OutOfDomainError(p[0], p[1], f"track location {i}") from None
            d[i, j] = 0.5 * gx
            d[n + i, j] = 0.5 * gy

    t_delta = np.concatenate([sqrt_d, sqrt_d])
    return DesignMatrices(y=y, d=d, t_delta=t_delta, n=n, J=J)


def pooled_design(tracks: Sequence[Track], covariates: Sequence[Covariate]) -> DesignMatrices:
    """Stack per-track designs into one regression.

    Increments never cross track boundaries; the likelihood factorizes over
    independent tracks with each first position taken as deterministic.
    Blocks are concatenated in track-list order.

    Raises
    ------
    InsufficientDataError
        If ``tracks`` is empty (e.g. domain splitting left no usable segment).
    """
    if len(tracks) == 0:
        raise InsufficientDataError("no tracks (or track segments) to fit")
    parts = []
    for k, track in enumerate(tracks):
        try:
            parts.append(build_design(track, covariates))
        except OutOfDomainError as err:
            raise OutOfDomainError(err.x, err.y, f"track {k}: {err.args[0]}") from None
    y = np.concatenate([p.y for p in parts])
    d = np.vstack([p.d for p in parts])
    t_delta = np.concatenate([p.t_delta for p in parts])
    n = sum(p.n for p in parts)
    return DesignMatrices(y=y, d=d, t_delta=t_delta, n=n, J=parts[0].J)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Point estimates, covariance, and confidence intervals of one fit.

    ``nu_hat`` is the raw linear-model coefficient vector (``gamma2 * beta``
    scale), ``beta_hat`` the bias-corrected habitat coefficients, and
    ``upsilon`` the inverse weighted Gram matrix the covariance formula is
    built from.  ``beta_cov``, ``ci_beta`` and ``ci_gamma2`` are None when
    the fit was computed without confidence intervals.
    """

    nu_hat: np.ndarray
    gamma2_hat: float
    beta_hat: np.ndarray
    upsilon: np.ndarray
    beta_cov: np.ndarray | None
    ci_beta: np.ndarray | None
    ci_gamma2: tuple[float, float] | None
    alpha: float
    n: int
    J: int
    condition_number: float
    residual_norm: float

    @property
    def se_beta(self) -> np.ndarray:
        """Standard errors of the habitat coefficients."""
        if self.beta_cov is None:
            raise InsufficientDataError("fit was computed without confidence intervals")
        return np.sqrt(np.diag(self.beta_cov))

    def to_dict(self) -> dict:
        """Machine-readable document with stable field names."""
        return {
            "nu_hat": self.nu_hat.tolist(),
            "gamma2_hat": self.gamma2_hat,
            "beta_hat": self.beta_hat.tolist(),
            "beta_cov": None if self.beta_cov is None else self.beta_cov.tolist(),
            "ci_beta": None if self.ci_beta is None else self.ci_beta.tolist(),
            "ci_gamma2": None if self.ci_gamma2 is None else list(self.ci_gamma2),
            "n": self.n,
            "J": self.J,
            "alpha": self.alpha,
            "condition_number": self.condition_number,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def format_table(self) -> str:
        """Flat key-value text table for human consumption."""
        lines = [
            f"n            {self.n}",
            f"J            {self.J}",
            f"alpha        {self.alpha:g}",
            f"gamma2_hat   {self.gamma2_hat:.6g}",
        ]
        if self.ci_gamma2 is not None:
            lines[-1] += f"   CI ({self.ci_gamma2[0]:.6g}, {self.ci_gamma2[1]:.6g})"
        for j in range(self.J):
            line = f"beta_{j + 1}       {self.beta_hat[j]:.6g}"
            if self.ci_beta is not None:
                line += f"   CI ({self.ci_beta[j, 0]:.6g}, {self.ci_beta[j, 1]:.6g})"
            lines.append(line)
        lines.append(f"cond(DtT2D)  {self.condition_number:.3e}")
        return "\n".join(lines)


def fit(design: DesignMatrices, alpha: float = 0.05, ci: bool = True) -> FitResult:
    """Closed-form estimates from assembled design matrices.

    Solves the weighted least-squares problem by QR factorization of
    ``T D`` (mathematically identical to the normal equations, better
    conditioned), then applies the unbiasedness correction

        beta_hat = (2n - J - 2) * nu_hat / ((2n - J) * gamma2_hat)

    and the plug-in covariance

        cov[j, k] = 2 b_j b_k / (2n-J-4) + (U_jk / g2) * (1 + 2 / (2n-J-4))

    evaluated at the estimates.  The gamma2 interval uses chi-square
    quantiles with ``2n - J`` degrees of freedom.

    Parameters
    ----------
    design : DesignMatrices
    alpha : float
        Confidence level in (0, 0.5); intervals have coverage ``1 - alpha``.
    ci : bool
        Compute covariance and intervals.  Requires ``2n - J - 4 > 0``.

    Raises
    ------
    SingularDesignError
        If ``T D`` is numerically rank deficient.
    InsufficientDataError
        If there are too few increments for the requested outputs.
    DegenerateFitError
        If the residual variance is (numerically) zero; carries ``nu_hat``.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must be in (0, 0.5), got {alpha}")
    n, J = design.n, design.J
    m = 2 * n - J
    if m <= 0:
        raise InsufficientDataError(f"2n - J = {m} <= 0: too few increments")

    x = design.d * design.t_delta[:, None]
    svals = np.linalg.svd(x, compute_uv=False)
    if svals[-1] <= svals[0] * 1e-12:
        cond2 = math.inf if svals[-1] == 0 else float((svals[0] / svals[-1]) ** 2)
        raise SingularDesignError(cond2)
    cond2 = float((svals[0] / svals[-1]) ** 2)

    q, r = np.linalg.qr(x)
    nu_hat = solve_triangular(r, q.T @ design.y)
    r_inv = solve_triangular(r, np.eye(J))
    upsilon = r_inv @ r_inv.T

    resid = design.y - x @ nu_hat
    rss = float(resid @ resid)
    gamma2_hat = rss / m
    yty = float(design.y @ design.y)
    if gamma2_hat == 0.0 or rss <= 100.0 * np.finfo(float).eps ** 2 * yty:
        raise DegenerateFitError(nu_hat)

    beta_hat = (m - 2) * nu_hat / (m * gamma2_hat)

    beta_cov = ci_beta = ci_gamma2 = None
    if ci:
        if m - 4 <= 0:
            raise InsufficientDataError(
                f"2n - J - 4 = {m - 4} <= 0: too few increments for confidence intervals"
            )
        beta_cov = 2.0 * np.outer(beta_hat, beta_hat) / (m - 4) + (upsilon / gamma2_hat) * (
            1.0 + 2.0 / (m - 4)
        )
        z = norm.ppf(alpha / 2.0)  # negative
        se = np.sqrt(np.diag(beta_cov))
        ci_beta = np.column_stack([beta_hat + z * se, beta_hat - z * se])
        ci_gamma2 = (
            float(gamma2_hat * m / chi2.ppf(1.0 - alpha / 2.0, m)),
            float(gamma2_hat * m / chi2.ppf(alpha / 2.0, m)),
        )

    return FitResult(
        nu_hat=nu_hat,
        gamma2_hat=gamma2_hat,
        beta_hat=beta_hat,
        upsilon=upsilon,
        beta_cov=beta_cov,
        ci_beta=ci_beta,
        ci_gamma2=ci_gamma2,
        alpha=alpha,
        n=n,
        J=J,
        condition_number=cond2,
        residual_norm=math.sqrt(rss),
    )


def pooled_fit(
    tracks: Sequence[Track],
    covariates: Sequence[Covariate],
    alpha: float = 0.05,
    ci: bool = True,
) -> FitResult:
    """Fit one model to several tracks by pooling their design blocks."""
    return fit(pooled_design(tracks, covariates), alpha=alpha, ci=ci)


def pseudo_log_likelihood(track: Track, model: RsfModel) -> float:
    """Euler pseudo-log-likelihood of a track under a given model.

    Sums, over transitions, the log Gaussian density of ``x_{i+1}`` with
    mean ``x_i + (gamma2 * dt_i / 2) * grad_log_pi(x_i)`` and isotropic
    variance ``gamma2 * dt_i``; the first position is conditioned on.

    Raises
    ------
    OutOfDomainError
        If a non-final location is outside a covariate domain.
    """
    if len(track) < 2:
        raise ValueError("track must contain at least two locations")
    g2 = model.gamma2
    ll = 0.0
    xy = track.xy
    deltas = track.intervals
    for i in range(len(track) - 1):
        try:
            gx, gy = model.grad_log_pi(xy[i])
        except OutOfDomainError:
            raise OutOfDomainError(xy[i][0], xy[i][1], f"track location {i}") from None
        s2 = g2 * deltas[i]
        mx = xy[i, 0] + 0.5 * s2 * gx
        my = xy[i, 1] + 0.5 * s2 * gy
        dx = xy[i + 1, 0] - mx
        dy = xy[i + 1, 1] - my
        ll += -math.log(2.0 * math.pi * s2) - (dx * dx + dy * dy) / (2.0 * s2)
    return ll
