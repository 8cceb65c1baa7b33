"""Least-squares extraction of resonance descriptors from a spectrum.

Fits the empirical lineshape

    f(delta) = gt*(A*gt + B*(delta-delta0))/(gt^2 + (delta-delta0)^2) + C

to transmission data by damped Gauss-Newton (Levenberg-style multiplicative
damping, factor 10) with the analytic Jacobian.  The width gt is kept
positive through an internal log parameterization.  Descriptors are
reported both Cartesian (A, B) and polar (D, phi), phi = atan2(B, A) in
(-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import LineshapeParams, PolarForm
from .errors import DegenerateSpectrum
from .propagation import Spectrum

__all__ = ["FitResult", "fit_lineshape", "initial_guess", "to_polar"]

_MAX_ITER = 200
_STEP_TOL = 1e-10
_GRAD_TOL = 1e-12
_FLAT_VARIANCE = 1e-12


@dataclass(frozen=True)
class FitResult:
    params: LineshapeParams
    polar: PolarForm
    residual_rms: float
    converged: bool
    iterations: int
    covariance_diagonal: np.ndarray  # variances of (A, B, C, gt, delta0)


def to_polar(a: float, b: float) -> tuple[float, float]:
    """(A, B) -> (D, phi); D = hypot, phi = atan2(B, A) in (-pi, pi].
    (0, 0) maps to (0, 0) by convention."""
    if a == 0.0 and b == 0.0:
        return 0.0, 0.0
    return math.hypot(a, b), math.atan2(b, a)


def _model(d, theta):
    a, b, c, lg, d0 = theta
    gt = math.exp(lg)
    x = d - d0
    den = gt * gt + x * x
    return gt * (a * gt + b * x) / den + c


def _jacobian(d, theta):
    a, b, _, lg, d0 = theta
    gt = math.exp(lg)
    x = d - d0
    den = gt * gt + x * x
    j = np.empty((d.size, 5))
    j[:, 0] = gt * gt / den
    j[:, 1] = gt * x / den
    j[:, 2] = 1.0
    # d f / d gt, then chain rule onto log(gt)
    dfdgt = (2 * a * gt * x * x + b * x * (x * x - gt * gt)) / den**2
    j[:, 3] = gt * dfdgt
    j[:, 4] = gt * (b * x * x + 2 * a * gt * x - b * gt * gt) / den**2
    return j


def initial_guess(spectrum: Spectrum) -> LineshapeParams:
    """Starting point for the fit, built from robust landmarks: background
    from the outer 10% of grid points, center from the extremum of |T - C|,
    width from its half-maximum crossing, asymmetry from the residual at
    center +- width."""
    d = np.asarray(spectrum.delta_grid, dtype=float)
    t = np.asarray(spectrum.transmission, dtype=float)
    n = d.size
    if n == 0:
        raise DegenerateSpectrum("empty spectrum")
    if float(np.var(t)) < _FLAT_VARIANCE * max(1.0, float(np.mean(t)) ** 2):
        raise DegenerateSpectrum("transmission is flat within tolerance")

    edge = max(1, n // 10)
    c = float(np.median(np.concatenate([t[:edge], t[-edge:]])))
    r = np.abs(t - c)
    i0 = int(np.argmax(r))
    d0 = float(d[i0])
    half = 0.5 * r[i0]

    ihi = i0
    while ihi < n - 1 and r[ihi] > half:
        ihi += 1
    ilo = i0
    while ilo > 0 and r[ilo] > half:
        ilo -= 1
    spacing = float(np.min(np.diff(d))) if n > 1 else 1.0
    gt = max(0.5 * float(d[ihi] - d[ilo]), spacing)

    a = float(t[i0] - c)
    b = float(np.interp(d0 + gt, d, t) - np.interp(d0 - gt, d, t))
    return LineshapeParams(A=a, B=b, C=c, gamma_tilde=gt, delta0=d0)


def fit_lineshape(spectrum: Spectrum, start: LineshapeParams | None = None) -> FitResult:
    """Fit the empirical lineshape to a transmission spectrum.

    Returns best-so-far with converged=False after 200 iterations; raises
    DegenerateSpectrum for flat input.  The covariance diagonal is the
    Gauss-Newton estimate sigma^2 * diag((J^T J)^-1) in the external
    (A, B, C, gamma_tilde, delta0) parameterization.
    """
    d = np.asarray(spectrum.delta_grid, dtype=float)
    t = np.asarray(spectrum.transmission, dtype=float)
    if d.size < 7:
        raise ValueError("need at least 7 grid points to fit 5 parameters")

    g0 = start if start is not None else initial_guess(spectrum)
    theta = np.array([g0.A, g0.B, g0.C, math.log(g0.gamma_tilde), g0.delta0])

    resid = _model(d, theta) - t
    sse = float(resid @ resid)
    lam = 1e-3
    converged = False
    iterations = 0
    jac = _jacobian(d, theta)

    for iterations in range(1, _MAX_ITER + 1):
        grad = jac.T @ resid
        if np.max(np.abs(grad)) < _GRAD_TOL * (1.0 + sse):
            converged = True
            break
        h = jac.T @ jac
        dh = np.diag(h).copy()
        dh[dh <= 0] = 1.0
        step = None
        while lam < 1e14:
            try:
                step = np.linalg.solve(h + lam * np.diag(dh), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = theta + step
            r_new = _model(d, trial) - t
            sse_new = float(r_new @ r_new)
            if sse_new <= sse:
                break
            lam *= 10.0
        if step is None or lam >= 1e14:
            break  # damping exhausted; report best-so-far
        theta = theta + step
        resid = _model(d, theta) - t
        sse = float(resid @ resid)
        jac = _jacobian(d, theta)
        lam = max(lam / 10.0, 1e-14)
        rel_step = np.max(np.abs(step) / np.maximum(np.abs(theta), 1e-300))
        if rel_step < _STEP_TOL:
            converged = True
            break

    a, b, c, lg, d0 = theta
    gt = math.exp(lg)
    params = LineshapeParams(A=float(a), B=float(b), C=float(c),
                             gamma_tilde=float(gt), delta0=float(d0))
    dd, phi = to_polar(params.A, params.B)
    rms = math.sqrt(sse / d.size)

    dof = max(d.size - 5, 1)
    sigma2 = sse / dof
    try:
        cov_int = sigma2 * np.diag(np.linalg.pinv(jac.T @ jac))
    except np.linalg.LinAlgError:
        cov_int = np.full(5, np.nan)
    cov = cov_int.copy()
    cov[3] = cov_int[3] * gt * gt  # var(log gt) -> var(gt)

    return FitResult(params=params,
                     polar=PolarForm(D=dd, phi=phi, C=params.C),
                     residual_rms=rms, converged=converged,
                     iterations=iterations, covariance_diagonal=cov)
