"""Least-squares estimation for the linewidth, strain and size-convergence models.

Nonlinear fits use a Levenberg-Marquardt iteration with analytic Jacobians.
Standard errors come from ``s^2 (J^T J)^-1`` with ``s^2`` the residual
variance, i.e. they are 1-sigma values.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError
from .observables import bose_factor


@dataclass
class FitResult:
    params: dict[str, float]
    std_errors: dict[str, float]
    units: dict[str, str]
    residual_rms: float
    n_points: int
    converged: bool
    iterations: int
    message: str = ""
    covariance: np.ndarray = field(default=None, repr=False)

    def __getitem__(self, name):
        return self.params[name]


def _as_xy(data=None, x=None, y=None, min_points=1):
    if data is not None:
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("data must be a sequence of (x, y) pairs")
        x, y = arr[:, 0], arr[:, 1]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-d arrays of equal length")
    if len(x) < min_points:
        raise DomainError(f"need at least {min_points} data points, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("data contain non-finite values")
    return x, y


def _covariance(jac, residual):
    n, p = jac.shape
    dof = max(n - p, 1)
    s2 = float(residual @ residual) / dof
    try:
        return s2 * np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular normal matrix; parameters not identifiable") from exc


def levenberg_marquardt(fun, jac, p0, max_iter=500, xtol=1e-10, gtol=1e-12):
    """Minimize ``||fun(p)||^2``.

    Returns ``(p, converged, iterations, message)``. Convergence is declared
    when the relative parameter step drops below ``xtol`` or the gradient
    norm below ``gtol``.
    """
    p = np.asarray(p0, dtype=float).copy()
    r = fun(p)
    cost = float(r @ r)
    mu = 1e-3
    for it in range(1, max_iter + 1):
        j = jac(p)
        g = j.T @ r
        if np.linalg.norm(g) < gtol:
            return p, True, it, "gradient below tolerance"
        jtj = j.T @ j
        scale = np.maximum(np.diag(jtj), 1e-300)
        while True:
            try:
                step = np.linalg.solve(jtj + mu * np.diag(scale), -g)
            except np.linalg.LinAlgError:
                step = np.full_like(p, np.nan)
            trial = p + step
            r_trial = fun(trial) if np.all(np.isfinite(trial)) else None
            cost_trial = float(r_trial @ r_trial) if r_trial is not None else np.inf
            if np.isfinite(cost_trial) and cost_trial <= cost:
                break
            mu *= 10.0
            if mu > 1e20:
                return p, False, it, "damping diverged without decreasing the residual"
        rel_step = np.linalg.norm(step) / (np.linalg.norm(p) + xtol)
        p, r, cost = trial, r_trial, cost_trial
        mu = max(mu / 10.0, 1e-15)
        if rel_step < xtol or cost == 0.0:
            return p, True, it, "relative step below tolerance"
    return p, False, max_iter, "maximum iterations reached"


def _finish(names, units, p, jac, resid, converged, iterations, message):
    cov = _covariance(jac, resid)
    errs = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return FitResult(
        params=dict(zip(names, map(float, p))),
        std_errors=dict(zip(names, map(float, errs))),
        units=units,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=len(resid),
        converged=converged,
        iterations=iterations,
        message=message,
        covariance=cov,
    )


def linewidth_initial_guess(t, gamma, delta_p, gamma_r):
    lo, hi = np.argmin(t), np.argmax(t)
    gamma_1 = max(gamma[lo] - gamma_r, 0.0)
    activation = delta_p**3 * bose_factor(delta_p, t[hi])
    a = (gamma[hi] - gamma_r - gamma_1) / activation if activation > 0 else 0.0
    return max(a, 0.0), gamma_1


def fit_linewidth(data=None, delta_p=None, gamma_r=None, init=None, *, temperatures=None, linewidths=None):
    """Fit A and gamma_1 of the linewidth model with delta_p and gamma_r held fixed.

    Parameters
    ----------
    data : array_like, shape (n, 2)
        Rows of (T in K, linewidth in GHz). Alternatively pass
        ``temperatures`` and ``linewidths``.
    delta_p : float
        Polaronic gap in meV.
    gamma_r : float
        Radiative linewidth in GHz.
    init : (float, float), optional
        Starting (A, gamma_1). Defaults to a data-driven estimate.

    Returns
    -------
    FitResult
        Parameters ``A`` (GHz/meV^3) and ``gamma_1`` (GHz).
    """
    t, y = _as_xy(data, temperatures, linewidths, min_points=3)
    if delta_p is None or gamma_r is None:
        raise DomainError("delta_p and gamma_r are required")
    if np.any(t <= 0):
        raise DomainError("temperatures must be > 0 K")
    if delta_p <= 0 or gamma_r < 0:
        raise DomainError("need delta_p > 0 and gamma_r >= 0")
    activation = delta_p**3 * bose_factor(delta_p, t)
    if init is None:
        init = linewidth_initial_guess(t, y, delta_p, gamma_r)

    def fun(p):
        return p[0] * activation + gamma_r + p[1] - y

    def jac(p):
        return np.column_stack([activation, np.ones_like(t)])

    p, converged, its, msg = levenberg_marquardt(fun, jac, init)
    res = _finish(
        ("A", "gamma_1"), {"A": "GHz/meV^3", "gamma_1": "GHz"}, p, jac(p), fun(p), converged, its, msg
    )
    negative = [k for k, v in res.params.items() if v < 0]
    if negative:
        note = f"negative fitted parameter(s): {', '.join(negative)}"
        warnings.warn(note, RuntimeWarning, stacklevel=2)
        res.message = f"{res.message}; {note}"
    return res


def fit_linear_slope(data=None, *, x=None, y=None) -> FitResult:
    """Ordinary least squares ``y = a x + b``.

    Used for ZPL energy (eV) against a single strain component.
    """
    x, y = _as_xy(data, x, y, min_points=2)
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0.0:
        raise DomainError("singular design: all x values identical")
    a = float(((x - xm) * (y - ym)).sum()) / sxx
    b = ym - a * xm
    resid = y - (a * x + b)
    design = np.column_stack([x, np.ones_like(x)])
    return _finish(
        ("a", "b"), {"a": "eV/strain", "b": "eV"}, (a, b), design, resid, True, 0, "closed form"
    )


def _exp_model(p, size):
    v_inf, amp, length = p
    return v_inf + amp * np.exp(-size / length)


def fit_exponential_convergence(data=None, length_init=None, *, sizes=None, values=None) -> FitResult:
    """Fit ``v(L) = v_inf + B exp(-L / ell)`` and extrapolate to ``v_inf``.

    Constant data give ``B = 0`` and ``v_inf`` equal to the constant; ``ell``
    is then undetermined and reported as its starting value with zero error.
    """
    size, v = _as_xy(data, sizes, values, min_points=3)
    if len(np.unique(size)) < 3:
        raise DomainError("need at least three distinct sizes")
    if np.any(size <= 0):
        raise DomainError("sizes must be positive")
    names = ("v_inf", "B", "length")
    units = {"v_inf": "meV", "B": "meV", "length": "size units"}
    scale = max(np.abs(v).max(), 1e-300)

    if np.ptp(v) <= 1e-12 * scale:
        length = float(length_init) if length_init else float(np.median(size))
        return FitResult(
            params={"v_inf": float(v.mean()), "B": 0.0, "length": length},
            std_errors={"v_inf": 0.0, "B": 0.0, "length": 0.0},
            units=units,
            residual_rms=float(np.sqrt(np.mean((v - v.mean()) ** 2))),
            n_points=len(v),
            converged=True,
            iterations=0,
            message="constant data; decay length undetermined",
        )

    def linear_part(length):
        design = np.column_stack([np.ones_like(size), np.exp(-size / length)])
        coef, *_ = np.linalg.lstsq(design, v, rcond=None)
        resid = design @ coef - v
        return coef, float(resid @ resid)

    if length_init is None:
        grid = np.geomspace(np.min(np.diff(np.sort(size))) / 10.0, 10.0 * size.max(), 400)
        length_init = min(grid, key=lambda ell: linear_part(ell)[1])
    coef, _ = linear_part(length_init)
    p0 = (coef[0], coef[1], length_init)

    def fun(p):
        return _exp_model(p, size) - v

    def jac(p):
        _, amp, length = p
        e = np.exp(-size / length)
        return np.column_stack([np.ones_like(size), e, amp * e * size / length**2])

    p, converged, its, msg = levenberg_marquardt(fun, jac, p0)
    return _finish(names, units, p, jac(p), fun(p), converged, its, msg)
