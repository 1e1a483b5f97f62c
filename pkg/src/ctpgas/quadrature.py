"""Numerical integration engines.

Three engines: adaptive 1D quadrature (QUADPACK behind a small result
wrapper), Cauchy principal-value quadrature by pole subtraction, and a
seeded Monte-Carlo integrator for 3D integrals with a smeared delta
constraint, used as an independent oracle for the reduced spectral
integrals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _si


class NonConvergenceError(RuntimeError):
    """Quadrature did not reach the requested tolerance.

    Carries the best estimate and its error so callers may degrade
    gracefully instead of aborting a whole grid sweep."""

    def __init__(self, message: str, best: "QuadResult"):
        super().__init__(message)
        self.best = best


class DegenerateSupportError(RuntimeError):
    """Monte-Carlo constraint shell received no effective samples."""


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs: float = 1e-12
    max_evaluations: int = 500_000

    def __post_init__(self):
        if self.rel <= 0 or self.abs <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int


def integrate_adaptive(f: Callable[[float], float], a: float, b: float,
                       tol: Tolerance = Tolerance(),
                       split_points: Sequence[float] | None = None,
                       ) -> QuadResult:
    """Adaptive quadrature of f on (a, b).

    split_points declares interior locations of integrable singularities
    (log endpoints, kinks); they are honored by subdivision.  b = inf is
    supported (without split points).
    """
    if not a < b:
        raise ValueError("require a < b")
    limit = max(50, tol.max_evaluations // 21)
    points = None
    if split_points is not None:
        points = sorted(p for p in split_points if a < p < b)
        if not points:
            points = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        out = _si.quad(f, a, b, epsabs=tol.abs, epsrel=tol.rel,
                       limit=limit, points=points, full_output=True)
    value, abserr, info = out[0], out[1], out[2]
    nev = int(info["neval"])
    result = QuadResult(value, abserr, nev)
    if len(out) > 3 and abserr > max(tol.abs, tol.rel * abs(value)) * 50:
        raise NonConvergenceError(
            f"quadrature stalled at error {abserr:.3e}: {out[3]}", result)
    return result


def integrate_pv(f: Callable[[float], float], a: float, b: float,
                 pole: float, tol: Tolerance = Tolerance(),
                 split_points: Sequence[float] | None = None,
                 ) -> QuadResult:
    """Cauchy principal value of int_a^b f(x) dx for f(x) = g(x)/(x - pole)
    with g smooth at the pole.

    Uses pole subtraction: the regularized integrand (g(x) - g(pole))/(x -
    pole) is integrated adaptively and the subtracted term contributes
    g(pole) * log|(b - pole)/(pole - a)|.  A pole outside (a, b) falls back
    to plain adaptive quadrature.
    """
    if not (a < pole < b):
        return integrate_adaptive(f, a, b, tol, split_points)

    # residue g(pole) by symmetric limit of (x - pole) f(x)
    h = max(1e-7 * (b - a), 1e-12)
    gp = 0.5 * (h * f(pole + h) + (-h) * f(pole - h))
    gp4 = 0.5 * (2 * h * f(pole + 2 * h) + (-2 * h) * f(pole - 2 * h))
    gp = (4.0 * gp - gp4) / 3.0  # Richardson in h^2

    def regular(x):
        if abs(x - pole) < 0.5 * h:
            return 0.0
        return ((x - pole) * f(x) - gp) / (x - pole)

    splits = [pole]
    if split_points is not None:
        splits += list(split_points)
    res = integrate_adaptive(regular, a, b, tol, split_points=splits)
    log_term = gp * math.log(abs((b - pole) / (pole - a)))
    return QuadResult(res.value + log_term, res.error_estimate,
                      res.evaluations + 4)


def mc_delta_integral(f: Callable[[np.ndarray], np.ndarray],
                      constraint: Callable[[np.ndarray], np.ndarray],
                      smear: float, samples: int, seed: int,
                      radius: float = 2.0,
                      box: tuple | None = None,
                      chunk: int = 2_000_000) -> QuadResult:
    """Monte-Carlo estimate of int d^3k f(k) delta(constraint(k)) over a
    ball of the given radius (or an axis-aligned box, when given), with
    the delta smeared to a normalized Gaussian of width `smear`.

    The sampling region must cover the support of f on the constraint
    shell; a tight box around the shell reduces the variance without
    touching the estimator.  f and constraint must accept an (N, 3)
    array; constraint returns a length-N array, f may return (N,) or
    (N, m) to integrate m components over shared samples.  Deterministic
    for a fixed seed; the error estimate is the standard error of the
    sample mean (per component).
    """
    if smear <= 0:
        raise ValueError("smear must be positive")
    if samples < 1:
        raise DegenerateSupportError("no samples requested")
    rng = np.random.default_rng(seed)
    if box is not None:
        lows = np.asarray(box[0], dtype=float)
        highs = np.asarray(box[1], dtype=float)
        if lows.shape != (3,) or np.any(highs <= lows):
            raise ValueError("box must be ((x0,y0,z0), (x1,y1,z1))")
        volume = float(np.prod(highs - lows))
    else:
        volume = 4.0 / 3.0 * math.pi * radius**3
    norm = 1.0 / (smear * math.sqrt(2.0 * math.pi))

    total = None
    total_sq = None
    n_done = 0
    n_hit = 0
    while n_done < samples:
        n = min(chunk, samples - n_done)
        if box is not None:
            k = lows + (highs - lows) * rng.random((n, 3))
        else:
            # uniform in the ball: isotropic direction, radius ~ r^2 dr
            v = rng.standard_normal((n, 3))
            v /= np.linalg.norm(v, axis=1, keepdims=True)
            r = radius * np.cbrt(rng.random(n))
            k = v * r[:, None]
        c = constraint(k)
        w = norm * np.exp(-0.5 * (c / smear) ** 2)
        hit = w > 0.0
        n_hit += int(np.count_nonzero(hit))
        if np.any(hit):
            fv = np.asarray(f(k[hit]), dtype=float)
            if fv.ndim == 1:
                fv = fv[:, None]
            vals = fv * w[hit, None]
            if total is None:
                total = np.zeros(vals.shape[1])
                total_sq = np.zeros(vals.shape[1])
            total += vals.sum(axis=0)
            total_sq += (vals * vals).sum(axis=0)
        n_done += n
    if n_hit == 0:
        raise DegenerateSupportError(
            "constraint shell not reached by any sample")
    mean = total / n_done
    var = np.maximum(total_sq / n_done - mean * mean, 0.0)
    value = volume * mean
    err = volume * np.sqrt(var / n_done)
    if value.shape[0] == 1:
        return QuadResult(float(value[0]), float(err[0]), n_done)
    return QuadResult(value, err, n_done)


_GL_LO = np.polynomial.legendre.leggauss(10)
_GL_HI = np.polynomial.legendre.leggauss(21)


def integrate_vec(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                  tol: Tolerance = Tolerance(),
                  split_points: Sequence[float] | None = None,
                  max_depth: int = 48) -> QuadResult:
    """Adaptive quadrature for an array-valued, numpy-vectorized integrand.

    f maps a 1D array of abscissae to an array of shape (len(x), m); all
    active subintervals are evaluated in a single call per refinement
    sweep.  Error per interval is the difference of nested-order
    Gauss-Legendre rules; intervals are bisected until the summed error
    meets the tolerance.  Declared split points become subinterval
    endpoints (integrable endpoint singularities are never evaluated).

    Returns a QuadResult whose value is an ndarray of shape (m,).
    """
    if not a < b:
        raise ValueError("require a < b")
    edges = [a, b]
    if split_points:
        edges += [p for p in split_points if a < p < b]
    edges = sorted(set(edges))
    intervals = [(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]

    xs_lo, ws_lo = _GL_LO
    xs_hi, ws_hi = _GL_HI
    done_val = None
    done_err = 0.0
    evals = 0

    for depth in range(max_depth):
        lo = np.array([iv[0] for iv in intervals])
        hi = np.array([iv[1] for iv in intervals])
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x_lo = (mid[:, None] + half[:, None] * xs_lo).ravel()
        x_hi = (mid[:, None] + half[:, None] * xs_hi).ravel()
        y_lo = np.asarray(f(x_lo), dtype=float)
        y_hi = np.asarray(f(x_hi), dtype=float)
        evals += len(x_lo) + len(x_hi)
        if y_lo.ndim == 1:
            y_lo = y_lo[:, None]
            y_hi = y_hi[:, None]
        m = y_hi.shape[1]
        y_lo = y_lo.reshape(len(intervals), len(xs_lo), m)
        y_hi = y_hi.reshape(len(intervals), len(xs_hi), m)
        est_lo = half[:, None] * np.einsum("ijk,j->ik", y_lo, ws_lo)
        est_hi = half[:, None] * np.einsum("ijk,j->ik", y_hi, ws_hi)
        err = np.max(np.abs(est_hi - est_lo), axis=1)

        if done_val is None:
            done_val = np.zeros(m)
        total = done_val + est_hi.sum(axis=0)
        target = max(tol.abs, tol.rel * float(np.max(np.abs(total))))
        local = target * np.maximum(
            (hi - lo) / (b - a), 1e-6) * 0.5

        keep = (err <= local) | (hi - lo < 1e-14 * (b - a))
        last_sweep = (depth == max_depth - 1
                      or evals > tol.max_evaluations)
        if last_sweep:
            keep = np.ones_like(keep)
        done_val = done_val + est_hi[keep].sum(axis=0)
        done_err += float(err[keep].sum())
        pending = [(l, h) for l, h, k in zip(lo, hi, keep) if not k]
        if not pending:
            break
        intervals = []
        for l, h in pending:
            c = 0.5 * (l + h)
            intervals.append((l, c))
            intervals.append((c, h))

    value = done_val if done_val.shape[0] > 1 else float(done_val[0])
    return QuadResult(value, done_err, evals)


def extrapolate_smear(values: Sequence[float],
                      smears: Sequence[float]) -> float:
    """Richardson extrapolation of smeared-delta estimates to zero width.

    The Gaussian smearing error of a smooth integrand is O(smear^2); two
    widths give the s -> 0 limit, more are fitted in s^2 by least squares.
    """
    s = np.asarray(smears, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(s) < 2:
        return float(v[0])
    design = np.vstack([np.ones_like(s), s * s]).T
    coef, *_ = np.linalg.lstsq(design, v, rcond=None)
    return float(coef[0])
