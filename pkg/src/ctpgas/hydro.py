"""Hydrodynamic-limit coefficients, linearized equations of motion and
static flow spreading.

The inverse retarded response at small (Q, z) is fitted per channel to
a0 + i*az*z + akk*Q^2 (density/longitudinal) and b0 + i*bz*z + bkk*Q^2
(transverse).  The fit is done against -g/K with K = L + iS- per channel;
this sign convention makes all degenerate-fermion constants come out
positive.  The equations of motion use the response kernel K* = L - iS-,
whose static limit reproduces the closed-form brackets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .gas import GasSpec, Mode, Statistics, density, g0, gT
from .quadrature import Tolerance
from .response import ResponseBlocks, response_blocks, \
    static_density_bracket_limit, static_transverse_bracket_limit


class UnstableFitError(RuntimeError):
    pass


class ResolutionError(ValueError):
    pass


class WidthUndefinedError(ArithmeticError):
    pass


class ExtrapolationWarning(UserWarning):
    """Hydrodynamic model evaluated outside its fit window."""


class UnsupportedReferenceWarning(UserWarning):
    """Fit performed for a spec without tabulated reference constants."""


@dataclass(frozen=True)
class HydroCoefficients:
    a0: float
    az: float
    akk: float
    b0: float
    bz: float
    bkk: float
    g0: float
    gT: float
    fit_window: tuple[float, float]
    fit_residual: float
    halved_window_drift: float


@dataclass(frozen=True)
class FlowProfile:
    x_axis: np.ndarray
    values: np.ndarray
    channel: str
    mode_tag: str
    ell_ext: float
    ell_flow_fitted: float        # second-moment width
    ell_flow_gauss_fit: float     # least-squares Gaussian width
    gauss_fit_residual: float


# ---------------------------------------------------------------------------
# coefficient fit
# ---------------------------------------------------------------------------

def _inverse_response_samples(spec: GasSpec, q_max: float, z_max: float,
                              n_q: int, n_z: int, tol: Tolerance):
    """Sample -1/K per channel (K in g0 / gT units) on a small-(Q, z)
    grid; returns (Q, z, f_tt, f_T) flat arrays."""
    qs = np.linspace(q_max / n_q, q_max, n_q)
    zs = np.linspace(z_max / n_z, z_max, n_z)
    Q, Z, Ftt, FT = [], [], [], []
    for q in qs:
        for z in zs:
            b = response_blocks(spec, Mode(q, z), tol)
            Q.append(q)
            Z.append(z)
            Ftt.append(-1.0 / (b.ltt + 1j * b.stt_m))
            FT.append(-1.0 / (b.lt + 1j * b.st_m))
    return (np.array(Q), np.array(Z),
            np.array(Ftt, dtype=complex), np.array(FT, dtype=complex))


def _fit_channel(Q, Z, f):
    """Least squares for f ~ c0 + i cz z + ckk Q^2, with z^2 (real part)
    and z^3, z Q^2 (imaginary part) as nuisance terms absorbing the next
    order of the expansion."""
    re_design = np.vstack([np.ones_like(Q), Q * Q, Z * Z]).T
    re_coef, re_res, *_ = np.linalg.lstsq(re_design, f.real, rcond=None)
    im_design = np.vstack([Z, Z**3, Z * Q * Q]).T
    im_coef, im_res, *_ = np.linalg.lstsq(im_design, f.imag, rcond=None)
    resid = math.sqrt((float(re_res[0]) if re_res.size else 0.0)
                      + (float(im_res[0]) if im_res.size else 0.0))
    return float(re_coef[0]), float(im_coef[0]), float(re_coef[1]), \
        resid / math.sqrt(len(Q))


def fit_hydro_coefficients(spec: GasSpec,
                           window: tuple[float, float] = (0.1, 0.05),
                           grid_resolution: tuple[int, int] = (6, 6),
                           tol: Tolerance = Tolerance(rel=1e-10, abs=1e-13),
                           residual_threshold: float = 1e-4
                           ) -> HydroCoefficients:
    """Fit the small-(Q, z) inverse response per channel and check
    stability under halving of the fit window."""
    if not (spec.statistics is Statistics.FERMION
            and spec.temperature == 0.0):
        warnings.warn(
            "hydrodynamic reference constants are tabulated for "
            "degenerate fermions only; fit proceeds without comparison",
            UnsupportedReferenceWarning)

    def run(q_max, z_max):
        Q, Z, ftt, fT = _inverse_response_samples(
            spec, q_max, z_max, *grid_resolution, tol)
        a0, az, akk, r1 = _fit_channel(Q, Z, ftt)
        b0, bz, bkk, r2 = _fit_channel(Q, Z, fT)
        return np.array([a0, az, akk, b0, bz, bkk]), max(r1, r2)

    full, resid = run(*window)
    half, _ = run(window[0] / 2.0, window[1] / 2.0)
    drift = float(np.max(np.abs(half - full) / np.abs(full)))
    if resid > residual_threshold:
        raise UnstableFitError(
            f"fit residual {resid:.3e} above {residual_threshold:.1e}; "
            f"coefficients {full.tolist()}")
    return HydroCoefficients(
        a0=full[0], az=full[1], akk=full[2],
        b0=full[3], bz=full[4], bkk=full[5],
        g0=g0(spec), gT=gT(spec),
        fit_window=window, fit_residual=resid,
        halved_window_drift=drift)


# ---------------------------------------------------------------------------
# equations of motion
# ---------------------------------------------------------------------------

def response_kernels(spec: GasSpec, mode: Mode,
                     tol: Tolerance = Tolerance()
                     ) -> tuple[complex, complex]:
    """Exact (density, transverse) response kernels in internal units:
    deviation = kernel * source per mode."""
    b = response_blocks(spec, mode, tol)
    k_tt = g0(spec) * (b.ltt - 1j * b.stt_m)
    k_T = gT(spec) * (b.lt - 1j * b.st_m)
    return k_tt, k_T


def hydro_kernels(coeffs: HydroCoefficients, mode: Mode
                  ) -> tuple[complex, complex]:
    """Polynomial-inverse approximation of the response kernels; warns
    outside the fit window."""
    q, z = mode.Q, mode.z
    if q > coeffs.fit_window[0] or abs(z) > coeffs.fit_window[1]:
        warnings.warn(
            f"mode (Q={q}, z={z}) outside hydrodynamic fit window "
            f"{coeffs.fit_window}", ExtrapolationWarning)
    k_tt = -coeffs.g0 / (coeffs.a0 - 1j * coeffs.az * z
                         + coeffs.akk * q * q)
    k_T = -coeffs.gT / (coeffs.b0 - 1j * coeffs.bz * z
                        + coeffs.bkk * q * q)
    return k_tt, k_T


def eom_solve(spec: GasSpec, modes: list[Mode],
              source_density: np.ndarray, source_transverse: np.ndarray,
              coeffs: HydroCoefficients | None = None,
              tol: Tolerance = Tolerance()) -> dict:
    """Linear response of the 4-current to a spectral source, mode by
    mode (diagonal in Fourier space).

    With coeffs given, the fitted polynomial inverse is used; otherwise
    the exact kernels.  The longitudinal current is reconstructed from
    the continuity relation j_L = z * n (deviations from the ground
    state), and the ground-state current (n0, 0) is added back."""
    source_density = np.asarray(source_density, dtype=complex)
    source_transverse = np.asarray(source_transverse, dtype=complex)
    n0 = density(spec)
    n_out = np.empty(len(modes), dtype=complex)
    jl_out = np.empty(len(modes), dtype=complex)
    jt_out = np.empty(len(modes), dtype=complex)
    for i, mode in enumerate(modes):
        if coeffs is None:
            k_tt, k_T = response_kernels(spec, mode, tol)
        else:
            k_tt, k_T = hydro_kernels(coeffs, mode)
        dn = k_tt * source_density[i]
        n_out[i] = n0 + dn
        jl_out[i] = mode.z * dn
        jt_out[i] = k_T * source_transverse[i]
    return {"n": n_out, "jL": jl_out, "jT": jt_out, "n0": n0}


# ---------------------------------------------------------------------------
# static flow
# ---------------------------------------------------------------------------

def _static_kernel(spec: GasSpec, channel: str, mode_tag: str,
                   k: np.ndarray) -> np.ndarray:
    q = np.abs(k)  # wave numbers already in units of k_gas
    if mode_tag == "gaussian-approx":
        if channel == "density":
            return -2.0 * g0(spec) * np.exp(-q * q / 6.0)
        return -(2.0 / 3.0) * gT(spec) * np.exp(-q * q / 3.0)
    if channel == "density":
        br = np.array([static_density_bracket_limit(x) for x in q])
        return g0(spec) * br
    br = np.array([static_transverse_bracket_limit(x) for x in q])
    return gT(spec) * br


def static_flow(spec: GasSpec, ell_ext: float, amplitude: float = 1.0,
                channel: str = "density", mode_tag: str = "gaussian-approx",
                n_grid: int = 4096, pad_factor: float = 4.0) -> FlowProfile:
    """Real-space response profile to a static Gaussian source of width
    ell_ext (units of 1/k_gas), on a symmetric zero-padded grid.

    The source is applied in Fourier space as amplitude * exp(-k^2
    ell_ext^2 / 2); the kernel is the static response of the chosen
    channel, either the exact closed-form bracket or its Gaussian
    approximation."""
    if ell_ext <= 0:
        raise ValueError("ell_ext must be positive")
    if channel not in ("density", "transverse"):
        raise ValueError("channel must be density or transverse")
    if mode_tag not in ("exact", "gaussian-approx"):
        raise ValueError("mode_tag must be exact or gaussian-approx")
    ell_guess = math.sqrt(ell_ext**2 + 1.0)
    half_span = pad_factor * 8.0 * ell_guess
    dx = 2.0 * half_span / n_grid
    if ell_ext / dx < 8.0:
        raise ResolutionError(
            f"fewer than 8 grid nodes per ell_ext (dx={dx:.3g})")
    x = (np.arange(n_grid) - n_grid // 2) * dx
    k = 2.0 * math.pi * np.fft.fftfreq(n_grid, d=dx)
    source_k = amplitude * np.exp(-0.5 * (k * ell_ext) ** 2)
    kern = _static_kernel(spec, channel, mode_tag, k)
    resp_k = kern * source_k
    # ifft of a real, even spectrum; fftshift centers x = 0
    prof = np.fft.fftshift(np.fft.ifft(resp_k).real) / dx
    w_mom, w_fit, resid = _widths(x, prof)
    return FlowProfile(x_axis=x, values=prof, channel=channel,
                       mode_tag=mode_tag, ell_ext=ell_ext,
                       ell_flow_fitted=w_mom, ell_flow_gauss_fit=w_fit,
                       gauss_fit_residual=resid)


def _widths(x: np.ndarray, prof: np.ndarray
            ) -> tuple[float, float, float]:
    p = np.abs(prof)
    total = p.sum()
    if total == 0.0:
        raise WidthUndefinedError("profile vanishes identically")
    mean = float((x * p).sum() / total)
    var = float(((x - mean) ** 2 * p).sum() / total)
    w_mom = math.sqrt(var)

    amp0 = float(prof[np.argmax(p)])

    def gauss(xv, a, s):
        return a * np.exp(-0.5 * (xv / s) ** 2)

    try:
        popt, _ = curve_fit(gauss, x, prof, p0=[amp0, w_mom])
        w_fit = abs(float(popt[1]))
        resid = float(np.sqrt(np.mean((gauss(x, *popt) - prof) ** 2))
                      / max(abs(popt[0]), 1e-300))
    except RuntimeError:
        w_fit, resid = math.nan, math.inf
    return w_mom, w_fit, resid


def flow_width(profile: FlowProfile) -> float:
    """Width of a flow profile from the second central moment of its
    magnitude (the Gaussian-fit cross-check is stored on the profile).

    Rejects profiles whose sign alternates beyond isolated ripples, for
    which a single width is meaningless."""
    p = profile.values
    if len(p) < 16:
        raise WidthUndefinedError("too few nodes")
    significant = np.abs(p) > 1e-4 * np.max(np.abs(p))
    signs = np.sign(p[significant])
    flips = int(np.count_nonzero(np.diff(signs) != 0))
    if flips > 4:
        raise WidthUndefinedError(
            f"profile changes sign {flips} times; width undefined")
    w, _, _ = _widths(profile.x_axis, p)
    return w
