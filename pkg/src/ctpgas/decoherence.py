"""Consistency / decoherence measures on the (Q, z) plane.

D_tt and D_T are square roots of the ratio |<O* O>| / |<O* O_aux>|^2 per
channel.  For degenerate fermions they vanish identically outside the
particle-hole strip |z - Q/2| <= 1 (z >= 0), which is short-circuited
analytically before any quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bare_action import mode_moments
from .gas import GasSpec, Mode, g0, gT
from .quadrature import Tolerance
from .response import ResponseBlocks, response_blocks, spectral_blocks

#: numeric support threshold for the spectral weight at finite temperature
FINITE_T_SUPPORT_EPS = 1e-14


class IndeterminateMeasureError(ArithmeticError):
    """Numerator and denominator both underflow; the ratio is undefined."""


@dataclass(frozen=True)
class DecoherenceGrid:
    Q_axis: np.ndarray
    z_axis: np.ndarray
    dtt: np.ndarray          # shape (len(z_axis), len(Q_axis))
    dT: np.ndarray
    spec: GasSpec
    defects: list = field(default_factory=list)


@dataclass(frozen=True)
class RidgeProfile:
    Q_axis: np.ndarray
    dtt_on_shell: np.ndarray
    dT_on_shell: np.ndarray
    argmax_Q_tt: float
    spec: GasSpec
    defects: list = field(default_factory=list)


def on_strip(spec: GasSpec, Q: float, z: float) -> bool:
    """Analytic particle-hole support test for degenerate fermions; always
    True (deferred to a numeric test) otherwise."""
    if spec.is_degenerate_fermion:
        return z > 0.0 and abs(z - 0.5 * Q) < 1.0
    return True


def d_measures(blocks: ResponseBlocks, spec: GasSpec
               ) -> tuple[float, float]:
    """(D_tt, D_T) at one mode.  A vanishing numerator gives exactly 0
    regardless of the denominator."""
    z = blocks.z
    zfac = 1.0 + z * z
    s0, sT = g0(spec), gT(spec)
    num_tt = abs(s0 * blocks.stt_p)
    den_tt = 2.0 * zfac * ((s0 * blocks.ltt) ** 2 + (s0 * blocks.stt_m) ** 2)
    num_T = abs(sT * blocks.st_p)
    den_T = 2.0 * ((sT * blocks.lt) ** 2 + (sT * blocks.st_m) ** 2)

    def ratio(num, den, channel):
        if num == 0.0:
            return 0.0
        if den < 1e-280:
            raise IndeterminateMeasureError(
                f"{channel} measure indeterminate at "
                f"(Q={blocks.Q}, z={blocks.z})")
        return math.sqrt(num / den)

    return ratio(num_tt, den_tt, "tt"), ratio(num_T, den_T, "T")


def d_measures_from_moments(blocks: ResponseBlocks, spec: GasSpec
                            ) -> tuple[float, float]:
    """Same measures through the single-mode moments; independent code
    path used to cross-check the direct ratio."""
    m = mode_moments(blocks, spec)
    dtt = 0.0 if m.nn == 0.0 else math.sqrt(abs(m.nn) / abs(m.nna) ** 2)
    dT = 0.0 if m.jj == 0.0 else math.sqrt(abs(m.jj) / abs(m.jja) ** 2)
    return dtt, dT


def _measures_at(spec: GasSpec, Q: float, z: float, tol: Tolerance,
                 defects: list) -> tuple[float, float]:
    if not on_strip(spec, Q, z):
        return 0.0, 0.0
    if not spec.is_degenerate_fermion:
        spect = spectral_blocks(spec, Mode(Q, z), tol)
        if (spect["rtt_p"] + spect["rtt_m"] < FINITE_T_SUPPORT_EPS
                and spect["rt_p"] + spect["rt_m"] < FINITE_T_SUPPORT_EPS):
            return 0.0, 0.0
    try:
        blocks = response_blocks(spec, Mode(Q, z), tol)
        return d_measures(blocks, spec)
    except (ArithmeticError, RuntimeError) as exc:
        defects.append({"Q": Q, "z": z, "error": str(exc)})
        return math.nan, math.nan


def d_grid(spec: GasSpec,
           Q_range: tuple[float, float] = (0.025, 6.0),
           z_range: tuple[float, float] = (0.0, 4.0),
           resolution: tuple[int, int] = (240, 160),
           tol: Tolerance = Tolerance(rel=1e-7, abs=1e-10)
           ) -> DecoherenceGrid:
    """Dense evaluation of both measures on an ascending (Q, z) grid.

    Per-mode numeric failures are collected as defects (NaN entries)
    without aborting the sweep."""
    nq, nz = resolution
    if nq < 2 or nz < 2:
        raise ValueError("resolution must be >= 2 per axis")
    if Q_range[0] <= 0:
        raise ValueError("Q range must be positive")
    q_axis = np.linspace(Q_range[0], Q_range[1], nq)
    z_axis = np.linspace(z_range[0], z_range[1], nz)
    dtt = np.zeros((nz, nq))
    dT = np.zeros((nz, nq))
    defects: list = []
    for i, z in enumerate(z_axis):
        for j, q in enumerate(q_axis):
            dtt[i, j], dT[i, j] = _measures_at(spec, q, z, tol, defects)
    return DecoherenceGrid(q_axis, z_axis, dtt, dT, spec, defects)


def _parabolic_argmax(x: np.ndarray, y: np.ndarray) -> float:
    """Location of the maximum, refined by a parabola through the three
    nodes around the discrete maximum."""
    i = int(np.nanargmax(y))
    if i == 0 or i == len(x) - 1:
        return float(x[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(x[i])
    shift = 0.5 * (y0 - y2) / denom
    return float(x[i] + shift * (x[i + 1] - x[i]))


def ridge_profile(spec: GasSpec,
                  Q_range: tuple[float, float] = (0.05, 6.0),
                  resolution: int = 120,
                  tol: Tolerance = Tolerance(rel=1e-8, abs=1e-11)
                  ) -> RidgeProfile:
    """Measures along the environment mass shell z = Q/2, with the
    density-channel maximum refined parabolically."""
    if Q_range[0] <= 0:
        raise ValueError("Q range must be positive")
    q_axis = np.linspace(Q_range[0], Q_range[1], resolution)
    dtt = np.empty(resolution)
    dT = np.empty(resolution)
    defects: list = []
    for j, q in enumerate(q_axis):
        dtt[j], dT[j] = _measures_at(spec, q, 0.5 * q, tol, defects)
    return RidgeProfile(q_axis, dtt, dT,
                        _parabolic_argmax(q_axis, dtt), spec, defects)
