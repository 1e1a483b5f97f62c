"""Kernels of the quadratic bare action for the current expectation value,
and the single-mode expectation values they induce.

The density channel carries an extra (1 + z^2) factor; the kernel
denominators are D_tt = (1 + z^2)(Ltt^2 + Stt-^2) and
D_T = LT^2 + ST-^2, evaluated with the raw (internal-unit) components.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gas import GasSpec, Mode, g0, gT
from .response import ResponseBlocks

#: below this denominator magnitude the channel kernel is undefined
UNDERFLOW = 1e-280


class KernelUndefinedError(ArithmeticError):
    def __init__(self, channel: str):
        super().__init__(f"bare-action kernel undefined in {channel} channel"
                         " (vanishing denominator)")
        self.channel = channel


@dataclass(frozen=True)
class BareKernels:
    """Re/Im action kernels per channel at one mode.

    re_* multiplies (conjugate physical) x (auxiliary) amplitudes; im_*
    multiplies |auxiliary|^2 and is nonnegative (decaying overlap of the
    environment states)."""

    Q: float
    z: float
    re_tt: complex
    im_tt: float
    re_T: complex
    im_T: float
    d_tt: float
    d_T: float


@dataclass(frozen=True)
class ModeMoments:
    """Single-mode expectation values (internal hbar = 1):
    nn = <n* n>, nna = <n* n_aux>, jj and jja likewise for the transverse
    current."""

    nn: float
    nna: complex
    jj: float
    jja: complex


def _raw_tt(blocks: ResponseBlocks, spec: GasSpec):
    s = g0(spec)
    return s * blocks.ltt, s * blocks.stt_p, s * blocks.stt_m


def _raw_T(blocks: ResponseBlocks, spec: GasSpec):
    s = gT(spec)
    return s * blocks.lt, s * blocks.st_p, s * blocks.st_m


def bare_kernels(blocks: ResponseBlocks, spec: GasSpec) -> BareKernels:
    """Channel kernels (L - iS-)/D and S+/D assembled from the response
    components; raises when a denominator underflows (off the particle-
    hole support with a vanishing principal-value part)."""
    z = blocks.z
    zfac = 1.0 + z * z
    ltt, sttp, sttm = _raw_tt(blocks, spec)
    lt, stp, stm = _raw_T(blocks, spec)

    d_tt = zfac * (ltt * ltt + sttm * sttm)
    d_T = lt * lt + stm * stm
    if d_tt < UNDERFLOW:
        raise KernelUndefinedError("tt")
    if d_T < UNDERFLOW:
        raise KernelUndefinedError("T")
    return BareKernels(
        Q=blocks.Q, z=z,
        re_tt=(ltt - 1j * sttm) / d_tt, im_tt=sttp / d_tt,
        re_T=(lt - 1j * stm) / d_T, im_T=stp / d_T,
        d_tt=d_tt, d_T=d_T)


def mode_moments(blocks: ResponseBlocks, spec: GasSpec) -> ModeMoments:
    """Expectation values of the single-mode amplitudes (hbar = 1)."""
    z = blocks.z
    zfac = 1.0 + z * z
    ltt, sttp, sttm = _raw_tt(blocks, spec)
    lt, stp, stm = _raw_T(blocks, spec)
    return ModeMoments(
        nn=-2.0 * sttp * zfac,
        nna=2.0j * (ltt + 1j * sttm) * zfac,
        jj=-2.0 * stp,
        jja=2.0j * (lt + 1j * stm))
