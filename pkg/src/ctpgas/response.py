"""Particle-hole response tensor of the ideal gas on the closed time path.

Computes, per Fourier mode (Q, z):

* the principal-value tensor L (components tt, ts, L, T),
* the spectral tensors R+ / R- from the energy-conserving delta,
* their sums/differences S+- and the retarded propagator -L + i S-,
* the 2x2 closed-time-path block matrix,
* closed-form static (z = 0) expressions for degenerate fermions.

All components are stored dimensionless: tt and ts in units of
g0 = n_s k_gas / 4 pi^2, current components (L, T) in units of
gT = g0 k_gas^2 (internal hbar = m = 1).  The ts entry is the scalar
multiplying the wave vector in the tensor block layout.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _si

from .gas import GasSpec, Mode, kappa_support, occupation_reduced, pair_factor
from .quadrature import Tolerance, integrate_adaptive, integrate_vec

#: half width (in z) of the warning band around the continuum edges where
#: the radial log endpoint meets the occupation edge
EDGE_BAND = 1e-4


class SingularInputError(ValueError):
    """Evaluation requested exactly on a singular curve."""


class EdgeSingularWarning(UserWarning):
    """Mode lies within the exclusion band of a continuum edge; the
    quadrature error estimate is degraded there."""


@dataclass(frozen=True)
class ResponseBlocks:
    """Tensor components of the response at one mode.

    Suffix _p / _m denote the two spectral parts (energy gain / loss);
    s*_p = R+ + R- and s*_m = R+ - R- are derived."""

    Q: float
    z: float
    ltt: float
    lts: float
    ll: float
    lt: float
    rtt_p: float
    rts_p: float
    rl_p: float
    rt_p: float
    rtt_m: float
    rts_m: float
    rl_m: float
    rt_m: float

    @property
    def stt_p(self) -> float:
        return self.rtt_p + self.rtt_m

    @property
    def stt_m(self) -> float:
        return self.rtt_p - self.rtt_m

    @property
    def sts_p(self) -> float:
        return self.rts_p + self.rts_m

    @property
    def sts_m(self) -> float:
        return self.rts_p - self.rts_m

    @property
    def sl_p(self) -> float:
        return self.rl_p + self.rl_m

    @property
    def sl_m(self) -> float:
        return self.rl_p - self.rl_m

    @property
    def st_p(self) -> float:
        return self.rt_p + self.rt_m

    @property
    def st_m(self) -> float:
        return self.rt_p - self.rt_m

    def scaled(self, factor: float) -> "ResponseBlocks":
        """All components multiplied by a common factor (unit change)."""
        kw = {k: getattr(self, k) * factor for k in (
            "ltt", "lts", "ll", "lt", "rtt_p", "rts_p", "rl_p", "rt_p",
            "rtt_m", "rts_m", "rl_m", "rt_m")}
        return ResponseBlocks(Q=self.Q, z=self.z, **kw)


@dataclass(frozen=True)
class CtpMatrix:
    """2x2 closed-time-path block matrix per tensor component."""

    tt: np.ndarray
    ts: np.ndarray
    long: np.ndarray
    trans: np.ndarray


@dataclass(frozen=True)
class RetardedPropagator:
    """Retarded propagator -L + i S- per tensor component."""

    Q: float
    z: float
    tt: complex
    ts: complex
    long: complex
    trans: complex


# ---------------------------------------------------------------------------
# spectral parts R+-
# ---------------------------------------------------------------------------

def _spectral_sign(spec: GasSpec, Q: float, omega: float, sign: int,
                   tol: Tolerance) -> tuple[float, float, float, float]:
    """One spectral part (sign = +1 or -1) at frequency omega = z Q >= 0.

    The angular delta fixes cos(theta) = (sign*2w - Q^2)/(2 kappa Q); on
    that shell the mixed and longitudinal projections reduce to the
    constants -z and z^2, so only two radial moments are needed:
    M0 = int kappa n(1 + xi n') dkappa and M2 with kappa^3.
    Returns (tt, ts, long, trans) in g0/gT units.
    """
    w = sign * omega / Q - 0.5 * Q        # kappa * u_on_shell
    kappa_lo = abs(w)
    if sign < 0:
        kappa_lo = max(kappa_lo, math.sqrt(2.0 * omega))
    kappa_hi = kappa_support(spec)
    if kappa_lo >= kappa_hi:
        return (0.0, 0.0, 0.0, 0.0)

    if spec.is_degenerate_fermion:
        # occupied kappa < 1, final state kappa'^2 = kappa^2 + sign*2w > 1
        lo = max(kappa_lo, math.sqrt(max(0.0, 1.0 - sign * 2.0 * omega)))
        if lo >= 1.0:
            return (0.0, 0.0, 0.0, 0.0)
        m0 = 0.5 * (1.0 - lo * lo)
        m2 = 0.25 * (1.0 - lo**4)
    else:
        def wgt(kappa):
            kp = np.sqrt(np.maximum(kappa * kappa + sign * 2.0 * omega,
                                    0.0))
            base = kappa * pair_factor(spec, kappa, kp)
            return np.stack([base, kappa * kappa * base], axis=-1)

        res = integrate_vec(wgt, kappa_lo, kappa_hi, tol)
        m0, m2 = float(res.value[0]), float(res.value[1])

    z = omega / Q
    tt = math.pi / Q * m0
    ts = -(z / Q) * tt
    lng = z * z * tt
    trans = 0.5 * math.pi / Q * (m2 - w * w * m0)
    return (tt, ts, lng, max(trans, 0.0))


def spectral_blocks(spec: GasSpec, mode: Mode,
                    tol: Tolerance = Tolerance()) -> dict:
    """Both spectral parts R+ and R- at a mode (z >= 0); empty particle-
    hole support yields exact zeros."""
    if mode.z < 0:
        raise ValueError("compute z >= 0 and reflect (R+ <-> R-)")
    omega = mode.omega
    p = _spectral_sign(spec, mode.Q, omega, +1, tol)
    if omega == 0.0:
        m = p
    else:
        m = _spectral_sign(spec, mode.Q, omega, -1, tol)
    return {
        "rtt_p": p[0], "rts_p": p[1], "rl_p": p[2], "rt_p": p[3],
        "rtt_m": m[0], "rts_m": m[1], "rl_m": m[2], "rt_m": m[3],
    }


# ---------------------------------------------------------------------------
# principal-value tensor L
# ---------------------------------------------------------------------------

def _angular_moments(A: float, B: float) -> tuple[float, float, float]:
    """Principal values of int_{-1}^{1} u^n / (A - B u) du for n = 0, 1, 2.

    Uses the closed-form log kernel; a small-|B/A| series avoids
    cancellation when the pole is far outside the interval."""
    if abs(B) <= 1e-8 * abs(A):
        b = B / A
        i0 = 2.0 / A * (1.0 + b * b / 3.0)
        i1 = 2.0 / A * (b / 3.0 + b**3 / 5.0)
        i2 = 2.0 / A * (1.0 / 3.0 + b * b / 5.0)
        return i0, i1, i2
    if A == B or A == -B:
        raise ZeroDivisionError("angular log kernel singular")
    i0 = math.log(abs((A + B) / (A - B))) / B
    i1 = (A * i0 - 2.0) / B
    i2 = A * i1 / B
    return i0, i1, i2


def _angular_moments_vec(A: float, B: np.ndarray):
    """Vectorized principal-value moments over an array of B values."""
    with np.errstate(divide="ignore", invalid="ignore"):
        i0 = np.log(np.abs((A + B) / (A - B))) / B
        i1 = (A * i0 - 2.0) / B
        i2 = A * i1 / B
    # a node landing exactly on a log singularity (measure zero; the
    # singular radii are declared split points) contributes nothing
    bad = ~np.isfinite(i0)
    if np.any(bad):
        i0[bad] = 0.0
        i1[bad] = 0.0
        i2[bad] = 0.0
    small = np.abs(B) <= 1e-8 * abs(A)
    if np.any(small):
        b = B[small] / A
        i0[small] = 2.0 / A * (1.0 + b * b / 3.0)
        i1[small] = 2.0 / A * (b / 3.0 + b**3 / 5.0)
        i2[small] = 2.0 / A * (1.0 / 3.0 + b * b / 5.0)
    return i0, i1, i2


def _lindhard_integrand(Q: float, omega: float, kappa: float
                        ) -> tuple[float, float, float, float]:
    """Angularly integrated kernel at radial point kappa, for the four
    components (tt, ts-projection, long, trans)."""
    B = kappa * Q
    Ap = omega - 0.5 * Q * Q
    Am = omega + 0.5 * Q * Q
    i0p, i1p, i2p = _angular_moments(Ap, B)
    i0m, i1m, i2m = _angular_moments(Am, -B)

    tt = i0p - i0m
    ts = (-(kappa * i1p + 0.5 * Q * i0p)) - (kappa * i1m + 0.5 * Q * i0m)
    half_q = 0.5 * Q
    lng = (kappa * kappa * i2p + kappa * Q * i1p + half_q * half_q * i0p) \
        - (kappa * kappa * i2m + kappa * Q * i1m + half_q * half_q * i0m)
    trans = 0.5 * kappa * kappa * ((i0p - i2p) - (i0m - i2m))
    return tt, ts, lng, trans


def _lindhard_integrand_vec(Q: float, omega: float,
                            kappa: np.ndarray) -> np.ndarray:
    """Vectorized angular kernel; returns shape (len(kappa), 4)."""
    B = kappa * Q
    i0p, i1p, i2p = _angular_moments_vec(omega - 0.5 * Q * Q, B)
    i0m, i1m, i2m = _angular_moments_vec(omega + 0.5 * Q * Q, -B)
    half_q = 0.5 * Q
    tt = i0p - i0m
    ts = -(kappa * i1p + half_q * i0p) - (kappa * i1m + half_q * i0m)
    lng = (kappa * kappa * i2p + kappa * Q * i1p + half_q**2 * i0p) \
        - (kappa * kappa * i2m + kappa * Q * i1m + half_q**2 * i0m)
    trans = 0.5 * kappa * kappa * ((i0p - i2p) - (i0m - i2m))
    return np.stack([tt, ts, lng, trans], axis=-1)


def lindhard_blocks(spec: GasSpec, mode: Mode,
                    tol: Tolerance = Tolerance()) -> dict:
    """Principal-value tensor components at a mode, by analytic angular
    integration (log kernels) followed by adaptive radial quadrature with
    declared split points at the log singularities."""
    Q, z = mode.Q, mode.z
    omega = mode.omega
    kappa_hi = kappa_support(spec)

    # log singularities of the angular result in kappa
    splits = [abs(z - 0.5 * Q), z + 0.5 * Q]
    if spec.is_degenerate_fermion:
        edge = min(abs(abs(z - 0.5 * Q) - 1.0), abs(z + 0.5 * Q - 1.0))
        if edge < EDGE_BAND:
            warnings.warn(
                f"mode (Q={Q}, z={z}) within {EDGE_BAND} of a continuum "
                "edge; error estimate degraded", EdgeSingularWarning)

    def radial(kappa):
        n = occupation_reduced(spec, kappa)
        weight = kappa * kappa * n
        out = _lindhard_integrand_vec(Q, omega, kappa)
        out *= weight[:, None]
        out[weight == 0.0] = 0.0
        return out

    res = integrate_vec(radial, 0.0, kappa_hi, tol, split_points=splits)
    values, err = res.value, res.error_estimate
    scale = max(1.0, float(np.max(np.abs(values))))
    if err > 50 * max(tol.abs, tol.rel * scale):
        warnings.warn(
            f"radial quadrature at (Q={Q}, z={z}) reached error "
            f"{err:.2e} only", EdgeSingularWarning)
    return {"ltt": float(values[0]),
            "lts": float(values[1]) / Q,  # scalar multiplying the wave vector
            "ll": float(values[2]),
            "lt": float(values[3])}


def response_blocks(spec: GasSpec, mode: Mode,
                    tol: Tolerance = Tolerance()) -> ResponseBlocks:
    """Full set of tensor components at one mode.  Negative z is handled
    by reflection: R+ <-> R-, ts components flip sign."""
    if mode.z < 0:
        pos = response_blocks(spec, Mode(mode.Q, -mode.z), tol)
        return ResponseBlocks(
            Q=mode.Q, z=mode.z,
            ltt=pos.ltt, lts=-pos.lts, ll=pos.ll, lt=pos.lt,
            rtt_p=pos.rtt_m, rts_p=-pos.rts_m, rl_p=pos.rl_m,
            rt_p=pos.rt_m,
            rtt_m=pos.rtt_p, rts_m=-pos.rts_p, rl_m=pos.rl_p,
            rt_m=pos.rt_p)
    spect = spectral_blocks(spec, mode, tol)
    lind = lindhard_blocks(spec, mode, tol)
    return ResponseBlocks(Q=mode.Q, z=mode.z, **lind, **spect)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def _component_matrix(l: float, sp: float, sm: float) -> np.ndarray:
    return np.array([[l - 1j * sp, 1j * sm - 1j * sp],
                     [-1j * sm - 1j * sp, -l - 1j * sp]], dtype=complex)


def assemble_ctp(blocks: ResponseBlocks) -> CtpMatrix:
    """2x2 closed-time-path block matrix per component:
    diag(L - iS+, -L - iS+), offdiag(iS- - iS+, -iS- - iS+)."""
    return CtpMatrix(
        tt=_component_matrix(blocks.ltt, blocks.stt_p, blocks.stt_m),
        ts=_component_matrix(blocks.lts, blocks.sts_p, blocks.sts_m),
        long=_component_matrix(blocks.ll, blocks.sl_p, blocks.sl_m),
        trans=_component_matrix(blocks.lt, blocks.st_p, blocks.st_m))


def retarded(blocks: ResponseBlocks) -> RetardedPropagator:
    """Retarded propagator -L + i S- per component."""
    return RetardedPropagator(
        Q=blocks.Q, z=blocks.z,
        tt=-blocks.ltt + 1j * blocks.stt_m,
        ts=-blocks.lts + 1j * blocks.sts_m,
        long=-blocks.ll + 1j * blocks.sl_m,
        trans=-blocks.lt + 1j * blocks.st_m)


# ---------------------------------------------------------------------------
# degenerate-fermion closed forms (static limit)
# ---------------------------------------------------------------------------

def static_closed_forms(Q: float) -> tuple[float, float]:
    """Closed-form static brackets of the degenerate fermion gas:
    density channel (units of g0) and transverse channel (units of gT).

    Singular exactly at Q = 2 where the log argument vanishes."""
    if Q <= 0:
        raise ValueError("Q must be positive")
    if Q == 2.0:
        raise SingularInputError("static closed form singular at Q = 2")
    log_term = math.log(abs((2.0 - Q) / (2.0 + Q)))
    density = (1.0 / Q - Q / 4.0) * log_term - 1.0
    transverse = (Q * Q / 16.0
                  + (1.0 / Q) * (1.0 - Q * Q / 4.0) ** 2 * log_term
                  - 5.0 / 12.0)
    return density, transverse


def static_density_bracket_limit(Q: float) -> float:
    """Density bracket with the removable Q -> 0 and Q -> 2 limits filled
    in; used by the static flow kernel."""
    if Q < 1e-6:
        return -2.0 + Q * Q / 6.0
    if abs(Q - 2.0) < 1e-12:
        return -1.0
    return static_closed_forms(Q)[0]


def static_transverse_bracket_limit(Q: float) -> float:
    """Transverse bracket (as printed in the closed form) with removable
    limits filled in."""
    if Q < 1e-6:
        return -17.0 / 12.0 + (23.0 / 48.0) * Q * Q
    if abs(Q - 2.0) < 1e-12:
        return 0.25 - 5.0 / 12.0
    return static_closed_forms(Q)[1]
