"""Ideal quantum gas specification and occupation numbers.

Everything downstream works in dimensionless "gas units": wave numbers are
measured in the characteristic wave vector of the one-particle distribution
(the Fermi wave vector for fermions, the thermal wave vector for bosons),
energies in hbar^2 k_gas^2 / m, and hbar = m = 1.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np


class InvalidSpecError(ValueError):
    """Gas specification violates a physical constraint."""


class Statistics(enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"

    @property
    def xi(self) -> int:
        """Exchange sign: -1 for fermions, +1 for bosons."""
        return -1 if self is Statistics.FERMION else +1


@dataclass(frozen=True)
class GasSpec:
    """Statistics, degeneracy and thermodynamic state of the ideal gas.

    temperature and chemical_potential are in internal units hbar = m = 1.
    T = 0 is allowed only for fermions (with mu > 0, fixing the Fermi
    surface); bosons require mu < 0 so the occupation stays finite.
    """

    statistics: Statistics = Statistics.FERMION
    spin_degeneracy: int = 2
    temperature: float = 0.0
    chemical_potential: float = 0.5

    def __post_init__(self):
        if self.spin_degeneracy < 1:
            raise InvalidSpecError("spin_degeneracy must be >= 1")
        if self.temperature < 0:
            raise InvalidSpecError("temperature must be >= 0")
        if self.statistics is Statistics.BOSON:
            if self.chemical_potential >= 0:
                raise InvalidSpecError(
                    "boson occupation diverges for mu >= 0 (field: mu)")
            if self.temperature == 0:
                raise InvalidSpecError("T = 0 bosons are out of scope")
        else:
            if self.temperature == 0 and self.chemical_potential <= 0:
                raise InvalidSpecError(
                    "T = 0 fermions need mu > 0 to fix a Fermi surface")

    # -- convenience ------------------------------------------------------

    @property
    def xi(self) -> int:
        return self.statistics.xi

    @property
    def n_s(self) -> int:
        return self.spin_degeneracy

    @property
    def is_degenerate_fermion(self) -> bool:
        return (self.statistics is Statistics.FERMION
                and self.temperature == 0.0)

    def to_dict(self) -> dict:
        return {
            "statistics": self.statistics.value,
            "n_s": self.spin_degeneracy,
            "temperature": self.temperature,
            "mu": self.chemical_potential,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GasSpec":
        return cls(
            statistics=Statistics(d["statistics"]),
            spin_degeneracy=int(d["n_s"]),
            temperature=float(d["temperature"]),
            chemical_potential=float(d["mu"]),
        )


@dataclass(frozen=True)
class Mode:
    """One Fourier mode, located by the wave number Q (in units of k_gas)
    and the frequency ratio z = omega / (k_gas k) (hbar = m = 1).

    Q = 0 is excluded because z is undefined there.  Only z >= 0 needs to
    be computed; z < 0 follows by reflection with the two spectral parts
    swapped.
    """

    Q: float
    z: float

    def __post_init__(self):
        if not self.Q > 0:
            raise ValueError("Mode requires Q > 0")

    @property
    def omega(self) -> float:
        """Frequency in gas units: omega = z * Q."""
        return self.z * self.Q


def occupation(spec: GasSpec, k):
    """Occupation number n_k = 1/(exp(beta(k^2/2 - mu)) - xi) at physical
    wave number(s) k >= 0 (internal units hbar = m = 1).

    For T = 0 fermions this is the indicator of k < k_F.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wave number must be >= 0")
    if spec.is_degenerate_fermion:
        kf = math.sqrt(2.0 * spec.chemical_potential)
        out = np.where(k < kf, 1.0, 0.0)
        return out if out.ndim else float(out)
    beta = 1.0 / spec.temperature
    x = beta * (0.5 * k * k - spec.chemical_potential)
    # exp can overflow harmlessly for large k; clip the exponent instead.
    out = 1.0 / (np.exp(np.minimum(x, 700.0)) - spec.xi)
    return out if out.ndim else float(out)


@functools.lru_cache(maxsize=None)
def k_gas(spec: GasSpec) -> float:
    """Characteristic wave vector of the distribution: the Fermi wave
    vector for fermions (at finite T, the T = 0 wave vector giving the
    same density) and sqrt(T) for bosons (m = hbar = 1).
    """
    if spec.statistics is Statistics.BOSON:
        return math.sqrt(spec.temperature)
    if spec.temperature == 0.0:
        return math.sqrt(2.0 * spec.chemical_potential)
    n = density(spec)
    return (6.0 * math.pi**2 * n / spec.n_s) ** (1.0 / 3.0)


def kappa_support(spec: GasSpec) -> float:
    """Upper cutoff (in units of k_gas) beyond which the reduced
    occupation is numerically zero.  Exact (= 1) for T = 0 fermions."""
    if spec.is_degenerate_fermion:
        return 1.0
    kg = k_gas(spec)
    # occupation < ~1e-18 once beta(k^2/2 - mu) > 42
    kmax = math.sqrt(2.0 * max(spec.chemical_potential, 0.0)
                     + 84.0 * spec.temperature)
    return kmax / kg


def occupation_reduced(spec: GasSpec, kappa):
    """Occupation at wave number kappa measured in units of k_gas."""
    return occupation(spec, np.asarray(kappa, dtype=float) * k_gas(spec))


@functools.lru_cache(maxsize=None)
def density(spec: GasSpec) -> float:
    """Ground-state particle density n0 = n_s * int d^3k/(2pi)^3 n_k."""
    if spec.is_degenerate_fermion:
        kf = math.sqrt(2.0 * spec.chemical_potential)
        return spec.n_s * kf**3 / (6.0 * math.pi**2)
    from .quadrature import Tolerance, integrate_adaptive

    beta = 1.0 / spec.temperature
    kmax = math.sqrt(2.0 * max(spec.chemical_potential, 0.0)
                     + 84.0 * spec.temperature)

    def radial(k):
        return k * k * occupation(spec, k)

    res = integrate_adaptive(radial, 0.0, kmax,
                             Tolerance(rel=1e-11, abs=1e-14))
    return spec.n_s * res.value / (2.0 * math.pi**2)


def g0(spec: GasSpec) -> float:
    """Density-channel response scale n_s * k_gas / (4 pi^2) in internal
    units (hbar = m = 1)."""
    return spec.n_s * k_gas(spec) / (4.0 * math.pi**2)


def gT(spec: GasSpec) -> float:
    """Transverse-current response scale g0 * k_gas^2 (hbar = m = 1)."""
    return g0(spec) * k_gas(spec) ** 2


def pair_factor(spec: GasSpec, kappa, kappa_prime):
    """Statistics factor n_k (1 + xi n_k') in reduced wave numbers.

    Nonnegative for both statistics (fermion: n(1-n') in [0, 1])."""
    n = occupation_reduced(spec, kappa)
    npr = occupation_reduced(spec, kappa_prime)
    return n * (1.0 + spec.xi * npr)
