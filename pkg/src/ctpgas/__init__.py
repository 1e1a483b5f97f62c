"""Closed-time-path response, decoherence measures and hydrodynamic
coefficients of an ideal quantum gas."""

from .gas import GasSpec, Mode, Statistics, density, g0, gT, k_gas, \
    occupation
from .quadrature import QuadResult, Tolerance, integrate_adaptive, \
    integrate_pv, mc_delta_integral
from .response import ResponseBlocks, assemble_ctp, lindhard_blocks, \
    response_blocks, retarded, spectral_blocks, static_closed_forms
from .bare_action import BareKernels, ModeMoments, bare_kernels, \
    mode_moments
from .decoherence import DecoherenceGrid, RidgeProfile, d_grid, \
    d_measures, ridge_profile
from .hydro import FlowProfile, HydroCoefficients, eom_solve, \
    fit_hydro_coefficients, flow_width, static_flow

__version__ = "0.1.0"
