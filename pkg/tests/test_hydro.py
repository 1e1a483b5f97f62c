import math

import numpy as np
import pytest

from ctpgas.gas import GasSpec, Mode, Statistics, density, g0, gT
from ctpgas.hydro import (ExtrapolationWarning, FlowProfile,
                          HydroCoefficients, ResolutionError,
                          UnsupportedReferenceWarning, WidthUndefinedError,
                          eom_solve, fit_hydro_coefficients, flow_width,
                          hydro_kernels, response_kernels, static_flow)
from ctpgas.quadrature import Tolerance
from ctpgas.response import static_closed_forms

TOL = Tolerance(rel=1e-9, abs=1e-12)
FERMI = GasSpec()


@pytest.fixture(scope="module")
def fitted():
    return fit_hydro_coefficients(FERMI, grid_resolution=(4, 4))


class TestCoefficientFit:
    def test_residual_and_drift_reported(self, fitted):
        assert fitted.fit_residual < 1e-4
        assert fitted.halved_window_drift < 0.01
        assert fitted.fit_window == (0.1, 0.05)

    def test_scales_attached(self, fitted):
        assert fitted.g0 == pytest.approx(g0(FERMI), rel=1e-14)
        assert fitted.gT == pytest.approx(gT(FERMI), rel=1e-14)

    def test_non_reference_spec_warns_but_fits(self):
        bose = GasSpec(statistics=Statistics.BOSON, temperature=1.0,
                       chemical_potential=-0.5)
        with pytest.warns(UnsupportedReferenceWarning):
            coeffs = fit_hydro_coefficients(bose, grid_resolution=(3, 3))
        assert math.isfinite(coeffs.a0)


class TestEquationsOfMotion:
    def test_zero_source_returns_ground_state(self):
        modes = [Mode(0.5, 0.2), Mode(1.0, 0.1)]
        out = eom_solve(FERMI, modes, np.zeros(2), np.zeros(2), tol=TOL)
        assert np.allclose(out["n"], density(FERMI))
        assert np.allclose(out["jL"], 0.0)
        assert np.allclose(out["jT"], 0.0)

    def test_static_density_response_matches_closed_form(self):
        Q = 0.8
        out = eom_solve(FERMI, [Mode(Q, 1e-9)], np.array([1.0]),
                        np.zeros(1), tol=TOL)
        dn = out["n"][0] - out["n0"]
        expected = g0(FERMI) * static_closed_forms(Q)[0]
        assert dn.real == pytest.approx(expected, rel=1e-5)

    def test_continuity_relation(self):
        modes = [Mode(0.7, 0.4), Mode(1.5, 0.9), Mode(2.0, 1.0)]
        src = np.array([1.0, 0.5 - 0.2j, 2.0])
        out = eom_solve(FERMI, modes, src, np.zeros(3), tol=TOL)
        for i, m in enumerate(modes):
            dn = out["n"][i] - out["n0"]
            assert out["jL"][i] == pytest.approx(m.z * dn, rel=1e-10)

    def test_hydro_vs_exact_in_window(self, fitted):
        mode = Mode(0.05, 0.02)
        exact = eom_solve(FERMI, [mode], np.ones(1), np.ones(1), tol=TOL)
        hydro = eom_solve(FERMI, [mode], np.ones(1), np.ones(1),
                          coeffs=fitted)
        dn_e = exact["n"][0] - exact["n0"]
        dn_h = hydro["n"][0] - hydro["n0"]
        assert abs(dn_h - dn_e) / abs(dn_e) < 0.02
        assert abs(hydro["jT"][0] - exact["jT"][0]) / abs(
            exact["jT"][0]) < 0.02

    def test_extrapolation_outside_window_warns(self, fitted):
        with pytest.warns(ExtrapolationWarning):
            hydro_kernels(fitted, Mode(1.0, 0.5))

    def test_exact_kernel_static_limit(self):
        Q = 1.2
        k_tt, k_T = response_kernels(FERMI, Mode(Q, 0.0), TOL)
        assert k_tt.real == pytest.approx(
            g0(FERMI) * static_closed_forms(Q)[0], rel=1e-8)
        assert k_tt.imag == 0.0


class TestStaticFlow:
    def test_gaussian_approx_width_formula(self):
        prof = static_flow(FERMI, ell_ext=1.0)
        assert prof.ell_flow_fitted == pytest.approx(
            math.sqrt(1.0 + 1.0 / 3.0), rel=1e-6)
        assert prof.gauss_fit_residual < 1e-9

    def test_wide_source_limit(self):
        prof = static_flow(FERMI, ell_ext=50.0)
        assert prof.ell_flow_fitted / 50.0 - 1.0 < 1e-3

    def test_transverse_gaussian_approx_width(self):
        prof = static_flow(FERMI, ell_ext=1.0, channel="transverse")
        assert prof.ell_flow_fitted == pytest.approx(
            math.sqrt(1.0 + 2.0 / 3.0), rel=1e-6)

    def test_profile_even_and_spreading(self):
        for mode_tag in ("gaussian-approx", "exact"):
            prof = static_flow(FERMI, ell_ext=2.0, mode_tag=mode_tag)
            v = prof.values
            mid = len(v) // 2
            n_half = min(mid, len(v) - mid - 1)
            left = v[mid - n_half:mid][::-1]
            right = v[mid + 1:mid + 1 + n_half]
            assert np.allclose(left, right,
                               atol=1e-12 * np.max(np.abs(v)))
            assert flow_width(prof) >= prof.ell_ext

    def test_amplitude_linearity(self):
        p1 = static_flow(FERMI, ell_ext=1.0, amplitude=1.0)
        p3 = static_flow(FERMI, ell_ext=1.0, amplitude=3.0)
        assert np.allclose(p3.values, 3.0 * p1.values, rtol=1e-12)
        assert p3.ell_flow_fitted == pytest.approx(p1.ell_flow_fitted,
                                                   rel=1e-12)

    def test_exact_mode_near_gaussian_formula(self):
        prof = static_flow(FERMI, ell_ext=2.0, mode_tag="exact")
        target = math.sqrt(4.0 + 1.0 / 3.0)
        assert abs(prof.ell_flow_fitted - target) / target < 0.15

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            static_flow(FERMI, ell_ext=-1.0)
        with pytest.raises(ValueError):
            static_flow(FERMI, ell_ext=1.0, channel="sideways")
        with pytest.raises(ResolutionError):
            static_flow(FERMI, ell_ext=0.05, n_grid=256)


class TestFlowWidth:
    def test_analytic_gaussian_self_consistency(self):
        x = np.linspace(-20.0, 20.0, 4001)
        prof = FlowProfile(x_axis=x, values=np.exp(-0.5 * (x / 1.5) ** 2),
                           channel="density", mode_tag="gaussian-approx",
                           ell_ext=1.0, ell_flow_fitted=0.0,
                           ell_flow_gauss_fit=0.0, gauss_fit_residual=0.0)
        assert flow_width(prof) == pytest.approx(1.5, abs=1e-6)

    def test_too_few_nodes(self):
        x = np.linspace(-1, 1, 8)
        prof = FlowProfile(x_axis=x, values=np.exp(-x * x),
                           channel="density", mode_tag="exact",
                           ell_ext=1.0, ell_flow_fitted=0.0,
                           ell_flow_gauss_fit=0.0, gauss_fit_residual=0.0)
        with pytest.raises(WidthUndefinedError):
            flow_width(prof)

    def test_oscillating_profile_rejected(self):
        x = np.linspace(-10, 10, 512)
        prof = FlowProfile(x_axis=x, values=np.sin(5.0 * x),
                           channel="density", mode_tag="exact",
                           ell_ext=1.0, ell_flow_fitted=0.0,
                           ell_flow_gauss_fit=0.0, gauss_fit_residual=0.0)
        with pytest.raises(WidthUndefinedError):
            flow_width(prof)

    def test_flat_top_methods_disagree_visibly(self):
        x = np.linspace(-10, 10, 1024)
        flat = np.where(np.abs(x) < 2.0, 1.0, 0.0)
        from ctpgas.hydro import _widths
        w_mom, w_fit, resid = _widths(x, flat)
        assert w_mom == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-2)
        assert abs(w_mom - w_fit) > 1e-3
        assert resid > 1e-3
