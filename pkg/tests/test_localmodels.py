import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.special import airy as sp_airy

from wkisp.dressing import build_dressing
from wkisp.localmodels import (NonGlobalSolution, PIIRange, e_hats, n1_matrices, painleve2, pc_coefficients,
                               pii_residuals, saddle_amplitudes, scaled_variables)
from wkisp.phase import PhysicalParams, delta_pm, saddle_points
from wkisp.scattering import DiscreteSpectrum, gaussian_profile, scatter
from wkisp.soliton import MOut

P = PhysicalParams()


@pytest.fixture(scope="module")
def gauss_sd():
    return scatter(gaussian_profile(), np.linspace(-3, 3, 241))


@pytest.mark.parametrize("r0", [1.0, 0.3 - 0.4j, 2.0j, 0.05])
def test_pc_coefficient_identities(r0):
    b12, b21, v = pc_coefficients(r0)
    assert abs(b12 * b21 - v) < 1e-13
    assert abs(abs(b12) ** 2 + v) < 1e-13
    assert abs(b21 + np.conj(b12)) < 1e-13


def test_pc_unit_datum():
    b12, _, v = pc_coefficients(1.0)
    assert abs(v + math.log(2) / (2 * math.pi)) < 1e-15
    assert abs(abs(b12) - 0.3321412351339801) < 1e-14   # sqrt(log 2 / 2 pi)
    assert pc_coefficients(0) == (0j, 0j, 0.0)


def _four_saddle_setup(sd, xi, t):
    sad = saddle_points(xi, P)
    minus, _ = delta_pm(sd.discrete.z, xi, P)
    return sad, build_dressing(sd, sad, minus), minus


def test_amplitudes_unimodular_drift(gauss_sd):
    sad, dress, _ = _four_saddle_setup(gauss_sd, -4.0, 10.0)
    a = saddle_amplitudes(gauss_sd, sad, dress, -40.0, 10.0)
    b = saddle_amplitudes(gauss_sd, sad, dress, -160.0, 40.0)
    for sa, sb in zip(a.saddles, b.saddles):
        assert abs(abs(sa.r_j) - abs(sb.r_j)) < 1e-12
        assert abs(abs(sa.A[0, 1] * sa.A[1, 0]) - abs(sa.nu)) < 1e-12
        assert sa.nu < 0


def test_mirror_saddles_share_amplitude(gauss_sd):
    sad, dress, _ = _four_saddle_setup(gauss_sd, -4.0, 10.0)
    pc = saddle_amplitudes(gauss_sd, sad, dress, -40.0, 10.0)
    amps = {round(s.k, 12): s.r_j for s in pc.saddles}
    for s in pc.saddles:
        assert amps[round(-s.k, 12)] == s.r_j


def test_e_hats_traceless(gauss_sd):
    sad, dress, minus = _four_saddle_setup(gauss_sd, -4.0, 10.0)
    pc = saddle_amplitudes(gauss_sd, sad, dress, -40.0, 10.0)
    E0, E1 = e_hats(pc, MOut(gauss_sd.discrete, -40.0, 10.0, P, minus))
    assert abs(np.trace(E0)) < 1e-12 and abs(np.trace(E1)) < 1e-12


def test_nonpositive_time(gauss_sd):
    sad, dress, _ = _four_saddle_setup(gauss_sd, -4.0, 10.0)
    with pytest.raises(ValueError):
        saddle_amplitudes(gauss_sd, sad, dress, 0.0, 0.0)


@pytest.mark.parametrize("kappa", [0.2, 0.7, 1.0, 1.8])
def test_painleve_against_solve_ivp(kappa):
    sol = painleve2(kappa, s_min=-6.0)
    ai, aip, _, _ = sp_airy(8.0)
    y0 = [kappa * ai, kappa * aip, kappa ** 2 * (aip ** 2 - 8.0 * ai ** 2)]
    ref = solve_ivp(lambda s, Y: [Y[1], -2 * Y[0] ** 3 + s * Y[0], -Y[0] ** 2], (8.0, -6.0), y0,
                    method="DOP853", rtol=1e-13, atol=1e-15, dense_output=True)
    for s in (-6.0, -2.5, 0.0, 3.0):
        P_ref, _, Q_ref = ref.sol(s)
        got = sol.at(s)
        assert abs(got[0] - P_ref) < 1e-8 and abs(got[1] - Q_ref) < 1e-8


@pytest.mark.parametrize("kappa", [0.3, 1.0])
def test_painleve_residuals_and_rk4_agreement(kappa):
    sol = painleve2(kappa)
    r_ode, r_q = pii_residuals(sol)
    assert r_ode < 1e-8 and r_q < 1e-8
    alt = painleve2(kappa, method="rk4")
    assert np.max(np.abs(sol.P - alt.P)) < 1e-8


def test_painleve_small_kappa_is_airy():
    kappa = 1e-6
    sol = painleve2(kappa)
    s = np.array([-5.0, -1.0, 0.0, 2.0])
    assert np.max(np.abs(np.array([sol.at(v)[0] for v in s]) - kappa * sp_airy(s)[0])) < 1e-15


def test_painleve_zero_and_range():
    sol = painleve2(0.0)
    assert sol.at(-3.0) == (0.0, 0.0)
    with pytest.raises(PIIRange):
        painleve2(0.5).at(-7.0)
    with pytest.raises(ValueError):
        painleve2(-0.1)
    with pytest.raises(ValueError):
        painleve2(0.5, s_max=5.0)


def test_painleve_csv_header():
    text = painleve2(0.4, s_min=-1.0).to_csv()
    assert text.startswith("# kappa=0.4\ns,P,Q\n")


def test_n1_traceless():
    Np, Nm = n1_matrices(0.3, -0.2, 1.1)
    assert abs(np.trace(Np)) < 1e-15 and abs(np.trace(Nm)) < 1e-15


def test_scaled_variables_at_boundary():
    tau, s = scaled_variables(P.xi_star * 10.0, 10.0, P)
    assert abs(tau - 120.0) < 1e-12 and abs(s) < 1e-12


@pytest.mark.parametrize("kappa", [0.4, 0.9])
def test_painleve_airy_tail(kappa):
    sol = painleve2(kappa)
    s = np.linspace(6.0, 8.0, 21)
    Pv = np.array([sol.at(v)[0] for v in s])
    ai = sp_airy(s)[0]
    assert np.max(np.abs(Pv / (kappa * ai) - 1)) < 1e-4
    assert np.all(np.abs(Pv) <= 1.01 * kappa * ai)
