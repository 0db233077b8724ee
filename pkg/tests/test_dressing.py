import cmath
import math

import numpy as np
import pytest

from wkisp.dressing import (InvalidInterval, NearContour, delta_eval, dressing_constants, nu, t0_local,
                            t_function)
from wkisp.phase import Case, PhysicalParams, SaddleSet
from wkisp.scattering import DiscreteSpectrum, ScatteringData

P = PhysicalParams()
NU0 = -0.1


def constant_nu_data(discrete=DiscreteSpectrum()):
    # |r| fixed so that nu = NU0 everywhere on the grid
    kg = np.linspace(-6, 6, 241)
    r = np.full(kg.size, math.sqrt(math.exp(-2 * math.pi * NU0) - 1), dtype=complex)
    a = 1 / np.sqrt(1 + np.abs(r) ** 2)
    return ScatteringData(kg, a, r * a, r, 0.0, discrete, P, {"L": None, "n": kg.size})


def test_nu_values():
    assert abs(nu(1.0) + math.log(2) / (2 * math.pi)) < 1e-15
    assert nu(0.0) == 0.0
    assert abs(nu(constant_nu_data().r[0]) - NU0) < 1e-14


@pytest.mark.parametrize("k", [3j, 0.5 + 0.5j, 4.0, -2 - 1j])
def test_delta_constant_nu_closed_form(k):
    sd = constant_nu_data()
    exact = cmath.exp(1j * NU0 * (cmath.log(2 - k) - cmath.log(1 - k)))
    assert abs(delta_eval(sd, [(1.0, 2.0)], k) - exact) < 1e-10


def test_delta_unimodular_off_interval_on_axis():
    assert abs(abs(delta_eval(constant_nu_data(), [(1.0, 2.0)], 5.0)) - 1) < 1e-12


def test_delta_near_contour():
    with pytest.raises(NearContour):
        delta_eval(constant_nu_data(), [(1.0, 2.0)], 1.5 + 1e-10j)


def test_delta_reflectionless_is_one():
    sd = ScatteringData.reflectionless(DiscreteSpectrum(), P)
    assert delta_eval(sd, [(1.0, 2.0)], 0.3j) == 1


def test_pole_constants():
    sd = ScatteringData.reflectionless(DiscreteSpectrum((1j,), (1.0,)), P)
    dd = dressing_constants(sd, "without-delta", (0,))
    assert abs(dd.T0 + 1) < 1e-14 and abs(dd.T1 + 2) < 1e-14


def test_t_expansion_matches_constants():
    # symmetric intervals: T(k) = T0 (1 + i T1 k + O(k^2)) near k = 0
    disc = DiscreteSpectrum.from_generators([0.3 + 0.4j], [1.0])
    sd = constant_nu_data(disc)
    ivs = [(1.0, 2.0), (-2.0, -1.0)]
    dd = dressing_constants(sd, "with-delta", (0, 1), ivs)
    h = 1e-5
    tp, tm = t_function(sd, ivs, (0, 1), 1j * h), t_function(sd, ivs, (0, 1), -1j * h)
    T0 = 0.5 * (tp + tm)
    T1 = (tp - tm) / (2j * h) / T0 / 1j
    assert abs(T0 - dd.T0) < 1e-7 and abs(T1 - dd.T1) < 1e-6


def test_with_delta_constant_nu():
    dd = dressing_constants(constant_nu_data(), "with-delta", (), [(1.0, 2.0)])
    assert abs(dd.T1 - NU0 * 0.5) < 1e-12 and dd.T0 == 1


def test_zero_inside_interval_rejected():
    with pytest.raises(InvalidInterval):
        dressing_constants(constant_nu_data(), "with-delta", (), [(-1.0, 1.0)])
    with pytest.raises(ValueError):
        dressing_constants(constant_nu_data(), "bogus", ())


@pytest.mark.parametrize("eta,log_eta", [(1, 0.0), (-1, 1j * math.pi)])
def test_t0_local_constant_nu(eta, log_eta):
    # constant nu: the regularised integral is nu0 log((b - k)/(k - a)) with the window inside (a, b)
    sd = constant_nu_data()
    sad = SaddleSet((2.5,), (eta,), Case.FOUR_SADDLE, -4.0, P)
    got = t0_local(sd, sad, 0, (), [(1.0, 5.0)])
    beta = NU0 * math.log(2.5 / 1.5) - eta * NU0 * log_eta
    assert abs(got - cmath.exp(1j * beta)) < 1e-10


def test_t0_local_reflectionless():
    sd = ScatteringData.reflectionless(DiscreteSpectrum(), P)
    sad = SaddleSet((0.5,), (1,), Case.FOUR_SADDLE, -4.0, P)
    assert t0_local(sd, sad, 0, (), [(0.3, 0.5)]) == 1


def test_t0_local_tolerance_stable():
    from wkisp.phase import saddle_points
    from wkisp.scattering import gaussian_profile, scatter
    sd = scatter(gaussian_profile(), np.linspace(-3, 3, 241))
    sad = saddle_points(-4.0, P)
    ivs = sad.stationary_intervals
    a = t0_local(sd, sad, 0, (), ivs, tol=1e-10)
    b = t0_local(sd, sad, 0, (), ivs, tol=5e-11)
    assert abs(a - b) < 1e-9
