import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wkisp.phase import (BoundarySoliton, Case, PhysicalParams, PoleError, UnsupportedSigns, classify_region,
                         delta_pm, im_theta, saddle_points, soliton_velocity, theta, theta_d1, theta_d2)

P = PhysicalParams(1.0, 1.0)


def test_theta_value():
    assert abs(theta(1.0, 0.0, P) - 3.75) < 1e-15


def test_theta_pole():
    with pytest.raises(PoleError):
        theta(0.0, 0.0, P)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-8, 2))
def test_theta_odd(x, y, xi):
    k = complex(x, y)
    if abs(k) < 1e-2:
        return
    assert abs(theta(-k, xi, P) + theta(k, xi, P)) < 1e-12 * max(1.0, abs(theta(k, xi, P)))


def test_derivatives_by_differences():
    k, xi, h = 0.7 + 0.2j, -4.0, 1e-5
    d1 = (theta(k + h, xi, P) - theta(k - h, xi, P)) / (2 * h)
    d2 = (theta(k + h, xi, P) - 2 * theta(k, xi, P) + theta(k - h, xi, P)) / h ** 2
    assert abs(d1 - theta_d1(k, xi, P)) < 1e-8
    assert abs(d2 - theta_d2(k, xi, P)) < 1e-4


def test_double_root_at_boundary():
    k0 = 48 ** -0.25
    assert abs(P.k0 - k0) < 1e-15
    assert abs(theta_d1(k0, P.xi_star, P)) < 1e-12
    assert abs(P.xi_star + 2 * math.sqrt(3)) < 1e-15


def test_theta_at_merged_saddle():
    assert abs(theta(P.k0, P.xi_star, P) + 4 * 3 ** -0.75) < 1e-12


def test_four_saddles():
    S = saddle_points(-4.0, P)
    assert S.case == Case.FOUR_SADDLE
    expect = [0.5, 1 / math.sqrt(12), -1 / math.sqrt(12), -0.5]
    assert np.max(np.abs(np.array(S.points) - expect)) < 1e-12
    assert S.eta == (1, -1, 1, -1)
    for k, e in zip(S.points, S.eta):
        assert abs(theta_d1(k, -4.0, P)) < 1e-10
        assert e * theta_d2(k, -4.0, P).real > 0
    assert S.stationary_intervals == [(S.points[3], S.points[2]), (S.points[1], S.points[0])]


def test_no_saddles():
    S = saddle_points(0.0, P)
    assert S.case == Case.NO_SADDLE and len(S) == 0


def test_two_saddles():
    S = saddle_points(0.0, PhysicalParams(-1.0, 1.0))
    k = 0.5 * 3 ** -0.25
    assert S.case == Case.TWO_SADDLE
    assert abs(S.points[0] - k) < 1e-12 and abs(S.points[1] + k) < 1e-12
    assert S.stationary_intervals == [(-math.inf, -S.points[0]), (S.points[0], math.inf)]


def test_unsupported_signs():
    with pytest.raises(UnsupportedSigns):
        saddle_points(0.0, PhysicalParams(1.0, -1.0))


@pytest.mark.parametrize("y,t,C,case", [
    (-4.0 * 100, 100.0, 1.0, Case.FOUR_SADDLE),
    (0.0, 10.0, 1.0, Case.NO_SADDLE),
    (-2 * math.sqrt(3) * 7.0, 7.0, 1.0, Case.TRANSITION),
    (-3.5 * 10, 10.0, 1.0, Case.TRANSITION),
])
def test_classify(y, t, C, case):
    assert classify_region(y, t, P, C) == case


def test_classify_two_saddle_any_xi():
    for xi in (-10.0, 0.0, 5.0):
        assert classify_region(xi, 1.0, PhysicalParams(-1.0, 1.0)) == Case.TWO_SADDLE


def test_im_theta_paths_agree():
    rng = np.random.default_rng(3)
    ks = rng.uniform(-2, 2, 100) + 1j * rng.uniform(-2, 2, 100)
    a = im_theta(ks, -2.5, P)
    b = np.imag(theta(ks, -2.5, P))
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))) < 1e-12
    assert np.max(np.abs(im_theta(np.conj(ks), -2.5, P) + a)) < 1e-12
    assert np.all(im_theta(ks.real, -2.5, P) == 0)


def test_delta_pm_mirror_pairs():
    zs = [0.3 + 0.4j, -0.3 + 0.4j, 0.6 + 0.2j, -0.6 + 0.2j]
    minus, plus = delta_pm(zs, -4.0, P)
    for a, b in ((0, 1), (2, 3)):
        assert (a in minus) == (b in minus)
    assert delta_pm([], -4.0, P) == ((), ())


def test_delta_pm_single_pole_sign():
    z = 0.3 + 0.4j
    minus, plus = delta_pm([z], -4.0, P)
    assert (minus == (0,)) == (im_theta(z, -4.0, P) < 0)


def test_soliton_velocity_zeroes_im_theta():
    for z in (0.3 + 0.4j, 0.6 + 0.2j, 0.5j):
        assert abs(im_theta(z, soliton_velocity(z, P), P)) < 1e-12
    with pytest.raises(BoundarySoliton):
        delta_pm([0.5j], soliton_velocity(0.5j, P), P)
