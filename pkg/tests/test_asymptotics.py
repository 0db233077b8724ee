import math

import numpy as np
import pytest
from scipy.integrate import quad

from wkisp.asymptotics import (CSV_HEADER, RegionMismatch, eval_auto, eval_region_nosaddle,
                               eval_region_saddles, eval_transition, samples_sidecar, samples_to_csv)
from wkisp.dressing import nu
from wkisp.localmodels import PIIRange
from wkisp.phase import Case, PhysicalParams, saddle_points, theta, theta_d2
from wkisp.scattering import DiscreteSpectrum, ScatteringData, gaussian_profile, scatter
from wkisp.soliton import reconstruct, solve_reflectionless

P = PhysicalParams()
SMALL = 0.01


@pytest.fixture(scope="module")
def small_sd():
    return scatter(gaussian_profile(SMALL), np.linspace(-5, 5, 801))


@pytest.fixture(scope="module")
def gauss_sd():
    return scatter(gaussian_profile(), np.linspace(-5, 5, 801))


def with_solitons(sd, zs, cs):
    return ScatteringData(sd.k_grid, sd.a, sd.b, sd.r, sd.c_scalar, DiscreteSpectrum.from_generators(zs, cs),
                          sd.params, sd.truncation)


def point_at_s(s, t):
    tau = 12 * P.alpha * t
    return (P.xi_star + 12 * P.alpha * s * tau ** (-2 / 3)) * t


def stationary_phase_linear(sd, xi, t):
    # small data: u = (1/2pi) int uhat(kappa) e^{i(kappa y - t omega)} with r(k) = -2k^2 uhat(2k)
    total = 0j
    for kj in saddle_points(xi, P).points:
        th2 = float(np.real(theta_d2(kj, xi, P)))
        th = float(np.real(theta(kj, xi, P)))
        amp = -sd.r_at(kj) / (2 * math.pi * kj ** 2) * math.sqrt(math.pi / (t * abs(th2)))
        total += amp * np.exp(2j * t * th + 1j * np.sign(th2) * math.pi / 4)
    return total


def exact_linear(y, t):
    uhat = lambda kap: SMALL * math.sqrt(math.pi) * math.exp(-kap ** 2 / 4)
    ph = lambda k: k * y - t * (P.beta / k - P.alpha * k ** 3)
    cuts = np.linspace(0.02, 8, 801)
    f = lambda k: uhat(k) * math.cos(ph(k))
    return sum(quad(f, a, b, limit=2000, epsabs=1e-14)[0] for a, b in zip(cuts[:-1], cuts[1:])) / math.pi


@pytest.mark.parametrize("t", [100.0, 137.0])
def test_saddle_correction_matches_linear_limit(small_sd, t):
    smp = eval_region_saddles(small_sd, -4.0 * t, t)
    lin = stationary_phase_linear(small_sd, -4.0, t)
    assert abs(lin.imag) < 1e-12
    assert abs(smp.u - lin.real) < 1e-3 * abs(lin.real)


@pytest.mark.parametrize("t,s", [(160.0, -1.0), (160.0, 0.5), (640.0, -1.0)])
def test_transition_matches_linear_limit(small_sd, t, s):
    y = point_at_s(s, t)
    smp = eval_transition(small_sd, y, t, C=3.0)
    assert abs(smp.u / exact_linear(y, t) - 1) < 5e-2


def test_saddle_region_real_with_solitons(gauss_sd):
    sd = with_solitons(gauss_sd, [0.6 + 0.2j], [1.0])
    for t in (10.0, 30.0):
        smp = eval_region_saddles(sd, -4.5 * t, t, harmonize=True)
        assert smp.region == Case.FOUR_SADDLE
        assert abs(smp.correction_u.imag) < 1e-10
        assert abs(smp.diagnostics["u_literal_amplitudes"].imag) > 1e-6


def test_envelope_scaling(gauss_sd):
    env = [eval_region_saddles(gauss_sd, -4.0 * t, t).envelope * math.sqrt(t) for t in (25.0, 100.0, 400.0)]
    assert max(env) - min(env) < 1e-6 * max(env)


def test_transition_scaling(gauss_sd):
    a = eval_transition(gauss_sd, point_at_s(-1.0, 10.0), 10.0, C=3.0)
    b = eval_transition(gauss_sd, point_at_s(-1.0, 80.0), 80.0, C=3.0)
    assert abs(b.envelope / a.envelope - 0.5) < 5e-2


def test_transition_airy_decay(gauss_sd):
    y = point_at_s(8.0, 50.0)
    smp = eval_transition(gauss_sd, y, 50.0, C=50.0)
    assert abs(smp.correction_u) < 1e-6
    with pytest.raises(PIIRange):
        eval_transition(gauss_sd, point_at_s(9.0, 50.0), 50.0, C=50.0)


def test_reflectionless_exact():
    disc = DiscreteSpectrum.from_generators([0.3 + 0.4j, -0.2 + 0.6j], [1.0, 1.0])
    sd = ScatteringData.reflectionless(disc, P)
    for y, t in ((-20.0, 4.0), (5.0, 3.0), (point_at_s(0.5, 6.0), 6.0)):
        smp = eval_auto(sd, y, t, C=1.0)
        u_exact = reconstruct(solve_reflectionless(disc, y, t, P))[0]
        assert abs(smp.u - u_exact) < 1e-12


def test_zero_data_no_saddle():
    sd = ScatteringData.reflectionless(DiscreteSpectrum(), P)
    smp = eval_region_nosaddle(sd, 3.0, 2.0)
    assert smp.u == 0 and smp.x == 3.0 and smp.diagnostics.get("shift_omitted")


def test_reflectionless_saddle_shift_reported_only():
    sd = ScatteringData.reflectionless(DiscreteSpectrum.from_generators([0.5j], [1j]), P)
    smp = eval_region_saddles(sd, -40.0, 10.0)
    u, cplus = reconstruct(solve_reflectionless(sd.discrete, -40.0, 10.0, P))
    assert smp.u == u and abs(smp.x - (-40.0 + cplus)) < 1e-12
    assert "shift_reported_only" in smp.diagnostics


@pytest.mark.parametrize("fn,y,t", [(eval_region_saddles, 0.0, 10.0), (eval_region_nosaddle, -40.0, 10.0),
                                    (eval_transition, 0.0, 10.0)])
def test_region_mismatch(gauss_sd, fn, y, t):
    with pytest.raises(RegionMismatch):
        fn(gauss_sd, y, t)


def test_trace_identity(gauss_sd):
    # integral over the line of nu / s^2 is minus the conserved excess; |k| > 5 adds about 8e-8
    f = lambda s: float(nu(gauss_sd.r_at(s))) / s ** 2 if s != 0 else 0.0
    total = quad(f, -5, 0, limit=400, epsabs=1e-14)[0] + quad(f, 0, 5, limit=400, epsabs=1e-14)[0]
    assert abs(total + gauss_sd.c_scalar) < 2e-7


def test_dispatch(gauss_sd):
    assert eval_auto(gauss_sd, -400.0, 100.0).region == Case.FOUR_SADDLE
    assert eval_auto(gauss_sd, 0.0, 100.0).region == Case.NO_SADDLE
    assert eval_auto(gauss_sd, P.xi_star * 100.0, 100.0).region == Case.TRANSITION


def test_csv_and_sidecar(gauss_sd):
    smps = [eval_auto(gauss_sd, y, 20.0, harmonize=True) for y in (-100.0, P.xi_star * 20.0, 10.0)]
    text = samples_to_csv(smps)
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 4
    import json
    doc = json.loads(samples_sidecar(smps, {"C": 1.0}))
    assert [d["region"] for d in doc["samples"]] == [s.region.value for s in smps]
