import numpy as np
import pytest

from wkisp.phase import PhysicalParams
from wkisp.scattering import (DiscreteSpectrum, InterpolationRange, ScatteringData, a_continued, b_at_zero,
                              gaussian_profile, jost_columns, scatter, small_k_check, tabulated_profile,
                              zero_profile)

# scipy.integrate.quad oracles for u0 = 0.5 exp(-x^2)
GAUSS_EXCESS = 0.15182891315524194          # integral of sqrt(1 + ux^2) - 1
GAUSS_BORN = 0.1044973404511167              # half the integral of g^2 in arclength


@pytest.fixture(scope="module")
def gauss_sd():
    return scatter(gaussian_profile(), np.linspace(-5, 5, 801))


def test_zero_profile_trivial():
    sd = scatter(zero_profile(), np.linspace(-3, 3, 31))
    assert np.max(np.abs(sd.a - 1)) < 1e-14 and np.max(np.abs(sd.b)) < 1e-14
    assert sd.is_reflectionless
    assert abs(a_continued(zero_profile(), 0.3 + 0.7j) - 1) < 1e-14
    assert small_k_check(zero_profile()) < 1e-14


def test_zero_profile_identity_columns():
    cols = jost_columns(zero_profile(), np.array([0.4, -1.0 + 0.2j]), all_columns=True)
    assert np.allclose(cols.plus1, [[1, 1], [0, 0]], atol=1e-14)
    assert np.allclose(cols.minus2, [[0, 0], [1, 1]], atol=1e-14)


def test_unitarity(gauss_sd):
    assert gauss_sd.unitarity_residual() < 1e-6


def test_excess_integral_against_quad(gauss_sd):
    assert abs(gauss_sd.c_scalar - GAUSS_EXCESS) < 1e-12


def test_jost_determinant_and_symmetry():
    prof = gaussian_profile()
    k = np.array([0.3, 1.7, -2.2])
    cp = jost_columns(prof, k, all_columns=True)
    cm = jost_columns(prof, -k, all_columns=True)
    det = cp.plus1[0] * cp.plus2[1] - cp.plus1[1] * cp.plus2[0]
    assert np.max(np.abs(det - 1)) < 1e-10
    # mu(-k) = sigma2 mu(k) sigma2: first column at -k is (mu22, -mu12) at k
    assert np.max(np.abs(cm.plus1[0] - cp.plus2[1])) < 1e-10
    assert np.max(np.abs(cm.plus1[1] + cp.plus2[0])) < 1e-10


def test_a_mirror_symmetry():
    prof = gaussian_profile()
    k = np.array([0.4 + 0.3j, -1.3 + 0.9j, 2.0 + 0.05j])
    assert np.max(np.abs(a_continued(prof, -np.conj(k)) - np.conj(a_continued(prof, k)))) < 1e-10


def test_r_mirror_symmetry(gauss_sd):
    r = gauss_sd.r
    assert np.max(np.abs(r[::-1] - np.conj(r))) < 1e-10


def test_small_k_law():
    prof = gaussian_profile()
    r1, r2 = small_k_check(prof, 1e-3), small_k_check(prof, 5e-4)
    assert r1 < 1e-5
    assert 3.5 < r1 / r2 < 4.5


def test_large_k_born_law():
    # a - 1 ~ (1/2k) * integral of g^2: |a(10+i) - 1| is about 1e-2, not below 1e-3
    prof = gaussian_profile()
    ks = np.array([10 + 1j, 80 + 1j])
    dev = np.abs(a_continued(prof, ks) - 1)
    assert dev[0] > 1e-3
    assert abs(dev[1] * abs(ks[1]) / GAUSS_BORN - 1) < 2e-3
    assert abs(dev[0] * abs(ks[0]) / GAUSS_BORN - 1) < 2e-2


def test_linear_limit_reflection():
    # small data: r(k) = -2 k^2 uhat(2k) with uhat the Fourier transform of u0
    A = 1e-3
    sd = scatter(gaussian_profile(A), np.array([-1.0, 0.3, 1.5]))
    uhat = A * np.sqrt(np.pi) * np.exp(-sd.k_grid ** 2)
    assert np.max(np.abs(sd.r / (-2 * sd.k_grid ** 2 * uhat) - 1)) < 1e-4


def test_tabulated_matches_analytic():
    x = np.linspace(-8, 8, 3201)
    tab = tabulated_profile(x, 0.5 * np.exp(-x ** 2), L=8.0)
    k = np.linspace(-2, 2, 9)
    ra = scatter(gaussian_profile(L=8.0), k).r
    rt = scatter(tab, k).r
    assert np.max(np.abs(ra - rt)) < 1e-6


def test_r_at_range(gauss_sd):
    with pytest.raises(InterpolationRange):
        gauss_sd.r_at(6.0)
    assert abs(gauss_sd.r_at(gauss_sd.k_grid[123]) - gauss_sd.r[123]) < 1e-14


def test_serialization_roundtrip(gauss_sd):
    sd = ScatteringData(gauss_sd.k_grid, gauss_sd.a, gauss_sd.b, gauss_sd.r, gauss_sd.c_scalar,
                        DiscreteSpectrum.from_generators([0.3 + 0.4j], [1.0]), PhysicalParams(1.0, 2.0),
                        gauss_sd.truncation)
    text = sd.to_json()
    back = ScatteringData.from_json(text)
    assert back.to_json() == text
    assert np.array_equal(back.r, sd.r) and back.discrete == sd.discrete and back.params == sd.params


def test_from_generators():
    d = DiscreteSpectrum.from_generators([0.3 + 0.4j, 0.5j], [1 + 1j, 2j])
    assert d.z == (0.3 + 0.4j, -0.3 + 0.4j, 0.5j)
    assert d.c == (1 + 1j, -1 + 1j, 2j)
    assert d.is_symmetric()
    with pytest.raises(ValueError):
        DiscreteSpectrum.from_generators([0.5j], [1.0])
    with pytest.raises(ValueError):
        DiscreteSpectrum((0.3 - 0.1j,), (1.0,))


def test_b_at_zero_consistent_for_soliton():
    from wkisp.soliton import soliton_profile
    disc = DiscreteSpectrum.from_generators([0.5j], [1j])
    prof = soliton_profile(disc, PhysicalParams(), L=25.0, h=0.01)
    b, agree = b_at_zero(prof, 0.5j)
    assert agree < 1e-6
