"""Scalar dressing functions: nu, delta, T and its expansion constants."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numerics import Interval, integrate_adaptive
from .phase import Case, SaddleSet
from .scattering import ScatteringData

QUAD_TOL = 1e-11
NEAR_CONTOUR = 1e-8


class NearContour(ValueError):
    pass


class InvalidInterval(ValueError):
    pass


def nu(r_at):
    """-(1/2pi) log(1 + |r|^2)."""
    out = -np.log1p(np.abs(np.asarray(r_at)) ** 2) / (2 * np.pi)
    return out[()] if np.ndim(out) == 0 else out


def clip_intervals(sd: ScatteringData, intervals: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Replace infinite ends by the edge of the tabulated k-range (r = 0 beyond it)."""
    lo, hi = float(sd.k_grid[0]), float(sd.k_grid[-1])
    out = []
    for a, b in intervals:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 < b2:
            out.append((a2, b2))
    return out


def _nu_fn(sd: ScatteringData):
    return lambda s: nu(sd.r_at(s))


def cauchy_integral(sd: ScatteringData, intervals, k: complex, tol: float = QUAD_TOL) -> complex:
    """Sum over intervals of the integral of nu(s)/(s - k) ds for k off the intervals."""
    k = complex(k)
    f_nu = _nu_fn(sd)
    total = 0j
    for a, b in clip_intervals(sd, intervals):
        if abs(k.imag) < NEAR_CONTOUR and a - NEAR_CONTOUR <= k.real <= b + NEAR_CONTOUR:
            raise NearContour(f"k={k} lies on the interval ({a}, {b})")
        kr = k.real
        if a < kr < b and abs(k.imag) < 0.5 * (b - a):
            # subtract the value at Re k so the remainder is bounded near the contour
            n0 = float(f_nu(kr))
            g = lambda s, n0=n0: (f_nu(s) - n0) / (s - k)
            total += integrate_adaptive(g, Interval(a, b), tol, breakpoints=(kr,))
            total += n0 * (cmath.log(b - k) - cmath.log(a - k))
        else:
            total += integrate_adaptive(lambda s: f_nu(s) / (s - k), Interval(a, b), tol)
    return total


def delta_eval(sd: ScatteringData, intervals, k: complex, tol: float = QUAD_TOL) -> complex:
    """exp(i * integral over I of nu(s)/(s-k))."""
    if sd.is_reflectionless or not intervals:
        return 1.0 + 0j
    return complex(np.exp(1j * cauchy_integral(sd, intervals, k, tol)))


def t_function(sd: ScatteringData, intervals, delta_minus: Sequence[int], k: complex,
               with_delta: bool = True) -> complex:
    """Product over Delta- of (k - conj z)/(k - z), times delta when requested."""
    k = complex(k)
    out = 1.0 + 0j
    for n in delta_minus:
        z = sd.discrete.z[n]
        out *= (k - z.conjugate()) / (k - z)
    if with_delta:
        out *= delta_eval(sd, intervals, k)
    return out


@dataclass
class DressingData:
    regime: str                         # "with-delta" or "without-delta"
    delta_minus: tuple
    T0: complex
    T1: complex
    intervals: list = field(default_factory=list)
    nu_saddles: dict = field(default_factory=dict)
    t0_saddles: dict = field(default_factory=dict)
    delta_at_poles: tuple = ()


def dressing_constants(sd: ScatteringData, regime: str, delta_minus: Sequence[int],
                       intervals=(), tol: float = QUAD_TOL) -> DressingData:
    if regime not in ("with-delta", "without-delta"):
        raise ValueError(f"unknown regime {regime!r}")
    zs = [sd.discrete.z[n] for n in delta_minus]
    T0 = complex(np.exp(-2j * sum(cmath.phase(z) for z in zs))) if zs else 1.0 + 0j
    pole_part = -sum(2 * z.imag / abs(z) ** 2 for z in zs)
    ivs = clip_intervals(sd, intervals) if regime == "with-delta" else []
    integral = 0.0
    if regime == "with-delta" and not sd.is_reflectionless:
        f_nu = _nu_fn(sd)
        for a, b in ivs:
            if a <= 0.0 <= b:
                raise InvalidInterval(f"0 lies in the stationary interval ({a}, {b})")
            integral += integrate_adaptive(lambda s: f_nu(s) / s ** 2, Interval(a, b), tol).real
    T1 = complex(integral + pole_part)
    dpoles = ()
    if regime == "with-delta":
        dpoles = tuple(delta_eval(sd, ivs, z) for z in sd.discrete.z)
    return DressingData(regime, tuple(delta_minus), T0, T1, ivs, delta_at_poles=dpoles)


def t0_local(sd: ScatteringData, saddles: SaddleSet, j: int, delta_minus: Sequence[int],
             intervals, tol: float = QUAD_TOL) -> complex:
    """Regularised T0(k_j, k_j) at the j-th saddle (0-based index).

    The log term uses the principal branch: log(1) = 0 for eta = +1 and
    log(-1) = i*pi for eta = -1.
    """
    kj = saddles.points[j]
    eta = saddles.eta[j]
    prod = 1.0 + 0j
    for n in delta_minus:
        z = sd.discrete.z[n]
        prod *= (kj - z.conjugate()) / (kj - z)
    if sd.is_reflectionless:
        return prod
    nuj = float(nu(sd.r_at(kj)))
    log_eta = 0.0 if eta == 1 else 1j * math.pi
    beta = -eta * nuj * log_eta
    f_nu = _nu_fn(sd)
    for a, b in clip_intervals(sd, intervals):
        # split at the window edges k_j -/+ 1 and at k_j itself
        cuts = sorted({a, b, *[c for c in (kj - 1.0, kj, kj + 1.0) if a < c < b]})
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            mid = 0.5 * (lo + hi)
            inside = abs(mid - kj) < 1.0
            if inside:
                g = lambda s: np.where(np.abs(s - kj) > 0, (f_nu(s) - nuj) / np.where(s == kj, 1.0, s - kj), 0.0)
            else:
                g = lambda s: f_nu(s) / (s - kj)
            beta += integrate_adaptive(g, Interval(lo, hi), tol)
    return complex(prod * np.exp(1j * beta))


def build_dressing(sd: ScatteringData, saddles: SaddleSet, delta_minus: Sequence[int]) -> DressingData:
    """Dressing data for the region of ``saddles``: with delta when saddles exist."""
    if saddles.case in (Case.FOUR_SADDLE, Case.TWO_SADDLE):
        ivs = saddles.stationary_intervals
        dd = dressing_constants(sd, "with-delta", delta_minus, ivs)
        for j, kj in enumerate(saddles.points):
            dd.nu_saddles[j] = float(nu(sd.r_at(kj)))
            dd.t0_saddles[j] = t0_local(sd, saddles, j, delta_minus, ivs)
        return dd
    return dressing_constants(sd, "without-delta", delta_minus)
