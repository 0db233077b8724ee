"""Phase function, its saddle points and the region classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np


class PoleError(ValueError):
    pass


class UnsupportedSigns(ValueError):
    pass


class BoundarySoliton(ValueError):
    def __init__(self, index: int, value: float):
        super().__init__(f"pole {index} sits on its trajectory: |Im theta| = {abs(value):.3e}")
        self.index = index
        self.value = value


class Case(str, Enum):
    FOUR_SADDLE = "FourSaddle"
    TWO_SADDLE = "TwoSaddle"
    NO_SADDLE = "NoSaddle"
    TRANSITION = "Transition"


# tie-break width around the double-root velocity
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("alpha and beta must be nonzero")

    @property
    def xi_star(self) -> float:
        """Velocity at which two saddle pairs merge (defined for alpha*beta > 0)."""
        if self.alpha * self.beta <= 0:
            raise ValueError("xi_star requires alpha*beta > 0")
        return -2.0 * math.sqrt(3.0 * self.alpha * self.beta)

    @property
    def k0(self) -> float:
        """Location of the merged saddle (alpha, beta > 0)."""
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("k0 requires alpha > 0 and beta > 0")
        return (self.beta / (48.0 * self.alpha)) ** 0.25

    def check_signs(self):
        if self.beta < 0:
            raise UnsupportedSigns(
                f"alpha={self.alpha}, beta={self.beta}: reduce to beta > 0 by reversing time")


def _nonzero(k):
    k = np.asarray(k, dtype=complex)
    if np.any(k == 0):
        raise PoleError("phase function has a pole at k = 0")
    return k


def theta(k, xi: float, p: PhysicalParams):
    """k*xi + 4 alpha k^3 - beta/(4k)."""
    k = _nonzero(k)
    out = k * xi + 4 * p.alpha * k ** 3 - p.beta / (4 * k)
    return out[()] if out.ndim == 0 else out


def theta_d1(k, xi: float, p: PhysicalParams):
    k = _nonzero(k)
    out = xi + 12 * p.alpha * k ** 2 + p.beta / (4 * k ** 2)
    return out[()] if out.ndim == 0 else out


def theta_d2(k, xi: float, p: PhysicalParams):
    k = _nonzero(k)
    out = 24 * p.alpha * k - p.beta / (2 * k ** 3)
    return out[()] if out.ndim == 0 else out


def im_theta(k, xi: float, p: PhysicalParams):
    """Imaginary part of theta from the real closed form (no complex arithmetic)."""
    k = _nonzero(k)
    a, b = k.real, k.imag
    r2 = a * a + b * b
    out = b * (xi + 12 * p.alpha * r2 - 16 * p.alpha * b * b + p.beta / (4 * r2))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SaddleSet:
    points: tuple[float, ...]
    eta: tuple[int, ...]
    case: Case
    xi: float
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def __len__(self):
        return len(self.points)

    @property
    def stationary_intervals(self) -> list[tuple[float, float]]:
        """Real intervals where the jump is factorised the 'other' way round.

        Four saddles: (k4, k3) and (k2, k1).  Two saddles: (-inf, k2) and
        (k1, inf).  Empty otherwise.
        """
        pts = self.points
        if self.case == Case.FOUR_SADDLE:
            return [(pts[3], pts[2]), (pts[1], pts[0])]
        if self.case == Case.TWO_SADDLE:
            return [(-math.inf, pts[1]), (pts[0], math.inf)]
        return []


def _quadratic_roots(xi: float, p: PhysicalParams) -> list[float]:
    """Real roots w of 48 alpha w^2 + 4 xi w + beta = 0, stably computed."""
    a, b, c = 48.0 * p.alpha, 4.0 * xi, p.beta
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    if disc == 0:
        return [-b / (2 * a)]
    qv = -0.5 * (b + math.copysign(sq, b)) if b != 0 else -0.5 * sq
    roots = [qv / a, c / qv]
    return sorted(roots)


def saddle_points(xi: float, p: PhysicalParams) -> SaddleSet:
    """Real roots of theta'(k) = 0, sorted descending, with orientation signs."""
    p.check_signs()
    if p.alpha > 0:
        if xi >= p.xi_star - BOUNDARY_TOL:
            # the double roots +-k0 at the boundary are degenerate (theta'' = 0)
            # and are not listed; k0 is available from the parameters
            case = Case.TRANSITION if abs(xi - p.xi_star) <= BOUNDARY_TOL else Case.NO_SADDLE
            return SaddleSet((), (), case, xi, p)
        ws = [w for w in _quadratic_roots(xi, p) if w > 0]
        ks = sorted([math.sqrt(w) for w in ws] + [-math.sqrt(w) for w in ws], reverse=True)
        eta = tuple((-1) ** (j + 1) for j in range(1, len(ks) + 1))
        return SaddleSet(tuple(ks), eta, Case.FOUR_SADDLE, xi, p)
    # alpha < 0 < beta: exactly one positive root w
    ws = [w for w in _quadratic_roots(xi, p) if w > 0]
    w = max(ws)
    k = math.sqrt(w)
    return SaddleSet((k, -k), (-1, 1), Case.TWO_SADDLE, xi, p)


def classify_region(y: float, t: float, p: PhysicalParams, C: float = 1.0) -> Case:
    if t <= 0 or C <= 0:
        raise ValueError("t and C must be positive")
    p.check_signs()
    xi = y / t
    if p.alpha < 0:
        return Case.TWO_SADDLE
    if abs(xi - p.xi_star) * t ** (2.0 / 3.0) <= C or abs(xi - p.xi_star) <= BOUNDARY_TOL:
        return Case.TRANSITION
    return Case.FOUR_SADDLE if xi < p.xi_star else Case.NO_SADDLE


def delta_pm(zs: Sequence[complex], xi: float, p: PhysicalParams,
             tol: float = 1e-12) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split pole indices by the sign of Im theta(z_n)."""
    minus, plus = [], []
    for n, z in enumerate(zs):
        v = float(im_theta(z, xi, p))
        if abs(v) < tol:
            raise BoundarySoliton(n, v)
        (minus if v < 0 else plus).append(n)
    return tuple(minus), tuple(plus)


def soliton_velocity(z: complex, p: PhysicalParams) -> float:
    """The xi at which Im theta(z) vanishes."""
    a, b = z.real, z.imag
    r2 = a * a + b * b
    return -(12 * p.alpha * r2 - 16 * p.alpha * b * b + p.beta / (4 * r2))
