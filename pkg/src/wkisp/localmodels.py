"""Exactly solvable local models.

Parabolic-cylinder coefficients at simple saddles and the resulting
t^(-1/2) correction matrices; the real Painleve II transcendent with
Airy-type decay and the t^(-1/3) correction matrices at merged saddles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .dressing import DressingData, nu
from .numerics import airy, gamma_complex, ode_solve, rk4_fixed
from .phase import PhysicalParams, SaddleSet, theta, theta_d2
from .scattering import ScatteringData

SQRT2PI = math.sqrt(2.0 * math.pi)
PII_S0 = 8.0
PII_TOL = 1e-13
BLOWUP = 1e6


class NonGlobalSolution(ValueError):
    pass


class PIIRange(ValueError):
    pass


# ---------------------------------------------------------------------------
# Parabolic cylinder model


def pc_coefficients(r0: complex) -> tuple[complex, complex, float]:
    """(beta12, beta21, nu) of the parabolic-cylinder model for datum r0."""
    r0 = complex(r0)
    if r0 == 0:
        return 0j, 0j, 0.0
    v = float(nu(r0))
    b12 = SQRT2PI * cmath.exp(-1j * math.pi / 4 - math.pi * v / 2) / (r0.conjugate() * gamma_complex(1j * v))
    b21 = -SQRT2PI * cmath.exp(1j * math.pi / 4 - math.pi * v / 2) / (r0 * gamma_complex(-1j * v))
    return b12, b21, v


@dataclass
class SaddleLocal:
    k: float
    eta: int
    r_j: complex
    nu: float
    beta12: complex
    beta21: complex
    A: np.ndarray
    theta2: float


@dataclass
class PCData:
    saddles: list = field(default_factory=list)


def _mirror_index(saddles: SaddleSet, j: int) -> int:
    kj = saddles.points[j]
    for i, k in enumerate(saddles.points):
        if abs(k + kj) < 1e-12 * max(1.0, abs(kj)) and saddles.eta[i] == -saddles.eta[j]:
            return i
    raise ValueError(f"saddle {kj} has no mirror partner")


def _amplitude(sd: ScatteringData, saddles: SaddleSet, dressing: DressingData, j: int, t: float,
               literal: bool) -> tuple[complex, float]:
    p, xi = saddles.params, saddles.xi
    kj, eta = saddles.points[j], saddles.eta[j]
    th2 = float(np.real(theta_d2(kj, xi, p)))
    if eta * th2 <= 0:
        raise ValueError(f"saddle {kj}: eta*theta'' = {eta * th2} is not positive")
    rk = complex(sd.r_at(kj))
    T0j = dressing.t0_saddles[j]
    phase = cmath.exp(2j * t * complex(theta(kj, xi, p)).real) * \
        cmath.exp(1j * eta * float(nu(rk)) * math.log(2 * eta * t * th2))
    if eta == 1:
        return rk * T0j ** -2 * phase, th2
    if literal:
        return -rk.conjugate() / (1 + abs(rk) ** 2) * T0j ** 2 * phase, th2
    # the k -> -k symmetry of the problem maps this model onto its mirror's
    return _amplitude(sd, saddles, dressing, _mirror_index(saddles, j), t, literal)[0], th2


def saddle_amplitudes(sd: ScatteringData, saddles: SaddleSet, dressing: DressingData,
                      y: float, t: float, literal: bool = False) -> PCData:
    """Parabolic-cylinder data at every saddle.

    eta = -1 saddles take the amplitude of their eta = +1 mirror -k_j, which
    keeps the assembled correction real; ``literal=True`` uses the direct
    conjugate formula instead (complex-valued u, kept for comparison).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    out = PCData()
    for j, (kj, eta) in enumerate(zip(saddles.points, saddles.eta)):
        rj, th2 = _amplitude(sd, saddles, dressing, j, t, literal)
        b12, b21, vj = pc_coefficients(rj)
        if eta == 1:
            A = np.array([[0, -b12], [b21, 0]], dtype=complex)
        else:
            A = np.array([[0, b21], [-b12, 0]], dtype=complex)
        out.saddles.append(SaddleLocal(kj, eta, rj, vj, b12, b21, A, th2))
    return out


def e_hat_terms(pc: PCData, mout) -> tuple[list, list]:
    """Per-saddle contributions to E0 and E1 (their sums are the matrices)."""
    e0, e1 = [], []
    for s in pc.saddles:
        M = mout(s.k)
        Minv = mout.inverse(s.k)
        core = M @ s.A @ Minv
        pref = 1j / math.sqrt(2 * s.eta * s.theta2)
        e0.append(pref / s.k * core)
        e1.append(pref / s.k ** 2 * core)
    return e0, e1


def e_hats(pc: PCData, mout) -> tuple[np.ndarray, np.ndarray]:
    e0, e1 = e_hat_terms(pc, mout)
    z = np.zeros((2, 2), dtype=complex)
    return sum(e0, z), sum(e1, z)


# ---------------------------------------------------------------------------
# Painleve II


def _pii_rhs(s, Y):
    P, dP, _ = Y
    return np.array([dP, -2.0 * P ** 3 + s * P, -P * P])


def _airy_data(kappa: float, s0: float) -> np.ndarray:
    ai, aip = airy(s0)
    return np.array([kappa * ai, kappa * aip, kappa ** 2 * (aip * aip - s0 * ai * ai)])


@dataclass
class PIISolution:
    kappa: float
    s_grid: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    dP: np.ndarray
    method: str = "dopri54"

    def __post_init__(self):
        self._P = CubicHermiteSpline(self.s_grid, self.P, self.dP)
        self._Q = CubicHermiteSpline(self.s_grid, self.Q, -self.P ** 2)

    def at(self, s: float) -> tuple[float, float]:
        if not (self.s_grid[0] - 1e-12 <= s <= self.s_grid[-1] + 1e-12):
            raise PIIRange(f"s={s} outside the tabulated range [{self.s_grid[0]}, {self.s_grid[-1]}]")
        if self.kappa == 0:
            return 0.0, 0.0
        return float(self._P(s)), float(self._Q(s))

    def to_csv(self) -> str:
        lines = [f"# kappa={self.kappa!r}", "s,P,Q"]
        for row in zip(self.s_grid, self.P, self.Q):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


def painleve2(kappa: float, s_min: float = -6.0, s_max: float = PII_S0, h: float = 0.01,
              method: str = "dopri54") -> PIISolution:
    """Real solution of P'' = -2P^3 + sP with P ~ kappa Ai(s) as s -> +inf.

    Integrated backwards from s_max with Airy data; Q = int_s^inf P^2 is
    carried along with its Airy tail.  ``method="rk4"`` uses the fixed-step
    classical scheme at half the grid spacing (the independent check).
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if s_max < 8.0 - 1e-12:
        raise ValueError("s_max must be at least 8 (Airy regime)")
    n = int(round((s_max - s_min) / h))
    grid = s_max - h * np.arange(n + 1)          # descending
    if kappa == 0:
        z = np.zeros(n + 1)
        return PIISolution(0.0, grid[::-1].copy(), z, z.copy(), z.copy(), method)
    Y0 = _airy_data(kappa, s_max)

    def guarded(s, Y):
        if abs(Y[0]) > BLOWUP:
            raise NonGlobalSolution(f"|P| exceeded {BLOWUP:g} near s={s:.4g} (kappa={kappa})")
        return _pii_rhs(s, Y)

    if method == "dopri54":
        Ys = ode_solve(guarded, s_max, s_min, Y0, tol=PII_TOL, x_eval=grid, h_max=h)
    elif method == "rk4":
        Ys = rk4_fixed(guarded, s_max, s_min, Y0, 2 * n, x_eval=grid)
    else:
        raise ValueError(f"unknown method {method!r}")
    Ys = Ys[::-1]
    return PIISolution(float(kappa), grid[::-1].copy(), Ys[:, 0], Ys[:, 2], Ys[:, 1], method)


_FD6 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_FD6_D1 = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])


def pii_residuals(sol: PIISolution) -> tuple[float, float]:
    """Max |P'' + 2P^3 - sP| and max |Q' + P^2| by sixth-order differences."""
    h = sol.s_grid[1] - sol.s_grid[0]
    P, Q, s = sol.P, sol.Q, sol.s_grid
    d2 = np.convolve(P, _FD6[::-1], mode="valid") / h ** 2
    d1 = np.convolve(Q, _FD6_D1[::-1], mode="valid") / h
    inner = slice(3, len(s) - 3)
    r_ode = d2 + 2 * P[inner] ** 3 - s[inner] * P[inner]
    r_q = d1 + P[inner] ** 2
    return float(np.max(np.abs(r_ode))), float(np.max(np.abs(r_q)))


_PII_CACHE: dict = {}


def painleve2_cached(kappa: float, s_min: float = -6.0, s_max: float = PII_S0) -> PIISolution:
    key = (float(kappa), float(s_min), float(s_max))
    sol = _PII_CACHE.get(key)
    if sol is None:
        sol = painleve2(kappa, s_min, s_max)
        _PII_CACHE[key] = sol
    return sol


# ---------------------------------------------------------------------------
# Transition matrices


def scaled_variables(y: float, t: float, p: PhysicalParams) -> tuple[float, float]:
    """(tau, s) = (12 alpha t, (xi - xi_star) tau^(2/3) / (12 alpha))."""
    tau = 12.0 * p.alpha * t
    s = (y / t - p.xi_star) * tau ** (2.0 / 3.0) / (12.0 * p.alpha)
    return tau, s


def phi0(sd: ScatteringData, y: float, t: float, p: PhysicalParams, delta_minus) -> float:
    tau, s = scaled_variables(y, t, p)
    k0 = p.k0
    val = 2 * complex(theta(k0, p.xi_star, p)).real * t + 2 * k0 * s * tau ** (1.0 / 3.0)
    rk0 = complex(sd.r_at(k0))
    if rk0 != 0:
        val += cmath.phase(rk0)
    for n in delta_minus:
        val -= 4 * cmath.phase(k0 - sd.discrete.z[n])
    return float(val)


def n1_matrices(P: float, Q: float, ph: float) -> tuple[np.ndarray, np.ndarray]:
    e = cmath.exp(1j * ph)
    plus = 0.5j * np.array([[-Q, -e * P], [P / e, Q]], dtype=complex)
    minus = 0.5j * np.array([[Q, -P / e], [e * P, -Q]], dtype=complex)
    return plus, minus


@dataclass
class TransitionData:
    phi0: float
    s: float
    tau: float
    kappa: float
    P: float
    Q: float
    N1_plus: np.ndarray
    N1_minus: np.ndarray
    Nhat0: np.ndarray
    Nhat1: np.ndarray
    terms1: tuple   # the k0 and -k0 contributions to Nhat1


def transition_matrices(sd: ScatteringData, mout, y: float, t: float, p: PhysicalParams,
                        delta_minus, pii: Optional[PIISolution] = None) -> TransitionData:
    tau, s = scaled_variables(y, t, p)
    k0 = p.k0
    kappa = float(abs(sd.r_at(k0)))
    if pii is None:
        pii = painleve2_cached(kappa)
    P, Q = pii.at(s)
    ph = phi0(sd, y, t, p, delta_minus)
    Np, Nm = n1_matrices(P, Q, ph)
    Mp = mout(k0)
    Mpi = mout.inverse(k0)
    a = Mp @ Np @ Mpi
    b = np.conj(Mp) @ Nm @ np.conj(Mpi)
    return TransitionData(ph, s, tau, kappa, P, Q, Np, Nm, (a - b) / k0, (a + b) / k0 ** 2,
                          (a / k0 ** 2, b / k0 ** 2))
