"""Direct scattering at t = 0.

The x-part of the Lax pair is integrated as an initial-value problem from
the ends of the truncation window.  Each tracked column is written in the
interaction picture relative to the free phase exp(ik p(x) sigma3), where
p' = sqrt(m), so the free oscillation drops out and the tails cost almost
nothing.  Profiles are either functions of x (closed form or tabulated) or
unit-speed curves parametrised by arclength; the latter are integrated in
the arclength variable, where the coefficient is half the curvature.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .numerics import Interval, integrate_adaptive, ode_solve
from .phase import PhysicalParams


class SpectralSingularity(ValueError):
    pass


class ContinuationRange(ValueError):
    def __init__(self, k, bound: float):
        super().__init__(f"Im k = {np.max(np.imag(k)):.3g} exceeds the continuation bound {bound:.3g}")
        self.bound = bound


class InterpolationRange(ValueError):
    pass


JOST_TOL = 1e-11
CHUNK = 64          # fixed batch size, so results never depend on the thread count
EXP_LIMIT = 650.0   # largest exponent tolerated in the interaction picture


def n_threads() -> int:
    try:
        return max(1, int(os.environ.get("WKISP_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Profiles


@dataclass
class InitialProfile:
    """Initial datum on a truncation window [-L, L].

    For ``form == "x"`` the callables ``u, ux, uxx`` are functions of x.
    For ``form == "arclength"`` the window is in the arclength variable y
    and ``half_curvature(y)`` is the Lax coefficient; ``x_of`` and ``u_of``
    describe the curve (used for resampling and reporting only).
    """

    kind: str
    L: float
    u: Optional[Callable] = None
    ux: Optional[Callable] = None
    uxx: Optional[Callable] = None
    form: str = "x"
    half_curvature: Optional[Callable] = None
    x_of: Optional[Callable] = None
    u_of: Optional[Callable] = None
    total_excess: Optional[float] = None     # integral of sqrt(m) - 1 for curves
    params: dict = field(default_factory=dict)
    breakpoints: tuple = (0.0,)

    # coefficient functions of the scattering ODE in the integration variable
    def speed(self, s):
        s = np.asarray(s, dtype=float)
        if self.form == "arclength":
            return np.ones_like(s)
        return np.sqrt(1.0 + np.asarray(self.ux(s)) ** 2)

    def coupling(self, s):
        s = np.asarray(s, dtype=float)
        if self.form == "arclength":
            return np.asarray(self.half_curvature(s), dtype=float)
        ux = np.asarray(self.ux(s))
        return np.asarray(self.uxx(s)) / (2.0 * (1.0 + ux * ux))

    def m(self, x):
        return 1.0 + np.asarray(self.ux(x)) ** 2

    def excess_integral(self, lo: float, hi: float, tol: float = 1e-13) -> float:
        """Integral of sqrt(m) - 1 over [lo, hi] in x (x-form only)."""
        if lo >= hi:
            return 0.0
        f = lambda x: np.sqrt(self.m(x)) - 1.0
        bps = tuple(b for b in self.breakpoints if lo < b < hi)
        return integrate_adaptive(f, Interval(lo, hi), tol, breakpoints=bps).real

    @property
    def c_scalar(self) -> float:
        if self.form == "arclength":
            return float(self.total_excess)
        return self.excess_integral(-self.L, self.L)

    @property
    def p_at_origin(self) -> float:
        """p at the evaluation point (x = 0, or y = 0 for curves)."""
        if self.form == "arclength":
            return 0.0
        return -self.excess_integral(0.0, self.L)

    def decay_certificate(self) -> dict:
        if self.form == "arclength":
            ends = np.array([-self.L, self.L])
            return {"max_coupling_at_edges": float(np.max(np.abs(self.coupling(ends))))}
        ends = np.array([-self.L, self.L])
        return {"max_u_at_edges": float(np.max(np.abs(self.u(ends)))),
                "max_ux_at_edges": float(np.max(np.abs(self.ux(ends))))}

    def check_admissible(self, tol: float = 1e-6):
        cert = self.decay_certificate()
        bad = {k: v for k, v in cert.items() if not v < tol}
        if bad:
            raise ValueError(f"profile does not decay inside the window: {bad}")
        return cert


def gaussian_profile(amplitude: float = 0.5, width: float = 1.0, L: float = 20.0) -> InitialProfile:
    A, w = amplitude, width

    def u(x):
        return A * np.exp(-(np.asarray(x) / w) ** 2)

    def ux(x):
        x = np.asarray(x)
        return -2.0 * x / w ** 2 * u(x)

    def uxx(x):
        x = np.asarray(x)
        return (4.0 * x * x / w ** 4 - 2.0 / w ** 2) * u(x)

    return InitialProfile("gaussian", L, u, ux, uxx, params={"amplitude": A, "width": w})


def sech_profile(amplitude: float = 0.5, width: float = 1.0, L: float = 20.0) -> InitialProfile:
    A, w = amplitude, width

    def u(x):
        return A / np.cosh(np.asarray(x) / w)

    def ux(x):
        z = np.asarray(x) / w
        return -A / w * np.tanh(z) / np.cosh(z)

    def uxx(x):
        z = np.asarray(x) / w
        sc = 1.0 / np.cosh(z)
        return A / w ** 2 * (sc * np.tanh(z) ** 2 - sc ** 3)

    return InitialProfile("sech", L, u, ux, uxx, params={"amplitude": A, "width": w})


def zero_profile(L: float = 20.0) -> InitialProfile:
    z = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return InitialProfile("zero", L, z, z, z)


def tabulated_profile(x: Sequence[float], u: Sequence[float], L: Optional[float] = None,
                      kind: str = "tabulated") -> InitialProfile:
    """Cubic-spline profile through samples; zero outside the samples."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(np.diff(x) <= 0):
        raise ValueError("tabulated abscissae must be strictly increasing")
    spl = CubicSpline(x, u, bc_type="clamped")
    d1, d2 = spl.derivative(1), spl.derivative(2)
    lo, hi = x[0], x[-1]

    def clip(f):
        def g(s):
            s = np.asarray(s, dtype=float)
            return np.where((s >= lo) & (s <= hi), f(np.clip(s, lo, hi)), 0.0)
        return g

    L = float(min(-lo, hi)) if L is None else float(L)
    # spline knots are where the second derivative has kinks
    bps = tuple(float(v) for v in x)
    return InitialProfile(kind, L, clip(spl), clip(d1), clip(d2),
                          params={"n": int(len(x))}, breakpoints=bps)


# ---------------------------------------------------------------------------
# Jost columns


@dataclass
class JostColumns:
    """Columns at the evaluation point; each array has shape (2, nk)."""
    k: np.ndarray
    plus1: np.ndarray
    minus2: np.ndarray
    plus2: Optional[np.ndarray]
    minus1: Optional[np.ndarray]
    p_eval: float


def _column_rhs(profile: InitialProfile, k: np.ndarray, which: tuple[int, ...]):
    """RHS for the interaction-picture columns.

    State rows: 0 -> P (phase accumulated from the start point), then two
    rows per tracked column.  ``which`` lists the column index (1 or 2) of
    each tracked column.
    """
    def rhs(s, Y):
        sp = float(profile.speed(s))
        g = float(profile.coupling(s))
        P = Y[0]
        out = np.empty_like(Y)
        out[0] = sp
        if g == 0.0:
            out[1:] = 0.0
            return out
        e = np.exp(2j * k * P)
        for n, col in enumerate(which):
            a, b = Y[1 + 2 * n], Y[2 + 2 * n]
            if col == 1:
                # v1 = V1, v2 = exp(-2ikP) V2
                out[1 + 2 * n] = g * b / e
                out[2 + 2 * n] = -g * e * a
            else:
                # w1 = exp(2ikP) W1, w2 = W2
                out[1 + 2 * n] = g * b / e
                out[2 + 2 * n] = -g * e * a
        return out
    return rhs


def _propagate(profile: InitialProfile, k: np.ndarray, start: float, stop: float,
               which: tuple[int, ...], tol: float) -> tuple[list[np.ndarray], np.ndarray]:
    nk = k.size
    Y0 = np.zeros((1 + 2 * len(which), nk), dtype=complex)
    for n, col in enumerate(which):
        Y0[1 + 2 * n + (col - 1)] = 1.0
    rhs = _column_rhs(profile, k, which)
    Y = ode_solve(rhs, start, stop, Y0, tol=tol, h_max=max(0.5, 0.05 * profile.L))
    P = Y[0].real
    cols = []
    for n, col in enumerate(which):
        A, B = Y[1 + 2 * n], Y[2 + 2 * n]
        if col == 1:
            cols.append(np.array([A, np.exp(-2j * k * P) * B]))
        else:
            cols.append(np.array([np.exp(2j * k * P) * A, B]))
    return cols, P


def _excess_between(profile: InitialProfile, lo: float, hi: float) -> float:
    if profile.form == "arclength":
        return 0.0
    return profile.excess_integral(lo, hi)


def continuation_bound(profile: InitialProfile, at: float = 0.0) -> float:
    """Largest Im k for which the interaction picture stays in range."""
    span = max(profile.L - at, profile.L + at) + _excess_between(profile, -profile.L, profile.L)
    return EXP_LIMIT / (2.0 * span)


def _map_chunks(fn, k: np.ndarray):
    chunks = [k[i:i + CHUNK] for i in range(0, k.size, CHUNK)]
    nt = n_threads()
    if nt > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=nt) as ex:
            parts = list(ex.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    return parts


def jost_columns(profile: InitialProfile, k, at: float = 0.0, all_columns: Optional[bool] = None,
                 tol: float = JOST_TOL) -> JostColumns:
    """Jost columns at ``at`` for a batch of spectral parameters.

    Only the columns analytic in the upper half-plane are produced when any
    k is off the real axis, unless ``all_columns`` forces otherwise.
    """
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    if all_columns is None:
        all_columns = bool(np.all(k.imag == 0))
    if np.any(k.imag < 0):
        raise ValueError("spectral parameter must satisfy Im k >= 0")
    bound = continuation_bound(profile, at)
    if np.any(k.imag > bound):
        raise ContinuationRange(k, bound)
    L = profile.L
    # phase at the evaluation point relative to each start point
    if profile.form == "arclength":
        p_eval = at
    else:
        p_eval = at - profile.excess_integral(at, L)

    def work(kc):
        which_plus = (1, 2) if all_columns else (1,)
        which_minus = (2, 1) if all_columns else (2,)
        cp, _ = _propagate(profile, kc, L, at, which_plus, tol)
        cm, _ = _propagate(profile, kc, -L, at, which_minus, tol)
        return cp, cm

    parts = _map_chunks(work, k)
    plus1 = np.concatenate([p[0][0] for p in parts], axis=1)
    minus2 = np.concatenate([p[1][0] for p in parts], axis=1)
    plus2 = minus1 = None
    if all_columns:
        plus2 = np.concatenate([p[0][1] for p in parts], axis=1)
        minus1 = np.concatenate([p[1][1] for p in parts], axis=1)
    return JostColumns(k, plus1, minus2, plus2, minus1, p_eval)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# Scattering data


@dataclass
class DiscreteSpectrum:
    z: tuple = ()
    c: tuple = ()

    def __post_init__(self):
        self.z = tuple(complex(v) for v in self.z)
        self.c = tuple(complex(v) for v in self.c)
        if len(self.z) != len(self.c):
            raise ValueError("z and c must have equal length")
        if any(v.imag <= 0 for v in self.z):
            raise ValueError("discrete eigenvalues must lie in the upper half-plane")
        for i in range(len(self.z)):
            for j in range(i):
                if abs(self.z[i] - self.z[j]) < 1e-12:
                    raise ValueError("discrete eigenvalues must be distinct")

    def __len__(self):
        return len(self.z)

    @classmethod
    def from_generators(cls, z: Sequence[complex], c: Sequence[complex], tol: float = 1e-12):
        """Close a set of poles under the reflection z -> -conj(z).

        A partner at -conj(z) carries -conj(c), which is what a real field
        requires.  Poles on the imaginary axis are their own partners and
        need c purely imaginary.
        """
        zs, cs = [], []
        for zn, cn in zip(z, c):
            zn, cn = complex(zn), complex(cn)
            zs.append(zn)
            cs.append(cn)
            if abs(zn.real) > tol:
                zs.append(complex(-zn.real, zn.imag))
                cs.append(-cn.conjugate())
            elif abs(cn.real) > tol * max(1.0, abs(cn)):
                raise ValueError(f"pole {zn} on the imaginary axis needs imaginary c, got {cn}")
        return cls(tuple(zs), tuple(cs))

    def is_symmetric(self, tol: float = 1e-8) -> bool:
        for zn, cn in zip(self.z, self.c):
            mirror = complex(-zn.real, zn.imag)
            hits = [j for j, zm in enumerate(self.z) if abs(zm - mirror) < tol]
            if not hits or abs(self.c[hits[0]] + cn.conjugate()) > tol * max(1.0, abs(cn)):
                return False
        return True


@dataclass
class ScatteringData:
    k_grid: np.ndarray
    a: np.ndarray
    b: np.ndarray
    r: np.ndarray
    c_scalar: float
    discrete: DiscreteSpectrum
    params: PhysicalParams
    truncation: dict

    def __post_init__(self):
        self.k_grid = np.asarray(self.k_grid, dtype=float)
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        self.r = np.asarray(self.r, dtype=complex)
        self._spline = None

    @classmethod
    def reflectionless(cls, discrete: DiscreteSpectrum, params: PhysicalParams,
                       k_grid: Optional[Sequence[float]] = None) -> "ScatteringData":
        kg = np.linspace(-5, 5, 801) if k_grid is None else np.asarray(k_grid, dtype=float)
        one = np.ones(kg.size, dtype=complex)
        return cls(kg, one, 0 * one, 0 * one, 0.0, discrete, params, {"L": None, "n": int(kg.size)})

    def unitarity_residual(self) -> float:
        return float(np.max(np.abs(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 - 1.0)))

    @property
    def is_reflectionless(self) -> bool:
        return bool(np.all(self.r == 0))

    def r_at(self, k):
        """Reflection coefficient off the grid by cubic interpolation."""
        k = np.asarray(k, dtype=float)
        if self.is_reflectionless:
            return np.zeros(k.shape, dtype=complex)[()]
        lo, hi = self.k_grid[0], self.k_grid[-1]
        if np.any(k < lo - 1e-12) or np.any(k > hi + 1e-12):
            raise InterpolationRange(f"k outside the tabulated range [{lo}, {hi}]")
        if self._spline is None:
            self._spline = (CubicSpline(self.k_grid, self.r.real), CubicSpline(self.k_grid, self.r.imag))
        return (self._spline[0](k) + 1j * self._spline[1](k))[()]

    def nu_at(self, k):
        return -np.log1p(np.abs(self.r_at(k)) ** 2) / (2 * np.pi)

    # serialisation -------------------------------------------------------
    def to_dict(self) -> dict:
        pair = lambda arr: [[float(v.real), float(v.imag)] for v in arr]
        return {
            "params": {"alpha": float(self.params.alpha), "beta": float(self.params.beta)},
            "k_grid": [float(v) for v in self.k_grid],
            "a": pair(self.a),
            "b": pair(self.b),
            "r": pair(self.r),
            "c": float(self.c_scalar),
            "discrete": [{"z": [zn.real, zn.imag], "c": [cn.real, cn.imag]}
                         for zn, cn in zip(self.discrete.z, self.discrete.c)],
            "truncation": dict(self.truncation),
        }

    def to_json(self) -> str:
        # repr of a float is the shortest string that round-trips (<= 17 digits)
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "ScatteringData":
        cx = lambda arr: np.array([complex(re, im) for re, im in arr], dtype=complex)
        disc = DiscreteSpectrum(tuple(complex(*e["z"]) for e in d.get("discrete", [])),
                                tuple(complex(*e["c"]) for e in d.get("discrete", [])))
        return cls(np.array(d["k_grid"], dtype=float), cx(d["a"]), cx(d["b"]), cx(d["r"]),
                   float(d["c"]), disc, PhysicalParams(d["params"]["alpha"], d["params"]["beta"]),
                   dict(d.get("truncation", {})))

    @classmethod
    def from_json(cls, text: str) -> "ScatteringData":
        return cls.from_dict(json.loads(text))


def scatter(profile: InitialProfile, k_grid: Sequence[float], params: Optional[PhysicalParams] = None,
            at: float = 0.0, tol: float = JOST_TOL) -> ScatteringData:
    """a, b, r on a real grid (continuous part; the discrete part is empty).

    The column equations are regular at k = 0, so a grid point there is
    integrated like any other (it returns a = 1, b = 0 for turning-free data).
    """
    k = np.asarray(k_grid, dtype=float)
    if np.any(np.diff(k) <= 0):
        raise ValueError("k_grid must be sorted ascending")
    cols = jost_columns(profile, k.astype(complex), at=at, all_columns=True, tol=tol)
    a = _det(cols.plus1, cols.minus2)
    b = np.exp(-2j * k * cols.p_eval) * _det(cols.minus2, cols.plus2)
    if np.any(np.abs(a) < 1e-12):
        i = int(np.argmin(np.abs(a)))
        raise SpectralSingularity(f"|a| = {abs(a[i]):.2e} at k = {k[i]}")
    return ScatteringData(k, a, b, b / a, profile.c_scalar, DiscreteSpectrum(),
                          params or PhysicalParams(), {"L": profile.L, "n": int(k.size)})


def a_continued(profile: InitialProfile, k, at: float = 0.0, tol: float = JOST_TOL):
    """a(k) for Im k >= 0 from the two analytic columns."""
    scalar = np.ndim(k) == 0
    cols = jost_columns(profile, k, at=at, all_columns=False, tol=tol)
    a = _det(cols.plus1, cols.minus2)
    return complex(a[0]) if scalar else a


def b_at_zero(profile: InitialProfile, z: complex, tol: float = JOST_TOL) -> tuple[complex, float]:
    """b at a zero of a from the proportionality of the analytic columns.

    Returns (b, relative disagreement between the two components).
    """
    cols = jost_columns(profile, np.array([z]), all_columns=False, tol=tol)
    v = cols.plus1[:, 0]
    w = cols.minus2[:, 0] * np.exp(-2j * z * cols.p_eval)
    ratios = w / v
    b = complex(np.vdot(v, w) / np.vdot(v, v))
    weights = np.abs(v)
    agree = float(abs(ratios[0] - ratios[1]) / max(abs(b), 1e-300))
    if weights.min() < 1e-6 * weights.max():
        # one component is negligible; only the dominant one is informative
        agree = 0.0
    return b, agree


def small_k_check(profile: InitialProfile, h: float = 1e-3, tol: float = 1e-13) -> float:
    """|a'(0)/i - c| with a'(0) from a central difference on the real axis."""
    ap = a_continued(profile, np.array([h, -h], dtype=complex), tol=tol)
    deriv = (ap[0] - ap[1]) / (2 * h)
    return float(abs(deriv / 1j - profile.c_scalar))
