"""Shared numeric kernels.

Adaptive Gauss-Kronrod quadrature, an embedded Dormand-Prince 5(4)
integrator with a fixed-step RK4 companion, argument-principle winding
numbers with Newton refinement, and the special functions the local
models need (complex Gamma, Airy Ai/Ai').
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


class NumericsError(Exception):
    """Base class for numerical failures."""


class QuadratureError(NumericsError):
    def __init__(self, msg: str, estimate: complex, error: float):
        super().__init__(f"{msg} (estimate={estimate!r}, error bound={error:.3e})")
        self.estimate = estimate
        self.error = error


class StepSizeUnderflow(NumericsError):
    def __init__(self, x: float, h: float):
        super().__init__(f"step size underflow at x={x!r} (h={h:.3e}); problem may be stiff")
        self.x = x
        self.h = h


class ContourThroughZero(NumericsError):
    def __init__(self, where: complex, modulus: float):
        super().__init__(f"|g| = {modulus:.3e} on the contour near {where!r}")
        self.where = where
        self.modulus = modulus


class RootDivergence(NumericsError):
    pass


class GammaPole(NumericsError):
    pass


# ---------------------------------------------------------------------------
# Intervals and rectangles


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")
        if math.isinf(self.lo) and math.isinf(self.hi):
            # both ends infinite is allowed: split at 0 in the integrator
            pass

    @property
    def length(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class ContourRect:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self):
        if not (self.re_lo < self.re_hi and 0.0 <= self.im_lo < self.im_hi):
            raise ValueError(f"invalid search rectangle {self}")

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))

    def contains(self, z: complex) -> bool:
        return self.re_lo <= z.real <= self.re_hi and self.im_lo <= z.imag <= self.im_hi

    def quarters(self) -> list["ContourRect"]:
        rm = 0.5 * (self.re_lo + self.re_hi)
        im = 0.5 * (self.im_lo + self.im_hi)
        return [
            ContourRect(self.re_lo, rm, self.im_lo, im),
            ContourRect(rm, self.re_hi, self.im_lo, im),
            ContourRect(self.re_lo, rm, im, self.im_hi),
            ContourRect(rm, self.re_hi, im, self.im_hi),
        ]


# ---------------------------------------------------------------------------
# Quadrature

# 15-point Kronrod extension of the 7-point Gauss rule (abscissae in [0, 1)).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])        # 15 nodes, ascending
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[1:7:2] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[9:15:2] = _WG[:3][::-1]


def _gk15(f: Callable, a: float, b: float) -> tuple[complex, float]:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fx = np.asarray(f(c + h * _NODES), dtype=complex)
    if fx.shape != _NODES.shape:
        fx = np.broadcast_to(fx, _NODES.shape)
    rk = h * np.dot(_WK, fx)
    rg = h * np.dot(_WG15, fx)
    err = abs(rk - rg)
    # QUADPACK-style pessimistic scaling of the raw difference
    resasc = abs(h) * np.dot(_WK, np.abs(fx - rk / (2 * h))) if h != 0 else 0.0
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return complex(rk), float(err)


def _mapped(f: Callable, iv: Interval, singular: Optional[str]) -> tuple[Callable, float, float]:
    """Return (g, a, b) such that int_iv f = int_a^b g."""
    lo, hi = iv.lo, iv.hi
    if math.isinf(lo) and math.isinf(hi):
        raise ValueError("doubly infinite intervals must be split by the caller")
    if math.isinf(hi):
        def g(t):
            t = np.asarray(t, dtype=float)
            s = lo + t / (1.0 - t)
            return np.asarray(f(s), dtype=complex) / (1.0 - t) ** 2
        return g, 0.0, 1.0
    if math.isinf(lo):
        def g(t):
            t = np.asarray(t, dtype=float)
            s = hi - t / (1.0 - t)
            return np.asarray(f(s), dtype=complex) / (1.0 - t) ** 2
        return g, 0.0, 1.0
    width = hi - lo
    if singular == "lo":
        # s = lo + width * w^2 removes inverse-square-root and softens log behaviour
        def g(w):
            w = np.asarray(w, dtype=float)
            return np.asarray(f(lo + width * w * w), dtype=complex) * (2.0 * width * w)
        return g, 0.0, 1.0
    if singular == "hi":
        def g(w):
            w = np.asarray(w, dtype=float)
            return np.asarray(f(hi - width * w * w), dtype=complex) * (2.0 * width * w)
        return g, 0.0, 1.0
    if singular == "both":
        mid = 0.5 * (lo + hi)
        half = 0.5 * width

        def g(w):
            # w in (-1, 1): s = mid + half * sin(pi w / 2) clusters at both ends
            w = np.asarray(w, dtype=float)
            s = mid + half * np.sin(0.5 * np.pi * w)
            return np.asarray(f(s), dtype=complex) * (half * 0.5 * np.pi * np.cos(0.5 * np.pi * w))
        return g, -1.0, 1.0
    return f, lo, hi


def integrate_adaptive(
    f: Callable,
    iv: Interval,
    tol: float = 1e-10,
    singular: Optional[str] = None,
    max_intervals: int = 4000,
    breakpoints: Sequence[float] = (),
) -> complex:
    """Adaptive G7K15 quadrature of a vectorised complex integrand.

    ``singular`` in {None, "lo", "hi", "both"} declares integrable endpoint
    singularities, handled by a local change of variables.  Semi-infinite
    intervals are mapped by s = lo + t/(1-t).  ``breakpoints`` are interior
    points where the integrand is known to be rough; they seed the panel
    list (finite intervals only).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if math.isinf(iv.lo) and math.isinf(iv.hi):
        return (integrate_adaptive(f, Interval(-math.inf, 0.0), tol / 2, None, max_intervals)
                + integrate_adaptive(f, Interval(0.0, math.inf), tol / 2, None, max_intervals))
    g, a, b = _mapped(f, iv, singular)
    edges = [a, b]
    if breakpoints and not (math.isinf(iv.lo) or math.isinf(iv.hi)) and singular is None:
        inner = sorted(p for p in breakpoints if a < p < b)
        edges = [a, *inner, b]
    heap: list[tuple[float, float, float, complex]] = []
    total = 0j
    err_total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        r, e = _gk15(g, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, r))
        total += r
        err_total += e
    n = len(heap)
    while err_total > tol:
        if n >= max_intervals:
            raise QuadratureError("quadrature did not converge", total, err_total)
        neg_e, lo, hi, r = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise QuadratureError("panel width underflow", total, err_total)
        r1, e1 = _gk15(g, lo, mid)
        r2, e2 = _gk15(g, mid, hi)
        total += r1 + r2 - r
        err_total += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, r1))
        heapq.heappush(heap, (-e2, mid, hi, r2))
        n += 1
        if n % 64 == 0:
            # re-sum to keep round-off from accumulating in the running totals
            total = sum(item[3] for item in heap)
            err_total = sum(-item[0] for item in heap)
    return complex(total)


# ---------------------------------------------------------------------------
# ODE integration

_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B = np.array(_DP_A[6] + [0.0])
_DP_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])


@dataclass
class ODEStats:
    accepted: int = 0
    rejected: int = 0
    evaluations: int = 0


def ode_solve(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    x0: float,
    x1: float,
    y0,
    tol: float = 1e-10,
    x_eval: Optional[Sequence[float]] = None,
    h0: Optional[float] = None,
    h_max: Optional[float] = None,
    stats: Optional[ODEStats] = None,
):
    """Dormand-Prince 5(4) with PI step-size control.

    The state may be any real or complex ndarray; the error norm is the
    max over components of |err| / (tol + tol*|y|), so a batch of
    independent problems shares one step sequence.  With ``x_eval`` the
    integrator lands exactly on each requested abscissa (monotone in the
    direction of integration) and returns the stacked states; otherwise
    only the state at x1 is returned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    y = np.array(y0, dtype=complex if np.iscomplexobj(y0) else float, copy=True)
    direction = 1.0 if x1 >= x0 else -1.0
    span = abs(x1 - x0)
    if stats is None:
        stats = ODEStats()
    targets: list[float]
    if x_eval is None:
        targets = [x1]
    else:
        targets = [float(v) for v in x_eval]
        if any(direction * (b - a) < 0 for a, b in zip(targets[:-1], targets[1:])):
            raise ValueError("x_eval must be monotone in the integration direction")
    out = []
    x = float(x0)
    if span == 0.0:
        return y if x_eval is None else np.array([y.copy() for _ in targets])
    h_max = span if h_max is None else h_max
    k1 = np.asarray(rhs(x, y))
    stats.evaluations += 1
    if h0 is None:
        scale = tol + tol * np.abs(y)
        d0 = np.max(np.abs(y) / scale)
        d1 = np.max(np.abs(k1) / scale)
        h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
        h = min(h, h_max, span)
    else:
        h = min(abs(h0), h_max)
    facold = 1e-4
    beta = 0.04
    expo1 = 0.2 - 0.75 * beta
    ti = 0
    while ti < len(targets):
        target = targets[ti]
        if direction * (target - x) <= 0.0:
            out.append(y.copy())
            ti += 1
            continue
        last = False
        step = h
        if step >= abs(target - x) * (1.0 - 1e-12):
            step = abs(target - x)
            last = True
        if step < 1e-14 * max(1.0, abs(x)):
            raise StepSizeUnderflow(x, step)
        hs = direction * step
        ks = [k1]
        for i in range(1, 7):
            yi = y + hs * sum(a * k for a, k in zip(_DP_A[i], ks) if a != 0.0)
            ks.append(np.asarray(rhs(x + _DP_C[i] * hs, yi)))
        stats.evaluations += 6
        y_new = y + hs * sum(b * k for b, k in zip(_DP_B, ks) if b != 0.0)
        err_vec = hs * sum(e * k for e, k in zip(_DP_E, ks) if e != 0.0)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))
        if not np.isfinite(err):
            err = 1e10
        fac11 = err ** expo1 if err > 0 else 0.0
        if err <= 1.0:
            stats.accepted += 1
            facold = max(err, 1e-4)
            fac = fac11 / facold ** beta
            fac = max(0.1, min(5.0, 0.9 / fac)) if fac > 0 else 5.0
            x = target if last else x + hs
            y = y_new
            k1 = ks[6]
            h = min(step * fac, h_max) if not last else max(h, min(step * fac, h_max))
            if last:
                out.append(y.copy())
                ti += 1
        else:
            stats.rejected += 1
            h = step / min(5.0, fac11 / 0.9)
    if x_eval is None:
        return out[-1]
    return np.array(out)


def rk4_fixed(rhs: Callable, x0: float, x1: float, y0, n_steps: int,
              x_eval: Optional[Sequence[float]] = None):
    """Classical RK4 with a uniform step.  With ``x_eval`` (a subset of the
    uniform nodes) the stacked states at those abscissae are returned."""
    y = np.array(y0, dtype=complex if np.iscomplexobj(y0) else float, copy=True)
    h = (x1 - x0) / n_steps
    record = None
    if x_eval is not None:
        idx = np.rint((np.asarray(x_eval, dtype=float) - x0) / h).astype(int)
        if np.any(np.abs(x0 + idx * h - np.asarray(x_eval)) > 1e-9 * max(1.0, abs(h))):
            raise ValueError("x_eval points must lie on the uniform RK4 grid")
        want = {int(i): [] for i in idx}
        record = (idx, want)
    x = x0
    for n in range(n_steps + 1):
        if record is not None and n in record[1]:
            record[1][n].append(y.copy())
        if n == n_steps:
            break
        k1 = rhs(x, y)
        k2 = rhs(x + h / 2, y + h / 2 * k1)
        k3 = rhs(x + h / 2, y + h / 2 * k2)
        k4 = rhs(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x = x0 + (n + 1) * h
    if record is None:
        return y
    return np.array([record[1][int(i)][0] for i in record[0]])


# ---------------------------------------------------------------------------
# Argument principle

def _rect_boundary(rect: ContourRect, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    a, b, c, d = rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi
    bottom = a + (b - a) * t + 1j * c
    right = b + 1j * (c + (d - c) * t)
    top = b - (b - a) * t + 1j * d
    left = a + 1j * (d - (d - c) * t)
    return np.concatenate([bottom, right, top, left])


def winding_number(g: Callable, rect: ContourRect, n_samples: int = 64,
                   threshold: float = 1e-10, max_samples: int = 4096) -> int:
    """Winding of arg g around the counter-clockwise boundary of ``rect``.

    ``g`` must accept an ndarray of complex points.  The sampling per edge is
    doubled until every consecutive argument increment is below 1 rad.
    """
    n = max(4, n_samples)
    while True:
        pts = _rect_boundary(rect, n)
        vals = np.asarray(g(pts), dtype=complex)
        mods = np.abs(vals)
        i = int(np.argmin(mods))
        if mods[i] < threshold:
            raise ContourThroughZero(complex(pts[i]), float(mods[i]))
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < 1.0 or n >= max_samples:
            break
        n *= 2
    return int(round(float(np.sum(steps)) / (2 * np.pi)))


def refine_root(g: Callable, seed: complex, tol: float = 1e-12, max_iter: int = 60,
                h: Optional[float] = None) -> complex:
    """Newton iteration with a centrally differenced derivative.

    ``g`` is evaluated on small ndarrays (the point and its two neighbours)
    so vectorised callables pay one call per iteration.
    """
    z = complex(seed)
    step_h = h if h is not None else 1e-6
    gz = complex(np.asarray(g(np.array([z])))[0])
    for _ in range(max_iter):
        if abs(gz) < tol:
            return z
        d = step_h * max(1.0, abs(z))
        vals = np.asarray(g(np.array([z + d, z - d])), dtype=complex)
        deriv = (vals[0] - vals[1]) / (2 * d)
        if deriv == 0:
            raise RootDivergence(f"zero derivative at {z!r}")
        dz = -gz / deriv
        lam = 1.0
        # damp until |g| decreases (a few halvings at most)
        for _ in range(8):
            cand = z + lam * dz
            gc = complex(np.asarray(g(np.array([cand])))[0])
            if abs(gc) < abs(gz) or lam < 1e-2:
                break
            lam *= 0.5
        if abs(cand - z) < 1e-15 * max(1.0, abs(z)) and abs(gc) >= tol:
            z, gz = cand, gc
            break
        z, gz = cand, gc
    if abs(gz) < tol:
        return z
    raise RootDivergence(f"no convergence from seed {seed!r}: |g|={abs(gz):.3e} at {z!r}")


# ---------------------------------------------------------------------------
# Special functions

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_complex(z: complex) -> complex:
    """Complex Gamma via the Lanczos approximation (g=7, 9 terms) with reflection."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise GammaPole(f"Gamma has a pole at {z.real}")
    if z.real < 0.5:
        return np.pi / (np.sin(np.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = _LANCZOS[0]
    for i in range(1, 9):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return complex(math.sqrt(2 * math.pi) * t ** (z + 0.5) * np.exp(-t) * x)


_AI0 = 0.355028053887817239260063186004183   # Ai(0)
_AIP0 = -0.258819403792806798405183560189203  # Ai'(0)


def _airy_series(s: float) -> tuple[float, float]:
    s3 = s ** 3
    f, fp = 1.0, 0.0
    g, gp = s, 1.0
    a = 1.0   # coefficient of s^{3k} in f
    b = 1.0   # coefficient of s^{3k+1} in g
    pw = 1.0  # s^{3k}
    for k in range(0, 200):
        a_next = a / ((3 * k + 2) * (3 * k + 3))
        b_next = b / ((3 * k + 3) * (3 * k + 4))
        pw_next = pw * s3
        tf = a_next * pw_next
        tg = b_next * pw_next * s
        f += tf
        fp += 3 * (k + 1) * a_next * pw * s * s
        g += tg
        gp += (3 * k + 4) * b_next * pw_next
        a, b, pw = a_next, b_next, pw_next
        if k > 2 and abs(tf) + abs(tg) < 1e-18 * (abs(f) + abs(g)):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _bessel_k_scaled(nu: float, zeta: float) -> float:
    """exp(zeta) * K_nu(zeta) by the trapezoid rule on the cosh integral."""
    h = 0.05
    # integrand exp(-zeta*(cosh t - 1)) cosh(nu t) is below 1e-20 beyond T
    t_max = math.acosh(1.0 + 50.0 / zeta) + 1.0
    t = np.arange(0.0, t_max + h, h)
    vals = np.exp(-zeta * (np.cosh(t) - 1.0)) * np.cosh(nu * t)
    return float(h * (0.5 * vals[0] + vals[1:].sum()))


def _airy_positive(s: float) -> tuple[float, float]:
    zeta = 2.0 / 3.0 * s ** 1.5
    e = math.exp(-zeta)
    ai = math.sqrt(s / 3.0) / math.pi * _bessel_k_scaled(1.0 / 3.0, zeta) * e
    aip = -s / (math.pi * math.sqrt(3.0)) * _bessel_k_scaled(2.0 / 3.0, zeta) * e
    return ai, aip


def _airy_negative_asymptotic(s: float) -> tuple[float, float]:
    x = -s
    zeta = 2.0 / 3.0 * x ** 1.5
    u = [1.0]
    for k in range(1, 40):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, 40)]
    p = q = r = w = 0.0
    last = math.inf
    for k in range(0, 19):
        tp = (-1) ** k * u[2 * k] / zeta ** (2 * k)
        tq = (-1) ** k * u[2 * k + 1] / zeta ** (2 * k + 1)
        mag = abs(tp) + abs(tq)
        if mag > last:
            break
        last = mag
        p += tp
        q += tq
        r += (-1) ** k * v[2 * k] / zeta ** (2 * k)
        w += (-1) ** k * v[2 * k + 1] / zeta ** (2 * k + 1)
    ph = zeta - math.pi / 4
    ai = (math.cos(ph) * p + math.sin(ph) * q) / (math.sqrt(math.pi) * x ** 0.25)
    aip = x ** 0.25 / math.sqrt(math.pi) * (math.sin(ph) * r - math.cos(ph) * w)
    return ai, aip


def airy(s: float) -> tuple[float, float]:
    """Ai(s) and Ai'(s) for real s.

    Maclaurin series on [-7, 2], the Macdonald-function integral for s > 2
    (no cancellation in the decaying regime), and the oscillatory asymptotic
    expansion below -7.
    """
    s = float(s)
    if s > 2.0:
        return _airy_positive(s)
    if s >= -7.0:
        return _airy_series(s)
    return _airy_negative_asymptotic(s)
