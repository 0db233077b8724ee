"""Reflectionless Riemann-Hilbert problem and the exact N-soliton field.

The solution is a sum of simple poles at z_n and conj(z_n).  Each pole is
stored in one of two orientations: with the residue at z_n in the second
column ("upper", the natural one) or, after dividing by the Blaschke
factor omega(k) = prod (k - z_n)/(k - conj z_n) over a chosen subset, in
the first column ("lower").  Flipping the poles whose exponential weight
is large keeps the linear system O(1) for any (y, t).  The symmetry
M(k) = sigma2 conj(M(conj k)) sigma2 is built into the ansatz, so only the
residues at the z_n are unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .phase import PhysicalParams
from .scattering import DiscreteSpectrum, InitialProfile

SIGMA2 = np.array([[0, -1j], [1j, 0]])


class DegenerateSystem(np.linalg.LinAlgError):
    def __init__(self, cond: float):
        super().__init__(f"reflectionless system is numerically singular (cond = {cond:.3e})")
        self.cond = cond


class SymmetryViolation(ValueError):
    pass


class PoleEvaluation(ValueError):
    def __init__(self, z: complex):
        super().__init__(f"evaluation at the pole {z!r}")
        self.z = z


class NonMonotoneCurve(ValueError):
    pass


def phase_exponent(z, y: float, t: float, p: PhysicalParams):
    """2i(y z + t(4 alpha z^3 - beta/(4z))), the log of gamma_n / c_n."""
    z = np.asarray(z, dtype=complex)
    return 2j * (y * z + t * (4 * p.alpha * z ** 3 - p.beta / (4 * z)))


def blaschke(k, zs: Sequence[complex]):
    k = np.asarray(k, dtype=complex)
    out = np.ones_like(k)
    for z in zs:
        out = out * (k - z) / (k - np.conj(z))
    return out[()] if out.ndim == 0 else out


def blaschke_derivative_at_zero(zn: complex, zs: Sequence[complex]) -> complex:
    """omega'(z_n) for a zero z_n of omega."""
    out = 1.0 / (zn - np.conj(zn))
    for z in zs:
        if z != zn:
            out *= (zn - z) / (zn - np.conj(z))
    return complex(out)


@dataclass
class RHSolution:
    """Solved reflectionless problem at one (y, t).

    ``cols[n]`` is the nonzero column of the residue at z_n of the
    renormalised matrix; ``lower[n]`` says whether that column is the first
    (flipped pole) or the second.  ``flipped`` lists the poles absorbed into
    omega.  ``weights`` are the residue weights actually imposed.
    """

    z: np.ndarray
    cols: np.ndarray            # shape (N, 2)
    lower: np.ndarray           # bool, shape (N,)
    weights: np.ndarray
    flipped: tuple
    residual: float
    cond: float
    y: float = 0.0
    t: float = 0.0

    @property
    def N(self) -> int:
        return len(self.z)

    def _residues(self):
        """Yield (z, A, zbar, B) for each pole pair of the renormalised matrix."""
        for zn, col, low in zip(self.z, self.cols, self.lower):
            a, b = col
            if low:
                A = np.array([[a, 0], [b, 0]], dtype=complex)
                B = np.array([[0, -np.conj(b)], [0, np.conj(a)]], dtype=complex)
            else:
                A = np.array([[0, a], [0, b]], dtype=complex)
                B = np.array([[np.conj(b), 0], [-np.conj(a), 0]], dtype=complex)
            yield zn, A, np.conj(zn), B

    def renormalised(self, k) -> np.ndarray:
        """M(k) divided by omega(k)^sigma3 over the flipped poles."""
        k = complex(k)
        out = np.eye(2, dtype=complex)
        for zn, A, zb, B in self._residues():
            if abs(k - zn) < 1e-14 * max(1.0, abs(zn)) or abs(k - zb) < 1e-14 * max(1.0, abs(zn)):
                raise PoleEvaluation(zn)
            out += A / (k - zn) + B / (k - zb)
        return out

    def renormalised_derivative(self, k) -> np.ndarray:
        k = complex(k)
        out = np.zeros((2, 2), dtype=complex)
        for zn, A, zb, B in self._residues():
            out -= A / (k - zn) ** 2 + B / (k - zb) ** 2
        return out

    def first_moment(self) -> np.ndarray:
        """Coefficient of 1/k at infinity of the renormalised matrix."""
        out = np.zeros((2, 2), dtype=complex)
        for _, A, _, B in self._residues():
            out += A + B
        return out

    def matrix(self, k) -> np.ndarray:
        """M(k | original data)."""
        w = complex(blaschke(k, [self.z[n] for n in self.flipped])) if self.flipped else 1.0
        return self.renormalised(k) @ np.diag([w, 1.0 / w])

    def omega_at_zero(self) -> tuple[complex, complex]:
        """omega(0) and omega'(0)/omega(0) over the flipped poles."""
        zs = [self.z[n] for n in self.flipped]
        w0 = complex(blaschke(0.0, zs)) if zs else 1.0 + 0j
        dlog = sum(-1.0 / z + 1.0 / np.conj(z) for z in zs) if zs else 0j
        return w0, complex(dlog)


def _pole_weights(z, c, y, t, p, flipped):
    E = phase_exponent(z, y, t, p)
    zs_flip = [z[n] for n in flipped]
    w = np.empty(len(z), dtype=complex)
    for n in range(len(z)):
        if n in flipped:
            dw = blaschke_derivative_at_zero(z[n], zs_flip)
            w[n] = np.exp(-E[n]) / (c[n] * dw * dw)
        else:
            om = complex(blaschke(z[n], zs_flip)) if zs_flip else 1.0
            w[n] = c[n] * np.exp(E[n]) * om * om
    return w


def _residue_map(z, lower, weights):
    """Affine map from the real unknown vector to the residue-condition defects."""
    N = len(z)

    def unpack(x):
        return (x[:N] + 1j * x[N:2 * N]), (x[2 * N:3 * N] + 1j * x[3 * N:])

    def F(x):
        a, b = unpack(x)
        sol = RHSolution(z, np.stack([a, b], axis=1), lower, weights, (), 0.0, 0.0)
        res = list(sol._residues())
        e1 = np.empty(N, dtype=complex)
        e2 = np.empty(N, dtype=complex)
        for n in range(N):
            # regular part of the renormalised matrix at z_n (own z_n term excluded)
            Mreg = np.eye(2, dtype=complex)
            for m, (zm, A, zb, B) in enumerate(res):
                if m != n:
                    Mreg += A / (z[n] - zm)
                Mreg += B / (z[n] - zb)
            if lower[n]:
                target = weights[n] * Mreg[:, 1]
            else:
                target = weights[n] * Mreg[:, 0]
            e1[n] = a[n] - target[0]
            e2[n] = b[n] - target[1]
        return np.concatenate([e1.real, e1.imag, e2.real, e2.imag])

    return F, unpack


def solve_reflectionless(sd: DiscreteSpectrum, y: float, t: float, p: PhysicalParams,
                         flip: Optional[Iterable[int]] = None,
                         constants: Optional[Sequence[complex]] = None) -> RHSolution:
    """Solve for the residues at (y, t).

    ``flip`` selects the poles renormalised into omega; by default those
    whose weight |c e^{2it theta}| exceeds one.  ``constants`` overrides the
    norming constants (used for the dressed outer model).
    """
    z = np.asarray(sd.z, dtype=complex)
    c = np.asarray(sd.c if constants is None else constants, dtype=complex)
    N = len(z)
    if N == 0:
        return RHSolution(z, np.zeros((0, 2), complex), np.zeros(0, bool), np.zeros(0, complex),
                          (), 0.0, 1.0, y, t)
    if flip is None:
        E = phase_exponent(z, y, t, p)
        logw = np.log(np.abs(c)) + E.real
        flip = tuple(int(n) for n in np.nonzero(logw > 0)[0])
    flipped = tuple(sorted(int(n) for n in flip))
    lower = np.array([n in flipped for n in range(N)])
    weights = _pole_weights(z, c, y, t, p, flipped)
    F, unpack = _residue_map(z, lower, weights)
    f0 = F(np.zeros(4 * N))
    A = np.column_stack([F(e) - f0 for e in np.eye(4 * N)])
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > 1e14:
        raise DegenerateSystem(cond)
    x = np.linalg.solve(A, -f0)
    a, b = unpack(x)
    residual = float(np.max(np.abs(F(x))))
    return RHSolution(z, np.stack([a, b], axis=1), lower, weights, flipped, residual, cond, y, t)


def reconstruct(rh: RHSolution, imag_tol: float = 1e-8) -> tuple[float, float]:
    """(u, c_plus) from the expansion of M(0)^{-1} M(k) at k = 0."""
    if rh.N == 0:
        return 0.0, 0.0
    X = np.linalg.solve(rh.renormalised(0.0), rh.renormalised_derivative(0.0))
    w0, dlog = rh.omega_at_zero()
    u = X[0, 1] / (w0 * w0) / 1j
    cp = (X[0, 0] + dlog) / 1j
    scale = max(1.0, abs(u), abs(cp))
    if abs(u.imag) > imag_tol * scale or abs(cp.imag) > imag_tol * scale:
        raise SymmetryViolation(f"imaginary residue u={u!r}, c+={cp!r}; data not mirror-symmetric?")
    return float(u.real), float(cp.real)


def reconstruct_complex(rh: RHSolution) -> tuple[complex, complex]:
    """As reconstruct but without the realness check."""
    if rh.N == 0:
        return 0j, 0j
    X = np.linalg.solve(rh.renormalised(0.0), rh.renormalised_derivative(0.0))
    w0, dlog = rh.omega_at_zero()
    return complex(X[0, 1] / (w0 * w0) / 1j), complex((X[0, 0] + dlog) / 1j)


def half_curvature(rh: RHSolution) -> float:
    """Coefficient of the arclength Lax operator, read off at k = infinity."""
    if rh.N == 0:
        return 0.0
    q = -2j * rh.first_moment()[0, 1]
    return float(q.real)


@dataclass
class SolitonField:
    t: float
    y_grid: np.ndarray
    u: np.ndarray
    x_of_y: np.ndarray
    cplus: np.ndarray
    params: PhysicalParams = field(default_factory=PhysicalParams)

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.x_of_y) > 0))

    def to_csv(self) -> str:
        lines = [f"# t={self.t!r} alpha={self.params.alpha!r} beta={self.params.beta!r}", "y,x,u,cplus"]
        for row in zip(self.y_grid, self.x_of_y, self.u, self.cplus):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SolitonField":
        head, *rest = text.strip().splitlines()
        meta = dict(item.split("=") for item in head.lstrip("# ").split())
        data = np.array([[float(v) for v in line.split(",")] for line in rest[1:]]).reshape(-1, 4)
        return cls(float(meta["t"]), data[:, 0], data[:, 2], data[:, 1], data[:, 3],
                   PhysicalParams(float(meta["alpha"]), float(meta["beta"])))


def soliton_field(sd: DiscreteSpectrum, t: float, y_grid: Sequence[float],
                  p: PhysicalParams) -> SolitonField:
    y_grid = np.asarray(y_grid, dtype=float)
    if np.any(np.diff(y_grid) < 0):
        raise ValueError("y_grid must be sorted")
    u = np.empty(y_grid.size)
    cp = np.empty(y_grid.size)
    for i, y in enumerate(y_grid):
        u[i], cp[i] = reconstruct(solve_reflectionless(sd, float(y), t, p))
    return SolitonField(float(t), y_grid, u, y_grid + cp, cp, p)


class MOut:
    """Outer model: the pole part of the dressed problem, renormalised by omega over Delta-.

    The dressing enters only through the modified norming constants
    c_n delta(z_n)^{-2}; with ``delta_at_poles`` omitted this is the plain
    reflectionless solution divided by omega_{Delta-}^{sigma3}.
    """

    def __init__(self, sd: DiscreteSpectrum, y: float, t: float, p: PhysicalParams,
                 delta_minus: Sequence[int], delta_at_poles: Optional[Sequence[complex]] = None):
        c = np.asarray(sd.c, dtype=complex)
        if delta_at_poles is not None:
            c = c * np.asarray(delta_at_poles, dtype=complex) ** -2
        self.constants = c
        self.delta_minus = tuple(delta_minus)
        self.rh = solve_reflectionless(sd, y, t, p, flip=self.delta_minus, constants=c)

    def __call__(self, k) -> np.ndarray:
        return self.rh.renormalised(k)

    def inverse(self, k) -> np.ndarray:
        M = self(k)
        # unimodular: inverse is the adjugate
        return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])


def m_out(sd: DiscreteSpectrum, y: float, t: float, p: PhysicalParams,
          delta_minus: Sequence[int], delta_at_poles: Optional[Sequence[complex]] = None) -> MOut:
    return MOut(sd, y, t, p, delta_minus, delta_at_poles)


# ---------------------------------------------------------------------------
# Profiles generated from solitons


def soliton_profile(sd: DiscreteSpectrum, p: PhysicalParams, L: float = 30.0, h: float = 0.005,
                    t: float = 0.0) -> InitialProfile:
    """The t-slice of the N-soliton as an arclength-parametrised initial curve.

    The Lax coefficient is tabulated on a fine y-grid from the exact
    residues and splined; the curve itself (x(y), u(y)) is splined too.
    """
    ys = np.linspace(-L, L, int(round(2 * L / h)) + 1)
    q = np.empty_like(ys)
    u = np.empty_like(ys)
    cp = np.empty_like(ys)
    for i, y in enumerate(ys):
        rh = solve_reflectionless(sd, float(y), t, p)
        q[i] = half_curvature(rh)
        u[i], cp[i] = reconstruct(rh)
    qs = CubicSpline(ys, q)
    xs = CubicSpline(ys, ys + cp)
    us = CubicSpline(ys, u)
    total = float(cp[0] - cp[-1])
    return InitialProfile("soliton-generated", L, form="arclength", half_curvature=qs,
                          x_of=xs, u_of=us, total_excess=total,
                          params={"z": [complex(v) for v in sd.z], "c": [complex(v) for v in sd.c], "t": t})


def resample_to_x(field: SolitonField, x_grid: Sequence[float]) -> np.ndarray:
    """u on an x-grid by monotone cubic interpolation of the parametric field."""
    if not field.monotone:
        i = int(np.argmin(np.diff(field.x_of_y)))
        raise NonMonotoneCurve(
            f"x(y) decreases near y={field.y_grid[i]:.4g}: the field is multivalued in x (loop)")
    return PchipInterpolator(field.x_of_y, field.u, extrapolate=False)(np.asarray(x_grid, float))
