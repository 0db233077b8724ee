"""Command-line front end and the acceptance checks behind ``validate``.

Exit codes: 0 success, 2 validation failure, 3 input error, 4 numeric-range error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import __version__
from .asymptotics import (DegenerateShift, RealnessViolation, RegionMismatch, eval_auto,
                          eval_region_nosaddle, eval_region_saddles, eval_transition, samples_sidecar,
                          samples_to_csv)
from .localmodels import NonGlobalSolution, PIIRange, painleve2, pc_coefficients, pii_residuals
from .numerics import ContourRect, NumericsError, airy
from .phase import (BoundarySoliton, Case, PhysicalParams, UnsupportedSigns, classify_region, delta_pm,
                    saddle_points, theta, theta_d1, theta_d2)
from .scattering import (ContinuationRange, DiscreteSpectrum, InterpolationRange, ScatteringData,
                         SpectralSingularity, a_continued, gaussian_profile, scatter, sech_profile,
                         small_k_check, tabulated_profile, zero_profile)
from .soliton import DegenerateSystem, MOut, SymmetryViolation, soliton_field, soliton_profile
from .spectrum import ClusteredZeros, DataQuality, find_spectrum

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT, EXIT_RANGE = 0, 2, 3, 4

INPUT_ERRORS = (ValueError, KeyError, TypeError, FileNotFoundError, json.JSONDecodeError,
                UnsupportedSigns, RegionMismatch)
RANGE_ERRORS = (NumericsError, ContinuationRange, InterpolationRange, SpectralSingularity, PIIRange,
                NonGlobalSolution, DegenerateShift, DegenerateSystem, BoundarySoliton, RealnessViolation,
                SymmetryViolation, ClusteredZeros, DataQuality)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config


DEFAULT_CONFIG = {
    "alpha": 1.0,
    "beta": 1.0,
    "profile": {"kind": "gaussian", "params": {"amplitude": 0.5, "width": 1.0}},
    "kgrid": {"min": -5.0, "max": 5.0, "n": 801},
    "domain": {"L": 20.0, "n": 8001},
}

PROFILE_KINDS = ("gaussian", "sech", "zero", "tabulated", "soliton")


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def validate_config(cfg: dict) -> dict:
    """Fill defaults and check the schema; raises ConfigError."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    out = json.loads(json.dumps(DEFAULT_CONFIG))
    unknown = set(cfg) - {"alpha", "beta", "profile", "kgrid", "domain", "spectrum"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("alpha", "beta"):
        if key in cfg:
            out[key] = float(cfg[key])
    for key in ("profile", "kgrid", "domain"):
        if key in cfg:
            if not isinstance(cfg[key], dict):
                raise ConfigError(f"{key} must be an object")
            out[key].update(cfg[key])
    if "spectrum" in cfg:
        sp = cfg["spectrum"]
        rect = sp.get("rect")
        if not (isinstance(rect, list) and len(rect) == 4):
            raise ConfigError("spectrum.rect must be [re_lo, re_hi, im_lo, im_hi]")
        out["spectrum"] = {"rect": [float(v) for v in rect], "tol": float(sp.get("tol", 1e-10))}
    kind = out["profile"].get("kind")
    if kind not in PROFILE_KINDS:
        raise ConfigError(f"profile.kind must be one of {PROFILE_KINDS}, got {kind!r}")
    kg = out["kgrid"]
    if not (float(kg["min"]) < float(kg["max"]) and int(kg["n"]) >= 2):
        raise ConfigError("kgrid needs min < max and n >= 2")
    if float(out["domain"]["L"]) <= 0:
        raise ConfigError("domain.L must be positive")
    return out


def load_config(path: str) -> dict:
    with open(path) as fh:
        return validate_config(json.load(fh))


def profile_from_config(cfg: dict):
    prof = cfg["profile"]
    kind = prof["kind"]
    pars = dict(prof.get("params", {}))
    L = float(cfg["domain"]["L"])
    p = PhysicalParams(cfg["alpha"], cfg["beta"])
    if kind == "gaussian":
        return gaussian_profile(float(pars.get("amplitude", 0.5)), float(pars.get("width", 1.0)), L)
    if kind == "sech":
        return sech_profile(float(pars.get("amplitude", 0.5)), float(pars.get("width", 1.0)), L)
    if kind == "zero":
        return zero_profile(L)
    if kind == "tabulated":
        return tabulated_profile(pars["x"], pars["u"], L)
    # soliton: the t-slice of an N-soliton, closed under the mirror symmetry
    zs = [_complex(v) for v in pars["z"]]
    cs = [_complex(v) for v in pars["c"]]
    disc = DiscreteSpectrum.from_generators(zs, cs)
    n = int(cfg["domain"].get("n", 12001))
    return soliton_profile(disc, p, L=L, h=2 * L / (n - 1), t=float(pars.get("t", 0.0)))


def k_grid_from_config(cfg: dict) -> np.ndarray:
    kg = cfg["kgrid"]
    return np.linspace(float(kg["min"]), float(kg["max"]), int(kg["n"]))


def run_scatter(cfg: dict) -> tuple[ScatteringData, dict]:
    p = PhysicalParams(cfg["alpha"], cfg["beta"])
    p.check_signs()
    profile = profile_from_config(cfg)
    sd = scatter(profile, k_grid_from_config(cfg), p)
    report: dict = {}
    if "spectrum" in cfg:
        lo, hi, ilo, ihi = cfg["spectrum"]["rect"]
        disc = find_spectrum(profile, ContourRect(lo, hi, ilo, ihi), cfg["spectrum"]["tol"], report)
        sd = replace(sd, discrete=disc)
    return sd, report


# ---------------------------------------------------------------------------
# Acceptance checks


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def check_unitarity() -> Check:
    sd = scatter(gaussian_profile(0.5, 1.0, 20.0), np.linspace(-5, 5, 801))
    res = sd.unitarity_residual()
    return Check(1, "unitarity", res < 1e-6, f"max ||a|^2+|b|^2-1| = {res:.3e} (< 1e-6)", {"residual": res})


ROUNDTRIP_Z = 0.3 + 0.4j
ROUNDTRIP_C = 1.0


def check_roundtrip() -> Check:
    p = PhysicalParams()
    disc = DiscreteSpectrum.from_generators([ROUNDTRIP_Z], [ROUNDTRIP_C])
    # x(y) folds back for these data (a loop), so the curve is rescattered in arclength
    prof = soliton_profile(disc, p, L=30.0, h=0.005)
    found = find_spectrum(prof, ContourRect(-1.0, 1.0, 0.05, 1.5))
    sd = scatter(prof, np.linspace(-5, 5, 801), p)
    dz, dc = [], []
    for z, c in zip(disc.z, disc.c):
        if not found.z:
            break
        i = int(np.argmin([abs(w - z) for w in found.z]))
        dz.append(abs(found.z[i] - z))
        dc.append(abs(found.c[i] - c) / abs(c))
    rmax = float(np.max(np.abs(sd.r)))
    ok = len(found.z) == len(disc.z) and max(dz) < 1e-4 and max(dc) < 1e-3 and rmax < 1e-3
    detail = (f"{len(found.z)}/{len(disc.z)} poles, max|dz| = {max(dz, default=math.nan):.2e} (< 1e-4), "
              f"max rel dc = {max(dc, default=math.nan):.2e} (< 1e-3), max|r| = {rmax:.2e} (< 1e-3)")
    return Check(2, "soliton round trip", ok, detail, {"dz": max(dz, default=math.nan),
                                                       "dc": max(dc, default=math.nan), "rmax": rmax})


def check_small_k() -> Check:
    prof = gaussian_profile()
    r1 = small_k_check(prof, 1e-3)
    r2 = small_k_check(prof, 5e-4)
    order = math.log2(r1 / r2)
    ok = r1 < 1e-5 and abs(order - 2.0) < 0.3
    return Check(3, "small-k law", ok, f"|a'(0)/i - c| = {r1:.2e} (< 1e-5), observed order {order:.2f} (~2)",
                 {"residual": r1, "order": order})


GAMMA_DATA = (0.5, 1 + 0.5j, 2.0, 0.1j)


def check_gamma() -> Check:
    worst = 0.0
    for r0 in GAMMA_DATA:
        b12, b21, v = pc_coefficients(r0)
        worst = max(worst, abs(b12 * b21 - v), abs(abs(b12) ** 2 + v))
    return Check(4, "gamma identities", worst < 1e-12,
                 f"max error over beta12*beta21 = nu and |beta12|^2 = -nu: {worst:.2e} (< 1e-12)", {"error": worst})


def check_pii() -> Check:
    kappa = 0.3
    sol = painleve2(kappa, -6.0, 8.0, method="dopri54")
    ref = painleve2(kappa, -6.0, 8.0, method="rk4")
    agree = float(np.max(np.abs(sol.P - ref.P)))
    r_ode, r_q = pii_residuals(sol)
    P6, _ = sol.at(6.0)
    airy_dev = abs(P6 / (kappa * airy(6.0)[0]) - 1.0)
    ok = r_ode < 1e-8 and agree < 1e-8 and airy_dev < 1e-4 and r_q < 1e-8
    detail = (f"ODE residual {r_ode:.1e}, dual agreement {agree:.1e}, Q residual {r_q:.1e} (< 1e-8 each); "
              f"P/(kappa Ai)-1 at s=6: {airy_dev:.1e} (< 1e-4)")
    return Check(5, "Painleve II", ok, detail, {"ode": r_ode, "agreement": agree, "q": r_q, "airy": airy_dev})


REFLECTIONLESS_GENERATORS = (0.3 + 0.4j, -0.2 + 0.6j)


def reflectionless_points(p: PhysicalParams, n: int = 50) -> dict:
    """n (y, t) points inside each evaluator's region (transition band C = 1)."""
    ts = np.linspace(2.0, 6.0, n)
    frac = np.linspace(-0.9, 0.9, n)
    return {
        "saddles": [(float(t * (p.xi_star - 1.0 - 2.5 * (f + 1))), float(t)) for t, f in zip(ts, frac)],
        "nosaddle": [(float(t * (p.xi_star + 1.0 + 2.0 * (f + 1))), float(t)) for t, f in zip(ts, frac)],
        "transition": [(float(t * (p.xi_star + f * t ** (-2.0 / 3.0))), float(t)) for t, f in zip(ts, frac)],
    }


def check_reflectionless() -> Check:
    p = PhysicalParams()
    disc = DiscreteSpectrum.from_generators(list(REFLECTIONLESS_GENERATORS), [1.0, 1.0])
    sd = ScatteringData.reflectionless(disc, p)
    evaluators = {"saddles": eval_region_saddles, "nosaddle": eval_region_nosaddle,
                  "transition": eval_transition}
    worst, size = {}, {}
    for name, pts in reflectionless_points(p).items():
        err, big = 0.0, 0.0
        for y, t in pts:
            s = evaluators[name](sd, y, t, p, C=1.0)
            ref = soliton_field(disc, t, [y], p).u[0]
            err = max(err, abs(s.u - ref))
            big = max(big, abs(ref))
        worst[name], size[name] = err, big
    ok = all(v < 1e-12 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e} (max|u| {size[k]:.2g})" for k, v in worst.items()) + \
        " (< 1e-12, 50 points each)"
    return Check(6, "reflectionless exactness", ok, detail, worst)


def check_saddles() -> Check:
    p = PhysicalParams(1.0, 1.0)
    xi = -4.0
    S = saddle_points(xi, p)
    a, b, c = 48.0, 4.0 * xi, 1.0
    disc = math.sqrt(b * b - 4 * a * c)
    ws = [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
    expect = sorted([s * math.sqrt(w) for w in ws for s in (1, -1)], reverse=True)
    named = sorted([0.5, -0.5, 1 / math.sqrt(12), -1 / math.sqrt(12)], reverse=True)
    pts = list(S.points)
    dev = max(max(abs(x - y) for x, y in zip(pts, expect)), max(abs(x - y) for x, y in zip(pts, named)))
    d1 = max(abs(complex(theta_d1(k, xi, p))) for k in pts)
    orient = all(e * float(np.real(theta_d2(k, xi, p))) > 0 for k, e in zip(pts, S.eta))
    ok = S.case == Case.FOUR_SADDLE and len(pts) == 4 and dev < 1e-12 and d1 < 1e-10 and orient
    detail = (f"{S.case.value} {', '.join(f'{k:+.6f}' for k in pts)}; root deviation {dev:.1e} (< 1e-12), "
              f"|theta'| {d1:.1e} (< 1e-10), eta*theta'' > 0: {orient}")
    return Check(7, "saddle classification", ok, detail, {"deviation": dev, "theta_d1": d1})


def check_scaling(sd: Optional[ScatteringData] = None) -> Check:
    p = PhysicalParams()
    if sd is None:
        sd = scatter(gaussian_profile(), np.linspace(-5, 5, 801), p)
    e100 = eval_region_saddles(sd, -4.0 * 100, 100.0, p).envelope
    e400 = eval_region_saddles(sd, -4.0 * 400, 400.0, p).envelope
    ratio1 = e400 / e100
    s0, C = -1.0, 3.0
    env = []
    for t in (10.0, 80.0):
        tau = 12 * p.alpha * t
        xi = p.xi_star + 12 * p.alpha * s0 * tau ** (-2.0 / 3.0)
        env.append(eval_transition(sd, xi * t, t, p, C=C).envelope)
    ratio2 = env[1] / env[0]
    ok = abs(ratio1 - 0.5) < 0.05 and abs(ratio2 - 0.5) < 0.05
    detail = (f"saddle envelope ratio t=100->400: {ratio1:.4f}; transition envelope ratio t=10->80 "
              f"at s=-1: {ratio2:.4f} (0.5 +- 10%)")
    return Check(8, "order scaling", ok, detail, {"saddle_ratio": ratio1, "transition_ratio": ratio2})


SIGMA2 = np.array([[0, -1j], [1j, 0]])


def check_symmetries(seed: int = 7) -> Check:
    rng = np.random.default_rng(seed)
    p = PhysicalParams()
    disc = DiscreteSpectrum.from_generators([0.3 + 0.4j, 0.6 + 0.2j], [1.0, 0.5 + 0.5j])
    y, t = -30.0, 5.0
    mout = MOut(disc, y, t, p, delta_pm(disc.z, y / t, p)[0])
    ks = rng.uniform(-3, 3, 100) + 1j * rng.uniform(-0.3, 0.3, 100)
    ks = ks[np.min(np.abs(ks[:, None] - np.array([*disc.z, *np.conj(disc.z)])[None, :]), axis=1) > 0.05]
    m_err = max(float(np.max(np.abs(mout(-k) - SIGMA2 @ mout(k) @ SIGMA2)) / max(1.0, np.max(np.abs(mout(k)))))
                for k in ks)
    prof = gaussian_profile()
    kq = rng.uniform(-4, 4, 100) + 1j * rng.uniform(0.0, 1.5, 100)
    a1 = a_continued(prof, kq)
    a2 = a_continued(prof, -np.conj(kq))
    a_err = float(np.max(np.abs(a2 - np.conj(a1))))
    kt = rng.uniform(-4, 4, 100) + 1j * rng.uniform(-1, 1, 100)
    kt = kt[np.abs(kt) > 1e-3]
    th_err = float(np.max(np.abs(theta(-kt, -2.0, p) + theta(kt, -2.0, p)) / np.maximum(1.0, np.abs(theta(kt, -2.0, p)))))
    ok = m_err < 1e-8 and a_err < 1e-8 and th_err < 1e-8
    detail = f"M_out {m_err:.1e}, a {a_err:.1e}, theta {th_err:.1e} (< 1e-8 each, 100 random points)"
    return Check(9, "symmetries", ok, detail, {"mout": m_err, "a": a_err, "theta": th_err})


def _pipeline_bytes() -> tuple[str, str]:
    cfg = validate_config({"kgrid": {"min": -4.0, "max": 4.0, "n": 161}})
    sd, _ = run_scatter(cfg)
    text = sd.to_json()
    samples = [eval_auto(sd, y, 20.0, sd.params) for y in np.linspace(-120.0, 20.0, 8)]
    return text, samples_to_csv(samples)


def check_determinism() -> Check:
    j1, c1 = _pipeline_bytes()
    j2, c2 = _pipeline_bytes()
    rt = ScatteringData.from_json(j1).to_json()
    ok = j1 == j2 and c1 == c2 and rt == j1
    detail = (f"rerun identical: json {j1 == j2}, csv {c1 == c2}; sd.json read->write identical: {rt == j1}")
    return Check(10, "determinism and serialization", ok, detail)


ALL_CHECKS: dict[int, Callable[[], Check]] = {
    1: check_unitarity, 2: check_roundtrip, 3: check_small_k, 4: check_gamma, 5: check_pii,
    6: check_reflectionless, 7: check_saddles, 8: check_scaling, 9: check_symmetries, 10: check_determinism,
}

SUITES = {
    "unitarity": (1,), "roundtrip": (2,), "gamma": (4,), "pii": (5,), "reflectionless": (6,),
    "all": tuple(ALL_CHECKS),
}


def run_check(number: int) -> Check:
    t0 = time.perf_counter()
    try:
        chk = ALL_CHECKS[number]()
    except Exception as exc:        # a crash is a failed criterion, reported as such
        chk = Check(number, ALL_CHECKS[number].__name__.removeprefix("check_"), False,
                    f"raised {type(exc).__name__}: {exc}")
    chk.seconds = time.perf_counter() - t0
    return chk


# ---------------------------------------------------------------------------
# Commands


def cmd_classify(args) -> int:
    p = PhysicalParams(args.alpha, args.beta)
    p.check_signs()
    if args.xi is not None:
        xi = args.xi
        case = saddle_points(xi, p).case
    else:
        if args.y is None or args.t is None:
            raise ConfigError("give --xi or both --y and --t")
        xi = args.y / args.t
        case = classify_region(args.y, args.t, p, args.C)
    S = saddle_points(xi, p)
    pos = [k for k in S.points if k > 0]
    line = case.value
    if pos:
        line += ": " + ", ".join(f"±{k:.6g}" for k in pos)
    print(line)
    print(f"xi = {xi!r}")
    print(f"eta = {list(S.eta)}")
    if p.alpha * p.beta > 0 and p.alpha > 0:
        print(f"xi_star = {p.xi_star!r}")
        print(f"k0 = {p.k0!r}")
    return EXIT_OK


def cmd_scatter(args) -> int:
    cfg = load_config(args.config)
    sd, report = run_scatter(cfg)
    with open(args.out, "w") as fh:
        fh.write(sd.to_json())
    print(f"unitarity residual = {sd.unitarity_residual():.3e}")
    print(f"max |r| = {float(np.max(np.abs(sd.r))):.3e}")
    print(f"c = {sd.c_scalar!r}")
    if "spectrum" in cfg:
        print(f"discrete eigenvalues: {len(sd.discrete)}")
        for z, c in zip(sd.discrete.z, sd.discrete.c):
            print(f"  z = {z!r}  c = {c!r}")
    return EXIT_OK


def _read_data(path: str) -> ScatteringData:
    with open(path) as fh:
        return ScatteringData.from_json(fh.read())


def cmd_solitons(args) -> int:
    sd = _read_data(args.data)
    ys = np.linspace(args.ymin, args.ymax, args.n)
    fld = soliton_field(sd.discrete, args.t, ys, sd.params)
    with open(args.out, "w") as fh:
        fh.write(fld.to_csv())
    print(f"x monotone: {'yes' if fld.monotone else 'no (the curve has loops)'}")
    return EXIT_OK


REGION_EVALUATORS = {"auto": eval_auto, "I": eval_region_saddles, "II": eval_region_nosaddle,
                     "III": eval_transition}


def cmd_asymptote(args) -> int:
    sd = _read_data(args.data)
    ev = REGION_EVALUATORS[args.region]
    ys = np.linspace(args.ymin, args.ymax, args.n)
    samples = [ev(sd, float(y), args.t, sd.params, C=args.C, harmonize=args.harmonize) for y in ys]
    with open(args.out, "w") as fh:
        fh.write(f"# t={args.t!r} alpha={sd.params.alpha!r} beta={sd.params.beta!r} region={args.region}\n")
        fh.write(samples_to_csv(samples))
    with open(args.out + ".json", "w") as fh:
        fh.write(samples_sidecar(samples, {"t": args.t, "C": args.C, "region": args.region,
                                           "harmonize": args.harmonize}))
    return EXIT_OK


def cmd_painleve(args) -> int:
    sol = painleve2(args.kappa, args.smin, args.smax, h=args.h)
    r_ode, r_q = pii_residuals(sol)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(sol.to_csv())
    else:
        sys.stdout.write(sol.to_csv())
    print(f"ODE residual = {r_ode:.3e}, Q residual = {r_q:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = [run_check(n) for n in SUITES[args.suite]]
    for c in checks:
        print(c.line() + f"  [{c.seconds:.1f} s]", flush=True)
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} passed")
    return EXIT_OK if not failed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wkisp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="saddle points and region of a velocity")
    c.add_argument("--alpha", type=float, default=1.0)
    c.add_argument("--beta", type=float, default=1.0)
    c.add_argument("--xi", type=float)
    c.add_argument("--y", type=float)
    c.add_argument("--t", type=float)
    c.add_argument("--C", type=float, default=1.0)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("scatter", help="scattering data of an initial profile")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_scatter)

    so = sub.add_parser("solitons", help="reflectionless field on a y-grid")
    so.add_argument("--data", required=True)
    so.add_argument("--t", type=float, required=True)
    so.add_argument("--ymin", type=float, required=True)
    so.add_argument("--ymax", type=float, required=True)
    so.add_argument("--n", type=int, default=201)
    so.add_argument("--out", required=True)
    so.set_defaults(func=cmd_solitons)

    a = sub.add_parser("asymptote", help="long-time asymptotic field on a y-grid")
    a.add_argument("--data", required=True)
    a.add_argument("--t", type=float, required=True)
    a.add_argument("--ymin", type=float, required=True)
    a.add_argument("--ymax", type=float, required=True)
    a.add_argument("--n", type=int, default=101)
    a.add_argument("--region", choices=sorted(REGION_EVALUATORS), default="auto")
    a.add_argument("--C", type=float, default=1.0)
    a.add_argument("--harmonize", action="store_true")
    a.add_argument("--out", required=True)
    a.set_defaults(func=cmd_asymptote)

    pa = sub.add_parser("painleve", help="tabulate the Painleve II transcendent")
    pa.add_argument("--kappa", type=float, required=True)
    pa.add_argument("--smin", type=float, default=-6.0)
    pa.add_argument("--smax", type=float, default=8.0)
    pa.add_argument("--h", type=float, default=0.01)
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_painleve)

    v = sub.add_parser("validate", help="run acceptance checks")
    v.add_argument("--suite", choices=sorted(SUITES), default="all")
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RANGE_ERRORS as exc:
        print(f"numeric-range error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except INPUT_ERRORS as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
