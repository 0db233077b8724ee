"""Zeros of a(k) in the upper half-plane and their norming constants."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .numerics import ContourRect, ContourThroughZero, RootDivergence, refine_root, winding_number
from .scattering import DiscreteSpectrum, InitialProfile, a_continued, b_at_zero

MIN_CELL = 1e-2        # subdivide down to this diameter before refining
MERGE_DIST = 1e-6
DERIV_STEP = 1e-5
B_AGREEMENT = 1e-4
SPLIT = 0.5 + 0.0137   # off-centre split keeps symmetric data off shared edges
WINDING_TOL = 1e-7     # the argument count needs far less accuracy than the roots


class ClusteredZeros(ValueError):
    pass


class DataQuality(ValueError):
    pass


def _quarters(rect: ContourRect) -> list[ContourRect]:
    rm = rect.re_lo + SPLIT * (rect.re_hi - rect.re_lo)
    im = rect.im_lo + SPLIT * (rect.im_hi - rect.im_lo)
    return [
        ContourRect(rect.re_lo, rm, rect.im_lo, im),
        ContourRect(rm, rect.re_hi, rect.im_lo, im),
        ContourRect(rect.re_lo, rm, im, rect.im_hi),
        ContourRect(rm, rect.re_hi, im, rect.im_hi),
    ]


def _perturbed(rect: ContourRect, attempt: int) -> ContourRect:
    d = 1e-3 * (attempt + 1) * rect.diameter
    return ContourRect(rect.re_lo - d, rect.re_hi + 0.7 * d, max(rect.im_lo - 0.3 * d, 1e-6)
                       if rect.im_lo > 0 else rect.im_lo, rect.im_hi + 0.9 * d)


def _winding(g, rect: ContourRect, n: int) -> tuple[int, ContourRect]:
    for attempt in range(5):
        try:
            return winding_number(g, rect, n), rect
        except ContourThroughZero:
            rect = _perturbed(rect, attempt)
    raise ContourThroughZero(rect.center, 0.0)


def find_spectrum(profile: InitialProfile, rect: ContourRect, tol: float = 1e-10,
                  report: Optional[dict] = None) -> DiscreteSpectrum:
    """All simple zeros of a in ``rect`` with c_n = b(z_n)/a'(z_n)."""
    if rect.im_lo <= 0:
        raise ValueError("search rectangle must stay strictly above the real axis")
    g = lambda k: a_continued(profile, np.asarray(k, dtype=complex))
    g_coarse = lambda k: a_continued(profile, np.asarray(k, dtype=complex), tol=WINDING_TOL)
    total, rect = _winding(g_coarse, rect, 64)
    roots: list[complex] = []
    cells = 0

    def search(cell: ContourRect, w: int):
        nonlocal cells
        cells += 1
        if w == 0:
            return
        if cell.diameter > MIN_CELL:
            for sub in _quarters(cell):
                ws, sub = _winding(g_coarse, sub, 32)
                search(sub, ws)
            return
        try:
            z = refine_root(g, cell.center, tol)
        except RootDivergence as exc:
            raise ClusteredZeros(f"refinement failed in cell {cell}: {exc}") from exc
        roots.append(z)

    if total:
        search(rect, total)
    merged: list[complex] = []
    for z in roots:
        if all(abs(z - m) > MERGE_DIST for m in merged):
            merged.append(z)
    if len(merged) != total:
        raise ClusteredZeros(f"winding number {total} but {len(merged)} distinct roots refined")
    merged.sort(key=lambda v: (v.imag, v.real))
    cs = []
    agreements = []
    for z in merged:
        av = g(np.array([z + DERIV_STEP, z - DERIV_STEP]))
        ap = (av[0] - av[1]) / (2 * DERIV_STEP)
        if abs(ap) < 1e-8:
            raise ClusteredZeros(f"|a'| = {abs(ap):.2e} at {z}: zero is not simple")
        b, agree = b_at_zero(profile, z)
        if agree > B_AGREEMENT:
            raise DataQuality(f"b(z) components disagree by {agree:.2e} at {z}")
        agreements.append(agree)
        cs.append(b / ap)
    if report is not None:
        report.update({"winding": total, "cells": cells, "b_agreement": agreements,
                       "max_abs_z": max((abs(z) for z in merged), default=0.0),
                       "rect": [rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi]})
    return DiscreteSpectrum(tuple(merged), tuple(cs))
