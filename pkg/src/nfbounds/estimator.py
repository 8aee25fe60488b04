"""Geometric estimate of per-norm point counts and its error profile.

Points of absolute norm k inside the box live on a hyperbolic sheet that
maps, in log-coordinates, onto a hyperplane section of a semi-infinite
corner region.  The section is the base of a simplex-shaped pyramid, so
its (n-1)-volume has the closed form

    vol(S_k) = sqrt(n)/(n-1)! * (n log R - log k)^(n-1),

and the expected number of points on the sheet is the number of unit-orbit
translates (w * a_k) times the section volume per fundamental cell of the
unit log-lattice.  The raw (real-valued) estimate is kept alongside the
floored integer; the error column f_k compares the raw estimate with the
exact count, f_k = floor(|n_k - b_k|), matching how the estimate is read
off the smooth curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enumeration import BoxSpec, CountTable, _norm_cap
from .errors import CutoffMismatch, ValidationError
from .units import UnitSystem
from .zeta import ZetaSeries


def section_volume(n: int, R: float, k: int) -> float:
    """(n-1)-volume of the log-space section for norm k, 0 once k > R^n."""
    if k < 1:
        raise ValidationError("norm must be >= 1")
    if R <= 0:
        raise ValidationError("radius must be positive")
    t = n * math.log(R) - math.log(k)
    if t <= 0:
        return 0.0
    return math.sqrt(n) / math.factorial(n - 1) * t ** (n - 1)


def _raw_estimates(a: np.ndarray, ks: np.ndarray, n: int, R: float,
                   w: int, log_volume: float) -> np.ndarray:
    t = n * math.log(R) - np.log(ks.astype(float))
    vol = np.where(t > 0, np.sqrt(n) / math.factorial(n - 1) * np.maximum(t, 0) ** (n - 1), 0.0)
    return w * a.astype(float) * vol / log_volume


def estimate_counts(zeta: ZetaSeries, unit_system: UnitSystem, box: BoxSpec,
                    k_max: int) -> CountTable:
    """Estimate-only table: rows for k <= k_max with a_k != 0 (no exact column)."""
    if zeta.cutoff < k_max:
        raise CutoffMismatch(f"zeta cutoff {zeta.cutoff} below k_max {k_max}")
    field = zeta.field
    cap = min(k_max, _norm_cap(field, box, None))
    a_full = zeta.a[: k_max + 1]
    ks = np.flatnonzero(a_full != 0)
    ks = ks[ks >= 1]
    a = a_full[ks].copy()
    raw = np.zeros(len(ks))
    inside = ks <= cap
    raw[inside] = _raw_estimates(a[inside], ks[inside], field.degree, box.R,
                                 unit_system.w, unit_system.log_volume)
    return CountTable(
        R=box.R, degree=field.degree, cap=int(k_max), max_norm=0,
        ks=ks.astype(np.int64), a=a, b=None, total_points=0, n_raw=raw,
        n_est=np.floor(raw).astype(np.int64),
    )


def add_estimates(table: CountTable, unit_system: UnitSystem) -> CountTable:
    """Fill the estimate and error columns of an exact count table."""
    field = unit_system.field
    raw = np.zeros(len(table.ks))
    nz = table.a != 0
    raw[nz] = _raw_estimates(table.a[nz], table.ks[nz], field.degree, table.R,
                             unit_system.w, unit_system.log_volume)
    n_est = np.floor(raw).astype(np.int64)
    f = None
    if table.b is not None:
        f = np.floor(np.abs(raw - table.b)).astype(np.int64)
    return CountTable(
        R=table.R, degree=table.degree, cap=table.cap, max_norm=table.max_norm,
        ks=table.ks, a=table.a, b=table.b, total_points=table.total_points,
        n_raw=raw, n_est=n_est, f=f,
    )


@dataclass(frozen=True)
class ErrorProfile:
    """Distribution of the error column over rows with a_k != 0."""

    histogram: dict[int, int]
    cumulative: list[tuple[int, float]]
    max_error: int
    zero_fraction: float
    row_count: int

    def cumulative_at(self, f: int) -> float:
        frac = 0.0
        for value, cum in self.cumulative:
            if value <= f:
                frac = cum
            else:
                break
        return frac


def error_profile(table: CountTable) -> ErrorProfile:
    if table.f is None or table.b is None:
        raise ValidationError("table lacks estimate or exact columns")
    mask = table.a != 0
    fs = table.f[mask]
    if len(fs) == 0:
        raise ValidationError("no rows with nonzero coefficient")
    values, counts = np.unique(fs, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    total = int(counts.sum())
    cum = []
    running = 0
    for v in sorted(hist):
        running += hist[v]
        cum.append((v, running / total))
    return ErrorProfile(
        histogram=hist,
        cumulative=cum,
        max_error=int(values.max()),
        zero_fraction=hist.get(0, 0) / total,
        row_count=total,
    )
