"""Truncated inverse norm power sums and their zeta-function bounds.

Three kinds of statement are computed:

* height-truncated sums S(s, m) over elements, compared against the
  bounded-height ideal sum (strict lower bound) and against
  max{b_k} times that sum (upper bound), both valid for class number 1;

* the geometric bound: the estimator sum is expanded binomially in
  log(R^n) - log(k) and each power-of-log sum is majorised by the
  corresponding derivative of the ideal-count series.  With derivative
  partial sums taken at a cutoff at least the table cap, the chain

      sum n_k_raw / k^s  <=  K1 * sum_m C(n-1,m) (log R^n)^{n-1-m} |D^(m)|

  holds exactly (every dropped term is nonnegative), so it is asserted;

* the printed leading-term form K1 (log R)^{n-1} zeta(s), which is
  reported but never asserted: it is smaller than the m = 0 term of the
  expansion it came from, so it need not dominate anything.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .enumeration import BoxSpec, CountTable, cached_orbits, cached_points, count_by_norm
from .errors import ValidationError
from .numberfield import NumberField
from .units import UnitSystem
from .zeta import ZetaSeries, dirichlet_coeffs, zeta_derivative


def norm_sum(table: CountTable, s: int, column: str = "exact") -> float:
    """sum counts_k / k^s over the table rows.

    column: "exact" uses b_k, "estimate" the floored n_k, "estimate_raw"
    the pre-floor estimate.
    """
    if s < 2:
        raise ValidationError("s must be an integer >= 2")
    ks = table.ks.astype(float)
    if column == "exact":
        if table.b is None:
            raise ValidationError("table has no exact counts")
        counts = table.b.astype(float)
    elif column == "estimate":
        if table.n_est is None:
            raise ValidationError("table has no estimate column")
        counts = table.n_est.astype(float)
    elif column == "estimate_raw":
        if table.n_raw is None:
            raise ValidationError("table has no estimate column")
        counts = table.n_raw
    else:
        raise ValidationError(f"unknown column {column!r}")
    return float((counts / ks ** s).sum())


def eve_sum(table: CountTable) -> float:
    """Inverse norm power sum with the wiretap exponent (s = 3)."""
    return norm_sum(table, 3)


def pep_sum(table: CountTable) -> float:
    """Inverse norm power sum with the pairwise-error exponent (s = 2)."""
    return norm_sum(table, 2)


# ---------------------------------------------------------------------------
# height-truncated statements (class number 1)


@dataclass(frozen=True)
class HeightBoundResult:
    s: int
    m: float
    norm_sum: float
    zeta_truncated: float
    max_coefficient: int
    coefficient_upper_bound: float
    lower_holds: bool
    upper_holds: bool
    degenerate: bool  # only the unit ideal fits below height m


def _height_table(field: NumberField, unit_system: UnitSystem, m: float) -> CountTable:
    box = BoxSpec(float(m))
    points = cached_points(field, box)
    cap = int(math.floor((box.R + box.boundary_tolerance) ** field.degree + 1e-9))
    series = dirichlet_coeffs(field, max(cap, 1))
    return count_by_norm(points, series, box)


def height_bound_report(field: NumberField, unit_system: UnitSystem,
                        s: int, m: float) -> HeightBoundResult:
    """Both zeta-based statements for the height-m truncation at exponent s."""
    if s < 2:
        raise ValidationError("s must be an integer >= 2")
    if m < 1:
        raise ValidationError("height bound m must be >= 1 (no points otherwise)")
    table = _height_table(field, unit_system, m)
    orbits = cached_orbits(field, unit_system, BoxSpec(float(m)))
    zeta_trunc = float(sum(1.0 / orb.norm ** s for orb in orbits))
    s_sum = norm_sum(table, s)
    max_b = int(table.b.max()) if len(table.b) else 0
    upper = max_b * zeta_trunc
    degenerate = zeta_trunc <= 1.0
    return HeightBoundResult(
        s=s, m=m, norm_sum=s_sum, zeta_truncated=zeta_trunc,
        max_coefficient=max_b, coefficient_upper_bound=upper,
        lower_holds=s_sum > zeta_trunc > 1.0,
        upper_holds=s_sum <= upper + 1e-12 * abs(upper),
        degenerate=degenerate,
    )


def lower_bound_check(field: NumberField, unit_system: UnitSystem,
                      s: int, m: float) -> tuple[float, float, bool]:
    """(S(s,m), zeta(s,m), verdict S > zeta > 1)."""
    rep = height_bound_report(field, unit_system, s, m)
    return rep.norm_sum, rep.zeta_truncated, rep.lower_holds


def coefficient_upper_bound(table: CountTable, field: NumberField,
                            unit_system: UnitSystem, s: int) -> float:
    """max{b_k} * zeta(s, m) for the table's own box; asserts it dominates."""
    orbits = cached_orbits(field, unit_system, BoxSpec(table.R))
    zeta_trunc = float(sum(1.0 / orb.norm ** s for orb in orbits))
    bound = int(table.b.max()) * zeta_trunc
    if norm_sum(table, s) > bound * (1 + 1e-12):
        raise AssertionError("coefficient bound failed; table inconsistent")
    return bound


# ---------------------------------------------------------------------------
# geometric bound via series derivatives


@dataclass(frozen=True)
class BoundReport:
    """Everything the bound pipeline can say for one (s, truncation) pair."""

    s: int
    m_or_R: float
    norm_sum: float | None = None
    zeta_truncated: float | None = None
    lower_bound: float | None = None
    coefficient_upper_bound: float | None = None
    K1: float | None = None
    geometric_bound_terms: tuple[float, ...] | None = None
    geometric_bound: float | None = None
    leading_term_bound: float | None = None
    estimator_sum: float | None = None
    derivative_tails: tuple[float, ...] | None = None
    zeta_cutoff: int | None = None

    def to_json(self, **extra) -> str:
        payload = asdict(self)
        payload.update(extra)
        return json.dumps(payload, indent=2, sort_keys=True)


def geometric_bound(zeta: ZetaSeries, unit_system: UnitSystem, s: int,
                    R: float) -> BoundReport:
    """Binomial-expansion bound on the estimator sum, with the chain check.

    The left side sums raw estimates over table rows k <= min(R^n, cutoff);
    the right side uses derivative partial sums at the series cutoff, which
    can only exceed the matching finite sums, so the inequality is exact.
    """
    if s < 2:
        raise ValidationError("s must be an integer >= 2")
    field = zeta.field
    n = field.degree
    w = unit_system.w
    K1 = w * math.sqrt(n) / (math.factorial(n - 1) * unit_system.log_volume)
    cap = min(int(math.floor(R ** n + 1e-9)), zeta.cutoff)
    ks = np.arange(1, cap + 1, dtype=float)
    a = zeta.a[1 : cap + 1].astype(float)
    t = n * math.log(R) - np.log(ks)
    lhs = float(K1 * (a * np.maximum(t, 0.0) ** (n - 1) / ks ** s).sum())
    logRn = n * math.log(R)
    terms = []
    tails = []
    for mm in range(n):
        dv = zeta_derivative(zeta, mm, s)
        terms.append(math.comb(n - 1, mm) * logRn ** (n - 1 - mm) * abs(dv.value))
        tails.append(dv.tail_estimate)
    bound = K1 * sum(terms)
    zeta0 = abs(zeta_derivative(zeta, 0, s).value)
    leading = K1 * math.log(R) ** (n - 1) * zeta0
    if lhs > bound * (1 + 1e-9):
        raise AssertionError(
            f"binomial-expansion bound violated: {lhs} > {bound}"
        )
    return BoundReport(
        s=s, m_or_R=R, K1=K1,
        geometric_bound_terms=tuple(K1 * v for v in terms),
        geometric_bound=bound,
        leading_term_bound=leading,
        estimator_sum=lhs,
        derivative_tails=tuple(tails),
        zeta_cutoff=zeta.cutoff,
    )


def full_height_report(field: NumberField, unit_system: UnitSystem,
                       s: int, m: float) -> BoundReport:
    rep = height_bound_report(field, unit_system, s, m)
    return BoundReport(
        s=s, m_or_R=m,
        norm_sum=rep.norm_sum,
        zeta_truncated=rep.zeta_truncated,
        lower_bound=rep.zeta_truncated,
        coefficient_upper_bound=rep.coefficient_upper_bound,
    )
