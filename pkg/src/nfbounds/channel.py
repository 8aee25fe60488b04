"""Probability curves over an SNR grid.

Both curves are inverse norm power sums scaled by gamma^-n, so the
estimate/exact ratio is a single SNR-independent constant; the grid only
matters for export.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .enumeration import CountTable
from .errors import EmptyGrid, ValidationError
from .bounds import norm_sum


@dataclass(frozen=True)
class PepCurve:
    snr_db: np.ndarray
    snr_linear: np.ndarray
    pe_estimate: np.ndarray
    pe_exact: np.ndarray
    ratio: float


def pep_curve(table: CountTable, snr_db_start: float, snr_db_stop: float,
              points: int, degree: int | None = None) -> PepCurve:
    """Pairwise-error curves from exact counts and from the integer estimate."""
    if points < 1:
        raise EmptyGrid("SNR grid needs at least one point")
    if table.b is None or table.n_est is None:
        raise ValidationError("table needs both exact and estimate columns")
    if degree is None:
        degree = table.degree
    sum_exact = norm_sum(table, 2, "exact")
    sum_est = norm_sum(table, 2, "estimate")
    db = np.linspace(snr_db_start, snr_db_stop, points)
    gamma = 10.0 ** (db / 10.0)
    pe_exact = sum_exact / gamma ** degree
    pe_est = sum_est / gamma ** degree
    return PepCurve(
        snr_db=db, snr_linear=gamma,
        pe_estimate=pe_est, pe_exact=pe_exact,
        ratio=float(sum_est / sum_exact),
    )


def eve_probability(table: CountTable, gamma_e: float, vol_lambda_b: float = 1.0,
                    degree: int | None = None) -> float:
    """Eavesdropper correct-decision bound at linear SNR gamma_e."""
    if gamma_e <= 0 or vol_lambda_b <= 0:
        raise ValidationError("gamma_e and vol_lambda_b must be positive")
    if degree is None:
        degree = table.degree
    return (1.0 / (4.0 * gamma_e ** 2)) ** (degree / 2.0) * vol_lambda_b * norm_sum(table, 3)

