"""Unit-group handling: fundamental units, log embedding, regulator.

For real quadratic fields the fundamental unit is computed from scratch by
the periodic continued-fraction expansion of theta, entirely in integer
arithmetic.  For higher degree the caller supplies an independent system
of units (fixture data); the builder validates unit-ness and independence
and cross-checks the resulting regulator against two different minors and,
when available, an expected value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import (
    DependentUnits,
    NotAUnit,
    RegulatorMismatch,
    ValidationError,
    WrongRank,
)
from .numberfield import AlgebraicInt, NumberField, _GUARD_BITS

_MINOR_AGREEMENT = 1e-9
_DEPENDENCE_FLOOR = 1e-9


def is_unit(x: AlgebraicInt) -> bool:
    """Exact test |N(x)| = 1."""
    return abs(x.norm()) == 1


# ---------------------------------------------------------------------------
# continued fractions for real quadratic fields


def _below_sqrt(x: int, D: int) -> bool:
    """x < sqrt(D), exactly (D not a perfect square, so never equal)."""
    return x < 0 or x * x < D


def _floor_surd(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt(D)) / Q) for integers with D a positive nonsquare."""
    a = (P + math.isqrt(D)) // Q  # within a couple of the answer

    def le(c):  # c <= (P + sqrt(D))/Q
        lhs = c * Q - P
        return _below_sqrt(lhs, D) if Q > 0 else not _below_sqrt(lhs, D)

    while le(a + 1):
        a += 1
    while not le(a):
        a -= 1
    return a


def quadratic_fundamental_unit(field: NumberField) -> AlgebraicInt:
    """Fundamental unit of Z[theta] for a real quadratic field.

    Runs the continued-fraction expansion of theta with exact integer
    state (P, Q); the first repeated state closes the period and the
    corresponding convergent Moebius matrix G fixes theta, so
    u = G[1][0]*theta + G[1][1] is a unit with |N(u)| = |det G| = 1 and
    minimal period, hence fundamental.  The result is normalised so that
    its image under the largest embedding exceeds 1.
    """
    if field.degree != 2:
        raise ValidationError("continued-fraction unit search requires degree 2")
    c0, c1, _ = field.min_poly.coeffs
    D = c1 * c1 - 4 * c0
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise ValidationError("discriminant must be a positive nonsquare")
    P, Q = -c1, 2
    # convergents: theta = (h1*alpha_j + h0) / (k1*alpha_j + k0)
    h1, h0, k1, k0 = 1, 0, 0, 1
    seen: dict[tuple[int, int], tuple[int, int, int, int]] = {}
    for _ in range(10 ** 7):
        state = (P, Q)
        if state in seen:
            a1, a0, b1, b0 = seen[state]
            # G = M_now * M_first^{-1}
            det = a1 * b0 - a0 * b1
            inv = (b0 * det, -a0 * det, -b1 * det, a1 * det)  # det in {1,-1}
            C = k1 * inv[0] + k0 * inv[2]
            Dg = k1 * inv[1] + k0 * inv[3]
            u = field.element([Dg, C])
            break
        seen[state] = (h1, h0, k1, k0)
        a = _floor_surd(P, D, Q)
        P = a * Q - P
        Q = (D - P * P) // Q
        h1, h0 = a * h1 + h0, h1
        k1, k0 = a * k1 + k0, k1
    else:
        raise ValidationError("continued fraction did not become periodic")
    if abs(u.norm()) != 1:
        raise ValidationError("internal error: automorph is not a unit")
    # pick the representative with sigma_max > 1 among {u, -u, u^-1, -u^-1}
    inv_coords = field.inverse_coords_rational(u.coords)
    u_inv = field.element([int(c) for c in inv_coords])
    for cand in (u, -u, u_inv, -u_inv):
        if cand.embed_mp()[-1] > 1:
            return cand
    raise ValidationError("internal error: no candidate exceeds 1")


# ---------------------------------------------------------------------------
# unit systems


@dataclass(frozen=True)
class UnitSystem:
    """An independent system of units with its log-lattice data."""

    field: NumberField
    units: tuple[AlgebraicInt, ...]
    w: int
    log_matrix: np.ndarray  # r x (r1 + r2), entries log|sigma_j(eps_i)|
    regulator: float
    log_volume: float

    @property
    def rank(self) -> int:
        return len(self.units)


def build_unit_system(field: NumberField, units=None, w: int = 2,
                      expected_regulator: float | None = None,
                      regulator_rtol: float = 1e-6) -> UnitSystem:
    """Validate a fundamental system of units and compute its regulator.

    ``units`` may be omitted for degree-2 fields, in which case the
    continued-fraction unit is used.  The regulator is the absolute
    determinant of the minor of the log matrix dropping the last column;
    agreement with the minor dropping the first column is checked as a
    free consistency test.
    """
    r1, r2 = field.signature
    rank = r1 + r2 - 1
    if w != 2:
        raise ValidationError(f"totally real fields have w = 2 roots of unity, got {w}")
    if units is None:
        if field.degree != 2:
            raise WrongRank(
                f"no units supplied and degree {field.degree} > 2; expected {rank} units"
            )
        units = [quadratic_fundamental_unit(field)]
    units = [u if isinstance(u, AlgebraicInt) else field.element(u) for u in units]
    if len(units) != rank:
        raise WrongRank(f"got {len(units)} units, expected rank r1+r2-1 = {rank}")
    for u in units:
        if abs(u.norm()) != 1:
            raise NotAUnit(f"|N{u.coords}| = {abs(u.norm())} != 1")
    with mpmath.workprec(field.precision_bits + _GUARD_BITS):
        rows = []
        for u in units:
            rows.append([float(mpmath.log(abs(v))) for v in u.embed_mp()])
    A = np.array(rows)
    row_sums = np.abs(A.sum(axis=1))
    if row_sums.max() > 1e-8:
        raise NotAUnit(f"log rows do not sum to zero (max {row_sums.max():.2e})")
    reg = abs(np.linalg.det(A[:, :rank]))
    reg_alt = abs(np.linalg.det(A[:, 1:]))
    if reg < _DEPENDENCE_FLOOR:
        raise DependentUnits("regulator below 1e-9; units are multiplicatively dependent")
    if abs(reg - reg_alt) > _MINOR_AGREEMENT * max(1.0, reg):
        raise DependentUnits(
            f"minor determinants disagree: {reg!r} vs {reg_alt!r}"
        )
    if expected_regulator is not None:
        if abs(reg - expected_regulator) > regulator_rtol * max(1.0, abs(expected_regulator)):
            raise RegulatorMismatch(
                f"computed regulator {reg!r} differs from expected {expected_regulator!r}"
            )
    log_volume = reg * math.sqrt(r1 + r2)
    return UnitSystem(field, tuple(units), w, A, reg, log_volume)
