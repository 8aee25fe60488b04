"""Ideal-count Dirichlet coefficients and zeta-style sums.

Coefficients a_k (number of integral ideals of norm k) are produced by
factoring the minimal polynomial modulo each prime and expanding the
local Euler factors through a sieve.  Only the *degrees* of the distinct
irreducible factors matter, so a distinct-degree factorization on the
radical of f mod p is enough; full factorization is never performed.

Evaluations of the zeta function, its derivatives, and the bounded-height
variant are finite partial sums with a doubling-based tail estimate
attached.  The caller decides how much tail risk to accept; a hard floor
of N >= 10^4 is enforced for s = 2, where convergence is slowest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffTooSmall, NotPrime, ValidationError
from .numberfield import NumberField

_HARD_FLOOR_S2 = 10 ** 4

# ---------------------------------------------------------------------------
# arithmetic mod p on dense coefficient lists (ascending, small degree)


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _gf_rem(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        q = a[-1] * inv % p
        if q:
            off = len(a) - 1 - db
            for j, bj in enumerate(b):
                a[off + j] = (a[off + j] - q * bj) % p
        a.pop()
        _trim(a)
    return a


def _gf_divexact(a, b, p):
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        off = len(a) - 1 - db
        q[off] = c
        if c:
            for j, bj in enumerate(b):
                a[off + j] = (a[off + j] - c * bj) % p
        a.pop()
        _trim(a)
    return q


def _gf_monic(a, p):
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def _gf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _gf_rem(a, b, p)
    return _gf_monic(a, p)


def _gf_deriv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _gf_radical(a, p):
    """Product of the distinct monic irreducible factors of a mod p."""
    a = _gf_monic(a, p)
    rad = [1]
    while len(a) > 1:
        da = _gf_deriv(a, p)
        if not da:
            # a = h(x^p) = h(x)^p over F_p: same distinct factors as h
            a = _trim([a[i] for i in range(0, len(a), p)])
            continue
        g = _gf_gcd(a, da, p)
        w = _gf_divexact(a, g, p)  # each factor with multiplicity prime to p, once
        fresh = _gf_divexact(w, _gf_gcd(rad, w, p), p)
        rad = _gf_mul(rad, fresh, p)
        while True:
            d = _gf_gcd(a, w, p)
            if len(d) <= 1:
                break
            a = _gf_divexact(a, d, p)
    return rad


def _gf_pow_mod(a, e, m, p):
    r = [1]
    a = _gf_rem(list(a), m, p)
    while e:
        if e & 1:
            r = _gf_rem(_gf_mul(r, a, p), m, p)
        e >>= 1
        if e:
            a = _gf_rem(_gf_mul(a, a, p), m, p)
    return r


def _distinct_degrees(sqf, p):
    """Degrees (with repetition) of irreducible factors of a squarefree poly."""
    degs = []
    v = list(sqf)
    h = _gf_rem([0, 1], v, p)
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_pow_mod(h, p, v, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _gf_gcd(_trim(diff), v, p)
        if len(g) > 1:
            degs += [d] * ((len(g) - 1) // d)
            v = _gf_divexact(v, g, p)
            if len(v) > 1:
                h = _gf_rem(h, v, p)
    if len(v) > 1:
        degs.append(len(v) - 1)
    return sorted(degs)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# splitting types and Dirichlet coefficients


@dataclass(frozen=True)
class SplittingType:
    """Residue degrees of the distinct prime ideals above p."""

    p: int
    factor_degrees: tuple[int, ...]
    ramified: bool


def splitting_type(field: NumberField, p: int) -> SplittingType:
    """Factor-degree multiset of min_poly mod p (one entry per prime ideal)."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    fp = [c % p for c in field.min_poly.coeffs]
    rad = _gf_radical(fp, p)
    ramified = (len(rad) - 1) < field.degree
    degs = tuple(_distinct_degrees(rad, p))
    if not ramified:
        assert sum(degs) == field.degree
    return SplittingType(p, degs, ramified)


@dataclass(frozen=True)
class ZetaSeries:
    """Dirichlet coefficients a_1..a_N of the field's ideal-count series."""

    field: NumberField
    cutoff: int
    a: np.ndarray  # int64, a[0] unused

    def coefficient(self, k: int) -> int:
        if not 1 <= k <= self.cutoff:
            raise ValidationError(f"k = {k} outside 1..{self.cutoff}")
        return int(self.a[k])


def _primes_upto(N: int) -> np.ndarray:
    sieve = np.ones(N + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(N) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


_series_cache: dict[tuple, np.ndarray] = {}


def dirichlet_coeffs(field: NumberField, N: int) -> ZetaSeries:
    """Ideal counts a_k for k <= N via local Euler factors and a sieve."""
    if N < 1:
        raise ValidationError("cutoff must be >= 1")
    for (key, cached_n), arr in _series_cache.items():
        if key == field.key() and cached_n >= N:
            return ZetaSeries(field, N, arr[: N + 1])
    a = np.zeros(N + 1, dtype=np.int64)
    a[1] = 1
    if N >= 2:
        for p in _primes_upto(N):
            p = int(p)
            degs = splitting_type(field, p).factor_degrees
            if p ** min(degs) > N:
                continue
            vmax, pv = 0, 1
            while pv * p <= N:
                pv *= p
                vmax += 1
            # coefficients of prod_i (1 - x^{f_i})^{-1} up to x^vmax
            local = [0] * (vmax + 1)
            local[0] = 1
            for f_i in degs:
                if f_i > vmax:
                    continue
                for v in range(f_i, vmax + 1):
                    local[v] += local[v - f_i]
            base = a[: N // p + 1].copy()
            for v in range(1, vmax + 1):
                if local[v]:
                    pv = p ** v
                    a[pv::pv] += local[v] * base[1 : N // pv + 1]
    _series_cache[(field.key(), N)] = a
    # keep only the largest array per field
    stale = [k for k in _series_cache if k[0] == field.key() and k[1] < N]
    for k in stale:
        del _series_cache[k]
    return ZetaSeries(field, N, a)


# ---------------------------------------------------------------------------
# evaluations


@dataclass(frozen=True)
class SeriesValue:
    """A partial sum together with a doubling-based tail estimate."""

    value: float
    tail_estimate: float
    cutoff: int

    def __float__(self):
        return self.value


def zeta_value(series: ZetaSeries, s: int, tolerance: float | None = None) -> SeriesValue:
    """Partial sum of the ideal-count Dirichlet series at integer s >= 2."""
    if s < 2:
        raise ValidationError("evaluation requires integer s >= 2")
    if s == 2 and series.cutoff < _HARD_FLOOR_S2:
        raise CutoffTooSmall(
            f"s = 2 requires cutoff >= {_HARD_FLOOR_S2}, got {series.cutoff}"
        )
    N = series.cutoff
    ks = np.arange(1, N + 1, dtype=float)
    terms = series.a[1:].astype(float) / ks ** s
    total = float(terms.sum())
    half = float(terms[: N // 2].sum())
    tail = abs(total - half)
    if tolerance is not None and tail > tolerance:
        raise CutoffTooSmall(
            f"tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e} at cutoff {N}"
        )
    return SeriesValue(total, tail, N)


def zeta_derivative(series: ZetaSeries, m: int, s: int,
                    tolerance: float | None = None) -> SeriesValue:
    """m-th derivative of the series in s: (-1)^m sum a_k (log k)^m / k^s."""
    if m < 0:
        raise ValidationError("derivative order must be >= 0")
    if m == 0:
        return zeta_value(series, s, tolerance)
    if s < 2:
        raise ValidationError("evaluation requires integer s >= 2")
    N = series.cutoff
    ks = np.arange(1, N + 1, dtype=float)
    terms = series.a[1:].astype(float) * np.log(ks) ** m / ks ** s
    total = float(terms.sum())
    half = float(terms[: N // 2].sum())
    tail = abs(total - half)
    if tolerance is not None and tail > tolerance:
        raise CutoffTooSmall(
            f"tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e} at cutoff {N}"
        )
    sign = -1.0 if m % 2 else 1.0
    return SeriesValue(sign * total, tail, N)


def bounded_height_zeta(field: NumberField, unit_system, s: int, m: float) -> float:
    """Sum of 1/N(I)^s over principal ideals whose minimal-height generator
    has height <= m (class-number-one fields).

    Every generator of height <= m lies in the box of radius m, so grouping
    the box into unit orbits recovers exactly the ideals of height <= m.
    """
    if s < 2:
        raise ValidationError("evaluation requires integer s >= 2")
    if m < 1:
        return 0.0
    from .enumeration import BoxSpec, cached_orbits

    orbits = cached_orbits(field, unit_system, BoxSpec(float(m)))
    return float(sum(1.0 / orb.norm ** s for orb in orbits))
