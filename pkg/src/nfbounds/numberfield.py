"""Exact arithmetic in the order Z[theta] of a totally real number field.

The field is described by a monic squarefree integer polynomial; its real
roots are isolated with exact Sturm counts and refined to a configurable
working precision (default 80 bits) with a certified enclosure, so that
all later boundary decisions (box membership, heights) can fall back on
a rigorous high-precision value.  Norms are always computed by exact
integer arithmetic, never by rounding a floating product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import EmptyInput, NotMonic, NotSquarefree, NotTotallyReal, ValidationError

DEFAULT_PRECISION_BITS = 80

# extra mantissa bits used internally on top of the requested precision
_GUARD_BITS = 24


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (coefficients ascending)


def _poly_eval(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs):
    return tuple(i * c for i, c in enumerate(coeffs))[1:]


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _primitive(coeffs):
    """Scale a rational polynomial by a positive constant to a primitive
    integer polynomial (sign pattern preserved)."""
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    ints = [int(c * den) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return ints


def _poly_rem(a, b):
    """Remainder of a by b over Q (b nonempty, exact)."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        q = a[-1] / b[-1]
        off = len(a) - 1 - db
        for j, bj in enumerate(b):
            a[off + j] -= q * bj
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _gcd_degree(a, b):
    """Degree of gcd(a, b) over Q."""
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_trim(_poly_rem(a, b))
    return len(a) - 1


def _sylvester_resultant(a, b):
    """Resultant of two integer polynomials by fraction-free elimination."""
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(a)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(b)) + [0] * (m - 1 - i))
    # Bareiss
    sign, prev = 1, 1
    for k in range(size - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, size):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[size - 1][size - 1]


def _int_det(rows):
    """Exact determinant of a small integer matrix (Bareiss)."""
    n = len(rows)
    rows = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for r in range(k + 1, n):
                if rows[r][k] != 0:
                    rows[k], rows[r] = rows[r], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1]


# ---------------------------------------------------------------------------
# polynomial type


@dataclass(frozen=True)
class Polynomial:
    """Monic squarefree integer polynomial, coefficients ascending."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 3:
            raise ValidationError("polynomial degree must be at least 2")
        if coeffs[-1] != 1:
            raise NotMonic(f"leading coefficient is {coeffs[-1]}, expected 1")
        if coeffs[0] == 0:
            raise ValidationError("constant coefficient must be nonzero")
        if _gcd_degree(coeffs, _poly_derivative(coeffs)) > 0:
            raise NotSquarefree("polynomial has a repeated factor over Q")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return _poly_eval(self.coeffs, x)

    def derivative_coeffs(self) -> tuple[int, ...]:
        return _poly_derivative(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(reversed(terms)).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# certified real root isolation (Sturm counts + bisection + safeguarded Newton)


def _sturm_chain(coeffs):
    chain = [_primitive([Fraction(c) for c in coeffs])]
    d = _poly_trim(_poly_derivative(coeffs))
    if d:
        chain.append(_primitive([Fraction(c) for c in d]))
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        rem = _poly_trim(rem)
        if not rem:
            break
        chain.append(_primitive([-c for c in rem]))
    return chain


def _sign_variations(chain, x):
    signs = []
    for poly in chain:
        v = _poly_eval(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _root_bound(coeffs):
    lead = abs(coeffs[-1])
    return 1 + max(abs(c) for c in coeffs[:-1]) // lead + 1


def count_real_roots(coeffs) -> int:
    """Number of distinct real roots of a squarefree integer polynomial."""
    chain = _sturm_chain(coeffs)
    bound = Fraction(_root_bound(coeffs))
    return _sign_variations(chain, -bound) - _sign_variations(chain, bound)


def _isolate(coeffs):
    """Disjoint rational intervals each containing exactly one real root.

    Endpoints are non-roots except for exact integer roots, which are
    returned as zero-width intervals.
    """
    chain = _sturm_chain(coeffs)
    bound = Fraction(_root_bound(coeffs))
    total = _sign_variations(chain, -bound) - _sign_variations(chain, bound)
    intervals = []
    stack = [(-bound, bound, total)]
    while stack:
        lo, hi, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1 and _poly_eval(coeffs, lo) * _poly_eval(coeffs, hi) < 0:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _poly_eval(coeffs, mid) == 0:
            intervals.append((mid, mid))
            # nudge around the exact root before recursing
            width = hi - lo
            eps = width / (1 << 12)
            left = mid - eps
            right = mid + eps
            while _poly_eval(coeffs, left) == 0:
                left = (lo + left) / 2
            while _poly_eval(coeffs, right) == 0:
                right = (right + hi) / 2
            c_left = _sign_variations(chain, lo) - _sign_variations(chain, left)
            c_right = _sign_variations(chain, right) - _sign_variations(chain, hi)
            stack.append((lo, left, c_left))
            stack.append((right, hi, c_right))
        else:
            c_left = _sign_variations(chain, lo) - _sign_variations(chain, mid)
            stack.append((lo, mid, c_left))
            stack.append((mid, hi, cnt - c_left))
    intervals.sort()
    assert len(intervals) == total
    return intervals


def _mpf_to_fraction(x):
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * (Fraction(1 << exp) if exp >= 0 else Fraction(1, 1 << -exp))
    return -v if sign else v


def _refine(coeffs, lo, hi, prec_bits):
    """Shrink an isolating interval to relative width 2^-prec_bits.

    Newton steps accelerate plain bisection; every bracket update uses an
    exact rational sign evaluation, so the enclosure stays certified.
    Returns (root as mpf, halfwidth as float).
    """
    if lo == hi:
        with mpmath.workprec(prec_bits + _GUARD_BITS):
            return mpmath.mpf(lo.numerator) / lo.denominator, 0.0
    dcoeffs = _poly_derivative(coeffs)
    sign_lo = 1 if _poly_eval(coeffs, lo) > 0 else -1
    scale = max(1, abs(lo), abs(hi))
    target = Fraction(1, 1 << (prec_bits + 4)) * scale
    with mpmath.workprec(prec_bits + _GUARD_BITS):
        while hi - lo > target:
            x = mpmath.mpf((lo + hi).numerator) / (lo + hi).denominator / 2
            fx = _poly_eval(coeffs, x)
            fpx = _poly_eval(dcoeffs, x)
            cand = None
            if fpx != 0:
                step = x - fx / fpx
                cand = _mpf_to_fraction(step) if mpmath.isfinite(step) else None
            mid = (lo + hi) / 2
            probe = cand if cand is not None and lo < cand < hi else mid
            v = _poly_eval(coeffs, probe)
            if v == 0:
                lo = hi = probe
                break
            if (1 if v > 0 else -1) == sign_lo:
                lo = probe
            else:
                hi = probe
            # a Newton probe may barely move; force geometric progress
            if hi - lo > target:
                mid = (lo + hi) / 2
                v = _poly_eval(coeffs, mid)
                if v == 0:
                    lo = hi = mid
                    break
                if (1 if v > 0 else -1) == sign_lo:
                    lo = mid
                else:
                    hi = mid
        center = (lo + hi) / 2
        root = mpmath.mpf(center.numerator) / center.denominator
        half = float(Fraction(hi - lo) / 2)
    return root, half


def real_roots(poly, precision: float = 1e-15):
    """All real roots of a squarefree polynomial, sorted ascending.

    Each root is returned as an mpmath float whose certified absolute
    error is below ``precision * max(1, |root|)``.
    """
    coeffs = poly.coeffs if isinstance(poly, Polynomial) else tuple(int(c) for c in poly)
    if _gcd_degree(coeffs, _poly_derivative(coeffs)) > 0:
        raise NotSquarefree("root isolation requires a squarefree polynomial")
    prec_bits = max(DEFAULT_PRECISION_BITS, int(-math.log2(precision)) + 8)
    roots = []
    for lo, hi in _isolate(coeffs):
        root, _ = _refine(coeffs, lo, hi, prec_bits)
        roots.append(root)
    return roots


# ---------------------------------------------------------------------------
# number field and elements


class NumberField:
    """A totally real field Q(theta) together with the order Z[theta].

    Instances are immutable after construction and safe to share across
    threads; all element operations are pure functions of (field, coords).
    """

    def __init__(self, min_poly: Polynomial, embeddings_mp, root_error: float,
                 assume_maximal_order: bool, precision_bits: int, label: str = ""):
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self.embeddings_mp = tuple(embeddings_mp)
        self.embeddings = np.array([float(r) for r in embeddings_mp])
        self.root_error = root_error
        self.signature = (self.degree, 0)
        self.assume_maximal_order = bool(assume_maximal_order)
        self.precision_bits = int(precision_bits)
        self.label = label or str(min_poly)
        n = self.degree
        # Vandermonde of embeddings: row i holds sigma_i(theta)^j
        self.embedding_matrix = np.vander(self.embeddings, n, increasing=True)
        # theta^(n+t) reduced to the power basis, exact integers
        red = [list(-c for c in min_poly.coeffs[:n])]
        for _ in range(n - 2):
            nxt = [0] + red[-1][: n - 1]
            lead = red[-1][n - 1]
            if lead:
                for j in range(n):
                    nxt[j] += lead * -min_poly.coeffs[j]
            red.append(nxt)
        self._reduction_rows = tuple(tuple(r) for r in red)
        # multiplication-by-theta^j matrices (columns act on the power basis)
        mats = [[[1 if i == j else 0 for j in range(n)] for i in range(n)]]
        for _ in range(n - 1):
            prev = mats[-1]
            nxt = [[0] * n for _ in range(n)]
            for col in range(n):
                vec = [prev[row][col] for row in range(n)]
                shifted = [0] + vec[: n - 1]
                lead = vec[n - 1]
                if lead:
                    for j in range(n):
                        shifted[j] += lead * -min_poly.coeffs[j]
                for row in range(n):
                    nxt[row][col] = shifted[row]
            mats.append(nxt)
        self._power_mul_mats = tuple(tuple(tuple(r) for r in m) for m in mats)

    @property
    def poly_discriminant(self) -> int:
        return _poly_discriminant_cached(self.min_poly.coeffs)

    def element(self, coords) -> "AlgebraicInt":
        return AlgebraicInt(self, tuple(int(c) for c in coords))

    def zero(self) -> "AlgebraicInt":
        return self.element([0] * self.degree)

    def one(self) -> "AlgebraicInt":
        return self.element([1] + [0] * (self.degree - 1))

    def theta(self) -> "AlgebraicInt":
        return self.element([0, 1] + [0] * (self.degree - 2))

    def key(self):
        return (self.min_poly.coeffs, self.precision_bits)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"NumberField({self.label!r}, degree={self.degree})"

    # -- exact ring helpers ------------------------------------------------

    def mul_coords(self, a, b):
        n = self.degree
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = prod[:n]
        for t in range(n - 1):
            c = prod[n + t]
            if c:
                row = self._reduction_rows[t]
                for j in range(n):
                    out[j] += c * row[j]
        return tuple(out)

    def norm_coords(self, coords) -> int:
        n = self.degree
        rows = [[0] * n for _ in range(n)]
        for j, cj in enumerate(coords):
            if cj:
                mat = self._power_mul_mats[j]
                for r in range(n):
                    for c in range(n):
                        rows[r][c] += cj * mat[r][c]
        return _int_det(rows)

    def inverse_coords_rational(self, coords):
        """Coordinates of 1/x over Q, via the extended Euclidean algorithm
        against the minimal polynomial.  Raises on zero divisors."""
        f = [Fraction(c) for c in self.min_poly.coeffs]
        g = [Fraction(c) for c in coords]
        if not _poly_trim(g):
            raise ZeroDivisionError("inverse of zero")
        # maintain s*g == r (mod f)
        r0, s0 = f, [Fraction(0)]
        r1, s1 = _poly_trim(g), [Fraction(1)]
        while len(r1) > 1:
            # quotient of r0 by r1
            q = [Fraction(0)] * (len(r0) - len(r1) + 1)
            rem = [Fraction(c) for c in r0]
            while len(rem) >= len(r1) and _poly_trim(rem):
                k = len(rem) - len(r1)
                coef = rem[-1] / r1[-1]
                q[k] = coef
                for j, cj in enumerate(r1):
                    rem[k + j] -= coef * cj
                rem.pop()
                rem = _poly_trim(rem) or [Fraction(0)]
            rem = _poly_trim(rem)
            # s_next = s0 - q*s1
            qs = [Fraction(0)] * (len(q) + len(s1) - 1)
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs[i + j] += qi * sj
            s_next = [Fraction(0)] * max(len(s0), len(qs))
            for i, c in enumerate(s0):
                s_next[i] += c
            for i, c in enumerate(qs):
                s_next[i] -= c
            r0, s0, r1, s1 = r1, s1, (rem or [Fraction(0)]), _poly_trim(s_next) or [Fraction(0)]
        if not _poly_trim(r1):
            raise ZeroDivisionError("element is a zero divisor (polynomial not irreducible?)")
        const = r1[0]
        inv = [c / const for c in s1]
        inv += [Fraction(0)] * (self.degree - len(inv))
        return inv[: self.degree]

    def divide_exact(self, x: "AlgebraicInt", y: "AlgebraicInt"):
        """x / y when the quotient lies in Z[theta], else None."""
        inv = self.inverse_coords_rational(y.coords)
        n = self.degree
        acc = [Fraction(0)] * (2 * n - 1)
        for i, xi in enumerate(x.coords):
            if xi:
                for j, cj in enumerate(inv):
                    acc[i + j] += xi * cj
        out = acc[:n]
        for t in range(n - 1):
            c = acc[n + t]
            if c:
                row = self._reduction_rows[t]
                for j in range(n):
                    out[j] += c * row[j]
        if any(c.denominator != 1 for c in out):
            return None
        return self.element([int(c) for c in out])


@lru_cache(maxsize=64)
def _poly_discriminant_cached(coeffs):
    n = len(coeffs) - 1
    res = _sylvester_resultant(list(coeffs), list(_poly_trim(_poly_derivative(coeffs))))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res


@dataclass(frozen=True)
class AlgebraicInt:
    """Element of Z[theta] as an integer vector over the power basis."""

    field: NumberField
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise ValidationError(
                f"coordinate vector has length {len(self.coords)}, expected {self.field.degree}"
            )

    def is_zero(self) -> bool:
        return not any(self.coords)

    def embed(self) -> np.ndarray:
        return self.field.embedding_matrix @ np.array(self.coords, dtype=float)

    def embed_mp(self):
        with mpmath.workprec(self.field.precision_bits + _GUARD_BITS):
            return [_poly_eval(self.coords, r) for r in self.field.embeddings_mp]

    def norm(self) -> int:
        return self.field.norm_coords(self.coords)

    def height(self) -> float:
        if self.is_zero():
            return 0.0
        return float(max(abs(v) for v in self.embed_mp()))

    def __add__(self, other):
        self._check(other)
        return AlgebraicInt(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraicInt(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraicInt(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicInt(self.field, tuple(a * other for a in self.coords))
        self._check(other)
        return AlgebraicInt(self.field, self.field.mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValidationError("negative powers are not closed in Z[theta]; divide explicitly")
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _check(self, other):
        if self.field != other.field:
            raise ValidationError("elements belong to different fields")

    def __repr__(self):
        return f"AlgebraicInt{self.coords}"


# ---------------------------------------------------------------------------
# module-level operations


def parse_field(poly: Polynomial, assume_maximal_order: bool = True,
                precision_bits: int = DEFAULT_PRECISION_BITS, label: str = "") -> NumberField:
    """Construct the field, certifying that every root of ``poly`` is real."""
    if not isinstance(poly, Polynomial):
        poly = Polynomial(tuple(int(c) for c in poly))
    n = poly.degree
    n_real = count_real_roots(poly.coeffs)
    if n_real < n:
        raise NotTotallyReal(
            f"{poly} has {n_real} real roots out of degree {n}; field is not totally real"
        )
    roots = []
    err = 0.0
    for lo, hi in _isolate(poly.coeffs):
        root, half = _refine(poly.coeffs, lo, hi, precision_bits)
        roots.append(root)
        err = max(err, half)
    roots.sort()
    return NumberField(poly, roots, err, assume_maximal_order, precision_bits, label)


def embed(x: AlgebraicInt) -> np.ndarray:
    """Vector of real-embedding images of x."""
    return x.embed()


def norm(x: AlgebraicInt) -> int:
    """Exact field norm (product of all embedding images)."""
    return x.norm()


def height(x: AlgebraicInt) -> float:
    """Largest absolute embedding image; 0 only for x = 0."""
    return x.height()


def min_product_distance(points) -> int:
    """Smallest |norm| over a nonempty collection of nonzero elements."""
    points = list(points)
    if not points:
        raise EmptyInput("minimum product distance of an empty set")
    best = None
    for x in points:
        if x.is_zero():
            raise ValidationError("minimum product distance is over nonzero points")
        v = abs(x.norm())
        best = v if best is None else min(best, v)
    return best
