"""Dense polynomials over F_q((T)): arithmetic, Newton polygons, resultants."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError, Inseparable, InsufficientPrecision
from .series import TruncatedSeries, make_series


class SeriesPoly:
    """Polynomial with TruncatedSeries coefficients, lowest degree first.

    Trailing exact zeros are stripped; a polynomial whose would-be leading
    coefficient is only "zero at precision" keeps it, and degree-sensitive
    operations raise InsufficientPrecision.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_exact_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def x_pow(cls, field, k, scale=None):
        coeffs = [field.zero()] * k + [field.one() if scale is None else scale]
        return cls(field, coeffs)

    def with_field(self, field, coeff_map):
        return SeriesPoly(field, [coeff_map(c) for c in self.coeffs])

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return all(c.known_zero_at_precision() for c in self.coeffs)

    def degree(self):
        """Certified degree; raises when the leading coefficient is uncertified."""
        if not self.coeffs:
            return -1
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.codes:
                return i
            if c.is_lazy_zero():
                raise InsufficientPrecision(
                    f"degree-{i} coefficient is zero modulo O(T^{c.prec})")
        return -1

    def leading(self):
        d = self.degree()
        if d < 0:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[d]

    def is_monic(self):
        """Leading coefficient equal to 1 as far as it is known."""
        d = self.degree()
        if d < 0:
            return False
        lc = self.coeffs[d]
        return (lc.v == 0 and lc.codes[0] == 1
                and all(c == 0 for c in lc.codes[1:]))

    def force_monic_leading(self):
        """Replace a known-equal-to-1 leading coefficient by the exact 1.

        Only legitimate when monicity is guaranteed structurally (e.g. Hensel
        factors of a monic polynomial); raises otherwise.
        """
        d = self.degree()
        if d < 0 or not self.is_monic():
            raise InputError("leading coefficient is not a known 1")
        coeffs = list(self.coeffs[:d + 1])
        coeffs[d] = self.field.one()
        return SeriesPoly(self.field, coeffs)

    def coeff(self, i):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def trimmed(self):
        """Drop trailing lazy zeros (degree becomes whatever is certified)."""
        coeffs = list(self.coeffs)
        while coeffs and coeffs[-1].known_zero_at_precision():
            coeffs.pop()
        return SeriesPoly(self.field, coeffs)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly(self.field,
                          [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return SeriesPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return SeriesPoly(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return SeriesPoly(self.field, out)

    def scale(self, s):
        return SeriesPoly(self.field, [c * s for c in self.coeffs])

    def shift_x(self, k):
        """Multiply by x^k."""
        return SeriesPoly(self.field, [self.field.zero()] * k + list(self.coeffs))

    def divmod(self, other):
        """Division with remainder; the divisor's leading must be certified."""
        d_other = other.degree()
        if d_other < 0:
            raise ZeroDivisionError("polynomial division by zero")
        lc_inv = other.coeffs[d_other].inv()
        rem = list(self.coeffs)
        if len(rem) - 1 < d_other:
            return SeriesPoly(self.field, []), SeriesPoly(self.field, rem)
        quo = [self.field.zero()] * (len(rem) - d_other)
        for i in range(len(rem) - 1, d_other - 1, -1):
            c = rem[i]
            if c.known_zero_at_precision():
                continue
            f = c * lc_inv
            quo[i - d_other] = f
            for j in range(d_other + 1):
                rem[i - d_other + j] = rem[i - d_other + j] - f * other.coeffs[j]
            rem[i] = self.field.zero()
        return SeriesPoly(self.field, quo), SeriesPoly(self.field, rem[:d_other])

    def __pow__(self, e):
        acc = SeriesPoly(self.field, [self.field.one()])
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def eval(self, x):
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(self.coeffs[i] * self.field.from_int(i))
        return SeriesPoly(self.field, out)

    def compose_linear(self, a):
        """f(x + a) by Horner in the polynomial ring (no factorials: char p safe)."""
        field = self.field
        acc = SeriesPoly(field, [])
        shift = SeriesPoly(field, [a, field.one()])
        for c in reversed(self.coeffs):
            acc = acc * shift + SeriesPoly(field, [c])
        return acc

    def scale_x(self, s):
        """f(s*x)."""
        out = []
        p = self.field.one()
        for c in self.coeffs:
            out.append(c * p)
            p = p * s
        return SeriesPoly(self.field, out)

    def map_coeffs(self, fn, new_field=None):
        field = new_field if new_field is not None else self.field
        return SeriesPoly(field, [fn(c) for c in self.coeffs])

    def truncate_coeffs(self, prec):
        return SeriesPoly(self.field, [c.truncate(prec) for c in self.coeffs])

    def same_value(self, other, prec=None):
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(i).same_value(other.coeff(i), prec) for i in range(n))

    def __eq__(self, other):
        return (isinstance(other, SeriesPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        from .series import format_series
        if not self.coeffs:
            return "poly(0)"
        terms = [f"({format_series(c)})*x^{i}" for i, c in enumerate(self.coeffs)
                 if not c.is_exact_zero()]
        return "poly(" + " + ".join(terms) + ")"


# -- Newton polygon ----------------------------------------------------------

class NewtonPolygon:
    """Lower convex hull data: [(slope, horizontal length)], slopes increasing."""

    __slots__ = ("segments", "points")

    def __init__(self, segments, points):
        self.segments = tuple(segments)
        self.points = tuple(points)

    def __eq__(self, other):
        return isinstance(other, NewtonPolygon) and self.segments == other.segments

    def __repr__(self):
        return f"NewtonPolygon({list(self.segments)})"


def newton_polygon(f):
    """Newton polygon of a polynomial (lower hull of (i, v(a_i))).

    Coefficients that are lazy zeros are sound to ignore only if their
    precision bound keeps them above the hull; otherwise the hull is not
    certified and InsufficientPrecision is raised.
    """
    pts = []
    lazy = []
    for i, c in enumerate(f.coeffs):
        if c.codes:
            pts.append((i, c.v))
        elif c.is_lazy_zero():
            lazy.append((i, c.prec))
    if not pts:
        raise InputError("newton polygon of the zero polynomial")
    # lower convex hull, left to right
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    # certify lazy points sit on or above the hull
    for (i, bound) in lazy:
        if _below_hull(hull, i, bound):
            raise InsufficientPrecision(
                f"coefficient {i} known only modulo O(T^{bound}): polygon uncertified")
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segments.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(segments, hull)


def _below_hull(hull, x, y):
    """Could the point (x, y') with y' < y... i.e. is (x, y) strictly below the hull?"""
    if x <= hull[0][0] or x >= hull[-1][0]:
        if x == hull[0][0]:
            return y < hull[0][1]
        if x == hull[-1][0]:
            return y < hull[-1][1]
        return False
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            hull_y = Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
            if Fraction(y) < hull_y:
                return True
    return False


def is_eisenstein(f):
    """Monic, v(a_i) >= 1 below the top, v(a_0) = 1."""
    d = f.degree()
    if d < 1 or not f.is_monic():
        return False
    for i in range(d):
        c = f.coeff(i)
        if c.codes:
            v = c.v
        elif c.is_exact_zero():
            v = None
        else:
            if c.prec < (2 if i == 0 else 1):
                raise InsufficientPrecision(
                    f"coefficient {i} undetermined at the Eisenstein threshold")
            v = None
        if i == 0:
            if v != 1:
                return False
        elif v is not None and v < 1:
            return False
    return True


def resultant(f, g):
    """Resultant via the Sylvester matrix and a division-free determinant."""
    from .linalg import det_berkowitz
    m, n = f.degree(), g.degree()
    field = f.field
    if m < 0 or n < 0:
        return field.zero()
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        row = [field.zero()] * size
        for j, c in enumerate(f.coeffs):
            row[i + (m - j)] = c
        rows.append(row)
    for i in range(m):
        row = [field.zero()] * size
        for j, c in enumerate(g.coeffs):
            row[i + (n - j)] = c
        rows.append(row)
    return det_berkowitz(rows)


def discriminant_valuation(f):
    """v(resultant(f, f')); raises Inseparable when f' = 0."""
    d = f.derivative()
    if d.is_zero():
        raise Inseparable("derivative is identically zero")
    r = resultant(f, d)
    v = r.valuation()
    if v is None:
        raise Inseparable("resultant(f, f') is zero: f is not squarefree")
    return v


def gauss_valuation(f, weight=Fraction(0)):
    """min_i (v(a_i) + weight*i) over certified coefficients."""
    best = None
    for i, c in enumerate(f.coeffs):
        if c.codes:
            val = Fraction(c.v) + weight * i
            if best is None or val < best:
                best = val
    return best


def poly_content_shift(f):
    """Largest k with T^(-k) f integral... i.e. min coefficient valuation."""
    return gauss_valuation(f)
