"""Matrix algebra over F: conjugacy invariants and element classification.

Characteristic polynomials are division-free (Berkowitz); invariant factors
come from Smith reduction over F[t], where a pivot is accepted only when its
leading series coefficient is certified nonzero.
"""

from __future__ import annotations

from .errors import FactorizationIncomplete, InputError, InsufficientPrecision
from .linalg import charpoly_berkowitz, mat_mul
from .seriespoly import SeriesPoly


class ConjugacyKey:
    """Invariant factors zeta_1 | ... chain: zeta_1 the minimal polynomial."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(factors)

    def minimal(self):
        return self.factors[0]

    def same_value(self, other):
        if len(self.factors) != len(other.factors):
            return False
        return all(a.same_value(b) for a, b in zip(self.factors, other.factors))

    def __repr__(self):
        return f"ConjugacyKey({[f.degree() for f in self.factors]})"


def charpoly_matrix(mat):
    field = mat[0][0].field
    return SeriesPoly(field, charpoly_berkowitz(mat))


def char_min_invariant(mat):
    """(characteristic polynomial, ConjugacyKey) of an N x N matrix."""
    char = charpoly_matrix(mat)
    key = _invariant_factors(mat)
    return char, key


def _invariant_factors(mat):
    """Smith reduction of tI - mat over F[t]."""
    field = mat[0][0].field
    n = len(mat)
    t_matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(SeriesPoly(field, [-mat[i][j], field.one()]))
            else:
                row.append(SeriesPoly(field, [-mat[i][j]]))
        t_matrix.append(row)
    diag = _smith_over_polyring(t_matrix, field)
    factors = [d for d in diag if d.degree() >= 1]
    factors.sort(key=lambda f: -f.degree())
    return ConjugacyKey(factors)


def _poly_deg_certified(f):
    """Degree with lazy trailing coefficients stripped only when exact zero."""
    coeffs = list(f.coeffs)
    while coeffs and coeffs[-1].known_zero_at_precision():
        if coeffs[-1].is_lazy_zero():
            raise InsufficientPrecision(
                "Smith pivot degree undetermined at this precision")
        coeffs.pop()
    return len(coeffs) - 1, SeriesPoly(f.field, coeffs)


def _smith_over_polyring(a, field):
    n = len(a)
    zero_poly = SeriesPoly(field, [])
    work = [list(row) for row in a]
    diag = []
    r = 0
    outer_guard = 0
    while r < n:
        outer_guard += 1
        if outer_guard > 50 * n:
            raise InsufficientPrecision("Smith reduction did not terminate")
        # locate a minimal certified-degree pivot in the remaining block
        best, best_deg = None, None
        for i in range(r, n):
            for j in range(r, n):
                d, trimmed = _poly_deg_certified(work[i][j])
                work[i][j] = trimmed
                if d >= 0 and (best_deg is None or d < best_deg):
                    best, best_deg = (i, j), d
        if best is None:
            break
        guard = 0
        while True:
            guard += 1
            if guard > 200:
                raise InsufficientPrecision("Smith pivot loop did not terminate")
            (pi, pj) = best
            work[r], work[pi] = work[pi], work[r]
            for row in work:
                row[r], row[pj] = row[pj], row[r]
            piv = work[r][r]
            # clear column and row, writing remainders in place
            for i in range(r + 1, n):
                d, tr = _poly_deg_certified(work[i][r])
                work[i][r] = tr
                if d < 0:
                    continue
                q, rem = tr.divmod(piv)
                for j in range(r + 1, n):
                    work[i][j] = work[i][j] - q * work[r][j]
                work[i][r] = rem
            for j in range(r + 1, n):
                d, tr = _poly_deg_certified(work[r][j])
                work[r][j] = tr
                if d < 0:
                    continue
                q, rem = tr.divmod(piv)
                for i in range(r + 1, n):
                    work[i][j] = work[i][j] - q * work[i][r]
                work[r][j] = rem
            # look for surviving remainders in the pivot row/column
            best, best_deg = (r, r), _poly_deg_certified(work[r][r])[0]
            dirty = False
            for i in range(r + 1, n):
                d, tr = _poly_deg_certified(work[i][r])
                work[i][r] = tr
                if d >= 0:
                    dirty = True
                    if d < best_deg:
                        best, best_deg = (i, r), d
            for j in range(r + 1, n):
                d, tr = _poly_deg_certified(work[r][j])
                work[r][j] = tr
                if d >= 0:
                    dirty = True
                    if d < best_deg:
                        best, best_deg = (r, j), d
            if not dirty:
                break
        # pivot clean; units end the divisibility story immediately
        piv = work[r][r]
        if piv.degree() == 0:
            r += 1
            continue
        fixed = False
        for i in range(r + 1, n):
            for j in range(r + 1, n):
                d, tr = _poly_deg_certified(work[i][j])
                work[i][j] = tr
                if d >= 0:
                    _, rem = tr.divmod(piv)
                    state = _rem_state(rem)
                    if state == "nonzero":
                        for jj in range(r, n):
                            work[r][jj] = work[r][jj] + work[i][jj]
                        fixed = True
                        break
                    if state == "unknown":
                        raise InsufficientPrecision(
                            "divisibility chain undetermined at this precision")
            if fixed:
                break
        if fixed:
            continue
        lead_inv = piv.leading().inv()
        diag.append(piv.scale(lead_inv))
        r += 1
    return diag


def _rem_state(rem):
    saw_lazy = False
    for c in rem.coeffs:
        if c.codes:
            return "nonzero"
        if c.is_lazy_zero():
            saw_lazy = True
    return "unknown" if saw_lazy else "zero"


def minimal_polynomial_matrix(mat):
    return _invariant_factors(mat).minimal()


def are_conjugate(m1, m2):
    """Frobenius criterion: equal invariant-factor chains."""
    if len(m1) != len(m2):
        raise InputError("matrices of different sizes")
    k1 = _invariant_factors(m1)
    k2 = _invariant_factors(m2)
    return k1.same_value(k2)


class Classification:
    __slots__ = ("closed", "pure", "quasi_regular", "quasi_regular_elliptic",
                 "separable", "regular", "factors")

    def __init__(self, closed, pure, quasi_regular, quasi_regular_elliptic,
                 separable, regular, factors):
        self.closed = closed
        self.pure = pure
        self.quasi_regular = quasi_regular
        self.quasi_regular_elliptic = quasi_regular_elliptic
        self.separable = separable
        self.regular = regular
        # factors: list of (poly, multiplicity in char poly, e, f)
        self.factors = factors

    def to_json_dict(self):
        from .series import format_series
        return {
            "closed": self.closed,
            "pure": self.pure,
            "quasi_regular": self.quasi_regular,
            "quasi_regular_elliptic": self.quasi_regular_elliptic,
            "separable": self.separable,
            "regular": self.regular,
            "factors": [
                {"poly": [format_series(c) for c in poly.coeffs],
                 "multiplicity": mult, "e": e, "f": f}
                for (poly, mult, e, f) in self.factors
            ],
        }

    def __repr__(self):
        flags = [n for n in ("closed", "pure", "quasi_regular",
                             "quasi_regular_elliptic", "separable", "regular")
                 if getattr(self, n)]
        return f"Classification({'|'.join(flags)})"


_EXT_CACHE = {}


def extension_of_factor(poly):
    """Cached build_extension keyed by the exact coefficient data."""
    from .extfield import build_extension
    key = (poly.field, tuple((c.v, c.codes, c.prec) for c in poly.coeffs))
    hit = _EXT_CACHE.get(key)
    if hit is None:
        hit = build_extension(poly)
        _EXT_CACHE[key] = hit
    return hit


def classify(mat):
    """Closed / pure / quasi-regular / elliptic / separable flags."""
    from .factor import factor_local
    n = len(mat)
    char, key = char_min_invariant(mat)
    minp = key.minimal()
    factors = factor_local(minp)
    closed = all(m == 1 for _, m in factors)
    pure = len(factors) == 1 and factors[0][1] == 1
    quasi_regular = closed and minp.degree() == n
    qre = quasi_regular and pure
    separable = all(not g.derivative().is_zero() for g, _ in factors)
    regular = quasi_regular and separable
    out_factors = []
    for g, _ in factors:
        mult = _char_multiplicity(char, g)
        E = extension_of_factor(g)
        out_factors.append((g, mult, E.e, E.f_res))
    return Classification(closed, pure, quasi_regular, qre, separable,
                          regular, out_factors)


def _char_multiplicity(char, g):
    from .factor import poly_zero_mod, working_prec
    mult = 0
    rest = char
    while rest.degree() >= g.degree():
        q, r = rest.divmod(g)
        if poly_zero_mod(r, min(working_prec(rest), working_prec(g))):
            mult += 1
            rest = q
        else:
            break
    return mult


def filtration_member(mat_or_char, k):
    """gamma in ^G(P_min^{Nk+1}): v(a_j) >= (N - j)k + 1 for j < N."""
    char = (mat_or_char if isinstance(mat_or_char, SeriesPoly)
            else charpoly_matrix(mat_or_char))
    n = char.degree()
    for j in range(n):
        c = char.coeff(j)
        need = (n - j) * k + 1
        if c.codes:
            if c.v < need:
                return False
        elif c.is_lazy_zero() and c.prec < need:
            raise InsufficientPrecision(
                f"coefficient {j} undetermined at the filtration threshold")
    return True


def coefficient_map(mat):
    """(a_{N-1}, ..., a_0) and the twisted compactness bound.

    The bound is the largest integer k with all a_j in p^{(N-j)k} under the
    twisted scaling action; None when every coefficient vanishes.
    """
    char = charpoly_matrix(mat)
    n = char.degree()
    coeffs = [char.coeff(j) for j in range(n - 1, -1, -1)]
    bound = None
    for j in range(n):
        c = char.coeff(j)
        if c.codes:
            here = c.v // (n - j)
            bound = here if bound is None else min(bound, here)
        elif c.is_lazy_zero():
            possible = c.prec // (n - j)
            if bound is None or possible < bound:
                raise InsufficientPrecision(
                    "compactness bound undetermined by a lazy coefficient")
    return coeffs, bound
