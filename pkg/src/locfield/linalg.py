"""Valuation-aware linear algebra over F_q((T)).

Matrices are plain lists of lists of TruncatedSeries.  Pivots are only
accepted when certified nonzero; an entry that is merely "zero at precision"
where a rank decision is needed raises InsufficientPrecision.  Determinants
and characteristic polynomials use Berkowitz' division-free scheme, so
precision degrades only additively.
"""

from __future__ import annotations

from .errors import InsufficientPrecision, UnstableKernel


def zeros(field, n, m):
    return [[field.zero() for _ in range(m)] for _ in range(n)]


def identity(field, n):
    out = zeros(field, n, n)
    for i in range(n):
        out[i][i] = field.one()
    return out


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    field = a[0][0].field
    out = zeros(field, n, m)
    for i in range(n):
        ai = a[i]
        for t in range(k):
            c = ai[t]
            if c.is_exact_zero():
                continue
            bt = b[t]
            row = out[i]
            for j in range(m):
                if not bt[j].is_exact_zero():
                    row[j] = row[j] + c * bt[j]
    return out


def mat_vec(a, v):
    field = a[0][0].field
    out = []
    for row in a:
        acc = field.zero()
        for c, x in zip(row, v):
            if not (c.is_exact_zero() or x.is_exact_zero()):
                acc = acc + c * x
        out.append(acc)
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    return [[x * s for x in row] for row in a]


def mat_copy(a):
    return [list(row) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def _pivot_key(entry):
    """(valuation, certified) for pivot choice; None when unusable as pivot."""
    if entry.codes:
        return entry.v
    return None


def _lazy_floor(entry):
    """Lower bound on the valuation of a non-certified entry."""
    if entry.is_exact_zero():
        return None  # +infinity
    return entry.prec


def row_echelon(mat, ncols=None, want_transform=False, lazy_cols_free=False):
    """Row echelon form with valuation pivoting.

    Returns (rows, pivot_cols, transform).  Raises InsufficientPrecision when
    a column's status (pivot vs free) cannot be certified: some entry is lazy
    with a precision bound not above the best certified pivot scale.  With
    `lazy_cols_free` a pivotless column with lazy entries is skipped instead;
    the caller must then certify the rank by an external dimension count.
    """
    rows = mat_copy(mat)
    n = len(rows)
    if n == 0:
        return rows, [], []
    field = rows[0][0].field
    width = len(rows[0])
    m = ncols if ncols is not None else width
    transform = identity(field, n) if want_transform else None
    pivot_cols = []
    r = 0
    for col in range(m):
        if r >= n:
            break
        best, best_val = None, None
        uncertified = []
        for i in range(r, n):
            e = rows[i][col]
            v = _pivot_key(e)
            if v is not None:
                if best_val is None or v < best_val:
                    best, best_val = i, v
            elif e.is_lazy_zero():
                uncertified.append(e.prec)
        if best is None:
            if uncertified and not lazy_cols_free:
                raise InsufficientPrecision(
                    f"column {col}: all entries zero at precision; rank undecided")
            continue
        if uncertified and min(uncertified) <= best_val:
            raise InsufficientPrecision(
                f"column {col}: lazy entry could undercut pivot valuation {best_val}")
        rows[r], rows[best] = rows[best], rows[r]
        if want_transform:
            transform[r], transform[best] = transform[best], transform[r]
        piv_inv = rows[r][col].inv()
        for i in range(n):
            if i == r:
                continue
            e = rows[i][col]
            if e.known_zero_at_precision():
                continue
            f = e * piv_inv
            for j in range(width):
                rows[i][j] = rows[i][j] - f * rows[r][j]
            rows[i][col] = field.zero()  # exact by construction
            if want_transform:
                for j in range(n):
                    transform[i][j] = transform[i][j] - f * transform[r][j]
        pivot_cols.append(col)
        r += 1
    return rows, pivot_cols, transform


def solve_linear(a, rhs_cols):
    """Solve A X = B for X (A square, certified invertible at precision)."""
    n = len(a)
    m = len(rhs_cols[0])
    aug = [list(a[i]) + list(rhs_cols[i]) for i in range(n)]
    rows, pivots, _ = row_echelon(aug, ncols=n)
    if len(pivots) != n:
        raise InsufficientPrecision("matrix singular at working precision")
    field = a[0][0].field
    x = zeros(field, n, m)
    for r, col in enumerate(pivots):
        piv_inv = rows[r][col].inv()
        for j in range(m):
            x[col][j] = rows[r][n + j] * piv_inv
    return x


def invert(a):
    field = a[0][0].field
    return solve_linear(a, identity(field, len(a)))


def kernel_basis(a, expected_dim=None):
    """Certified basis of the right kernel.

    Without `expected_dim` every rank decision must be certified by the
    entries themselves.  With it, lazy-plagued columns are allowed as long as
    the free-column count matches: the certified pivots bound the rank from
    below and the caller's structural knowledge bounds it from above.
    """
    if not a:
        return []
    field = a[0][0].field
    m = len(a[0])
    rows, pivots, _ = row_echelon(a, lazy_cols_free=expected_dim is not None)
    if expected_dim is not None and m - len(pivots) != expected_dim:
        raise InsufficientPrecision(
            f"kernel dimension {m - len(pivots)} does not match the expected "
            f"{expected_dim}")
    pivot_set = dict()
    for r, col in enumerate(pivots):
        pivot_set[col] = r
    basis = []
    for col in range(m):
        if col in pivot_set:
            continue
        vec = [field.zero()] * m
        vec[col] = field.one()
        for pcol, r in pivot_set.items():
            piv = rows[r][pcol]
            val = rows[r][col]
            if not val.known_zero_at_precision():
                vec[pcol] = -(val * piv.inv())
        basis.append(vec)
    return basis


def rank_certified(a):
    _, pivots, _ = row_echelon(a)
    return len(pivots)


def det_berkowitz(a):
    """det(A) as (-1)^n * (constant coefficient of charpoly), division-free."""
    n = len(a)
    field = a[0][0].field
    coeffs = charpoly_berkowitz(a)
    c0 = coeffs[0]
    if n % 2 == 1:
        return -c0
    return c0


def charpoly_berkowitz(a):
    """Coefficients [c_0, ..., c_n] of det(t*I - A), lowest degree first."""
    n = len(a)
    field = a[0][0].field
    one, zero = field.one(), field.zero()
    if n == 0:
        return [one]
    # S: coefficients of charpoly of leading principal minor, highest degree first
    s = [one, -a[0][0]]
    for m in range(1, n):
        row = a[m][:m]
        col = [a[j][m] for j in range(m)]
        minor = [a[i][:m] for i in range(m)]
        vs = []
        w = col
        for k in range(m):
            acc = zero
            for x, y in zip(row, w):
                if not (x.is_exact_zero() or y.is_exact_zero()):
                    acc = acc + x * y
            vs.append(acc)
            if k < m - 1:
                w = mat_vec(minor, w)
        first_col = [one, -a[m][m]] + [-v for v in vs]
        s_new = [zero] * (m + 2)
        for i in range(m + 2):
            acc = zero
            for j in range(min(i + 1, m + 1)):
                f = first_col[i - j]
                if not (f.is_exact_zero() or s[j].is_exact_zero()):
                    acc = acc + f * s[j]
            s_new[i] = acc
        s = s_new
    return list(reversed(s))


def charpoly(a):
    """Characteristic polynomial det(t*I - A) as a SeriesPoly in t."""
    from .seriespoly import SeriesPoly
    field = a[0][0].field
    return SeriesPoly(field, charpoly_berkowitz(a))


def trace(a):
    field = a[0][0].field
    acc = field.zero()
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def subspace_contains(basis_rows, vec):
    """Is vec in the row span, as far as certified? For small membership checks."""
    if not basis_rows:
        return vec_known_zero(vec)
    aug = [list(r) for r in basis_rows]
    m = len(vec)
    rows, pivots, _ = row_echelon(aug, ncols=m)
    residual = list(vec)
    for r, col in enumerate(pivots):
        c = residual[col]
        if c.known_zero_at_precision():
            continue
        f = c * rows[r][col].inv()
        for j in range(m):
            residual[j] = residual[j] - f * rows[r][j]
        residual[col] = basis_rows[0][0].field.zero()
    return vec_known_zero(residual)


def vec_known_zero(vec):
    return all(c.known_zero_at_precision() for c in vec)
