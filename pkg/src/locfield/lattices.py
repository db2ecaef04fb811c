"""Full-rank o-lattices in F^m and exact index computation.

Lattices are column spans over o = F_q[[T]].  All reductions pivot on
certified minimal valuation; quotients in eliminations are integral by
construction.  Indices are powers of q, returned as the exponent
a = v(det(B1^-1 B2)).
"""

from __future__ import annotations

from .errors import InputError, InsufficientPrecision, NotSublattice, UnstableKernel
from .linalg import det_berkowitz, mat_copy, row_echelon


class OLattice:
    """Column-basis lattice in F^m (full rank)."""

    __slots__ = ("field", "dim", "basis")

    def __init__(self, field, basis_columns):
        self.field = field
        self.dim = len(basis_columns[0]) if basis_columns else 0
        if len(basis_columns) != self.dim:
            raise InputError("lattice basis must be square (full rank)")
        self.basis = [list(col) for col in basis_columns]

    @classmethod
    def standard(cls, field, m, exponents=None):
        cols = []
        for i in range(m):
            col = [field.zero()] * m
            col[i] = field.T(exponents[i]) if exponents else field.one()
            cols.append(col)
        return cls(field, cols)

    def basis_matrix(self):
        """Columns as a matrix (rows indexed by coordinate)."""
        return [[self.basis[j][i] for j in range(self.dim)]
                for i in range(self.dim)]

    def det_valuation(self):
        d = det_berkowitz(self.basis_matrix())
        v = d.valuation()
        if v is None:
            raise InputError("degenerate lattice basis")
        return v

    def contains(self, vec):
        coords = _solve_columns(self.basis_matrix(), vec)
        for c in coords:
            if c.codes:
                if c.v < 0:
                    return False
            elif c.is_lazy_zero() and c.prec < 0:
                raise InsufficientPrecision(
                    "membership undecided: coordinate known only below O(1)")
        return True

    def contains_lattice(self, other):
        return all(self.contains(col) for col in other.basis)

    def scaled(self, k):
        """T^k * L."""
        return OLattice(self.field,
                        [[x.shift(k) for x in col] for col in self.basis])

    def sum(self, other):
        cols = [list(c) for c in self.basis] + [list(c) for c in other.basis]
        return OLattice(self.field, hermite_column_basis(self.field, cols, self.dim))


def _solve_columns(mat, vec):
    from .linalg import solve_linear
    sol = solve_linear(mat, [[v] for v in vec])
    return [sol[i][0] for i in range(len(vec))]


def hermite_column_basis(field, cols, dim):
    """Reduce a (possibly overcomplete) generating set to a column basis.

    Column elimination with valuation pivoting on rows; generators must span
    a full-rank lattice.
    """
    work = [list(c) for c in cols]
    out = []
    for row in range(dim):
        best = None
        best_val = None
        lazy_bound = None
        for j, col in enumerate(work):
            c = col[row]
            if c.codes:
                if best_val is None or c.v < best_val:
                    best, best_val = j, c.v
            elif c.is_lazy_zero():
                lazy_bound = c.prec if lazy_bound is None else min(lazy_bound, c.prec)
        if best is None:
            if lazy_bound is not None:
                raise InsufficientPrecision(
                    f"hermite pivot for row {row} undetermined")
            raise InputError("generators do not span a full-rank lattice")
        if lazy_bound is not None and lazy_bound <= best_val:
            raise InsufficientPrecision(
                f"hermite pivot for row {row} could be undercut by a lazy entry")
        piv_col = work.pop(best)
        piv_inv = piv_col[row].inv()
        for col in work:
            c = col[row]
            if c.known_zero_at_precision():
                continue
            if c.codes and c.v >= best_val:
                fqt = c * piv_inv
                for i in range(dim):
                    col[i] = col[i] - fqt * piv_col[i]
                col[row] = field.zero()
            elif c.codes:
                raise InputError("internal: pivot was not minimal")
        out.append(piv_col)
    return out


def index_exponent(L1, L2):
    """a with [L1 : L2] = q^a; requires L2 a sublattice of L1."""
    if not L1.contains_lattice(L2):
        raise NotSublattice("second lattice is not contained in the first")
    return L2.det_valuation() - L1.det_valuation()


def index_exponent_virtual(L1, L2):
    """v(det) difference without the containment requirement (signed)."""
    return L2.det_valuation() - L1.det_valuation()


def smith_valuations(mat, zero_floor=None):
    """(U, vals, V) with U*mat*V diagonal of valuations `vals` (None = zero).

    U, V are products of swaps and integral shears (unimodular over o); the
    diagonal entries of the reduced matrix are units times T^vals[i].
    Raises UnstableKernel when a residual entry is an uncertified zero -
    unless `zero_floor` is given and every residual's precision bound is at
    least it (then the entry is treated as zero; sound for integral
    preimages with zero_floor=0, where a true value that deep imposes no
    constraint on integral vectors).
    """
    a = mat_copy(mat)
    n = len(a)
    m = len(a[0]) if a else 0
    field = a[0][0].field if a else None
    from .linalg import identity
    U = identity(field, n)
    V = identity(field, m)
    vals = []
    r = 0
    size = min(n, m)
    while r < size:
        best = None
        best_val = None
        lazy_bound = None
        for i in range(r, n):
            for j in range(r, m):
                c = a[i][j]
                if c.codes:
                    if best_val is None or c.v < best_val:
                        best, best_val = (i, j), c.v
                elif c.is_lazy_zero():
                    lb = c.prec
                    lazy_bound = lb if lazy_bound is None else min(lazy_bound, lb)
        if best is None:
            if lazy_bound is not None and (zero_floor is None
                                           or lazy_bound < zero_floor):
                raise UnstableKernel(
                    "elementary divisors undetermined: residual zero at precision")
            break
        if lazy_bound is not None and lazy_bound <= best_val:
            raise UnstableKernel(
                "elementary divisor pivot could be undercut by a lazy entry")
        (pi, pj) = best
        a[r], a[pi] = a[pi], a[r]
        U[r], U[pi] = U[pi], U[r]
        for row in a:
            row[r], row[pj] = row[pj], row[r]
        for row in V:
            row[r], row[pj] = row[pj], row[r]
        piv = a[r][r]
        piv_inv = piv.inv()
        for i in range(n):
            if i == r:
                continue
            c = a[i][r]
            if c.known_zero_at_precision():
                continue
            f = c * piv_inv
            for j in range(m):
                a[i][j] = a[i][j] - f * a[r][j]
            a[i][r] = field.zero()
            for j in range(n):
                U[i][j] = U[i][j] - f * U[r][j]
        for j in range(r + 1, m):
            c = a[r][j]
            if c.known_zero_at_precision():
                continue
            f = c * piv_inv
            for i in range(n):
                a[i][j] = a[i][j] - f * a[i][r]
            a[r][j] = field.zero()
            for i in range(m):
                V[i][j] = V[i][j] - f * V[i][r]
        vals.append(best_val)
        r += 1
    vals.extend([None] * (size - len(vals)))
    return U, vals, V, a


def integral_preimage_basis(mat, field):
    """Basis of {c in o^m : mat*c in o^n} as an OLattice in F^m.

    With U*mat*V = D diagonal and U, V unimodular over o, c = V*y runs over
    the set exactly when y is integral and v(y_i) >= -d_i; columns of D that
    vanish leave y_i free in o.
    """
    m = len(mat[0])
    U, vals, V, _ = smith_valuations(mat, zero_floor=0)
    cols = []
    for i in range(m):
        shift = 0
        if i < len(vals) and vals[i] is not None:
            shift = max(0, -vals[i])
        col = [V[rw][i].shift(shift) if shift else V[rw][i] for rw in range(m)]
        cols.append(col)
    return OLattice(field, cols)
