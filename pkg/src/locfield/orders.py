"""Hereditary orders in M_N(F): standard orders, A(E), radical powers,
intertwining lattices N_k and the invariant k_0.

A principal order is stored as an adapted frame g together with the chain's
scaling data: in frame coordinates every radical power P^k is the diagonal
pattern lattice { x : v(x_ij) >= exps_k(i, j) }, so membership, v_A and
bases are closed-form.  All index computations happen on flattened N^2
vectors in frame coordinates.
"""

from __future__ import annotations

from .errors import CapExceeded, InputError, InsufficientPrecision
from .lattices import (
    OLattice, hermite_column_basis, index_exponent, integral_preimage_basis,
)
from .linalg import identity, invert, kernel_basis, mat_mul


class HereditaryOrder:
    """Principal hereditary order of period e in M_N(F)."""

    __slots__ = ("field", "N", "period", "frame", "frame_inv", "_cvec", "_exp_cache")

    def __init__(self, field, N, period, frame, frame_inv, chain_scalings):
        self.field = field
        self.N = N
        self.period = period
        self.frame = frame
        self.frame_inv = frame_inv
        # chain_scalings[a][l] in {0,1}: L_a = span(T^c(l,a) v_l), a = 0..e-1
        self._cvec = chain_scalings
        self._exp_cache = {}

    # -- constructions ---------------------------------------------------------

    @classmethod
    def standard(cls, field, N, e):
        """The standard principal order A_e (block upper triangular mod p)."""
        if N % e:
            raise InputError("period must divide N")
        frame = identity(field, N)
        frame_inv = identity(field, N)
        block = N // e
        scalings = []
        for a in range(e):
            keep = N - a * block
            scalings.append([0 if l < keep else 1 for l in range(N)])
        return cls(field, N, e, frame, frame_inv, scalings)

    @classmethod
    def of_extension(cls, E):
        """A(E) acting on E in the chain basis pi^i omega^j (i major).

        In that basis p_E^a = span(T^{[i < a]} v_(i,j)), which is exactly a
        standard-type scaling chain of period e(E/F).
        """
        field = E.base
        n = E.n
        e = E.e
        f = E.f_res
        frame = identity(field, n)
        frame_inv = identity(field, n)
        scalings = []
        for a in range(e):
            row = []
            for i in range(e):
                for j in range(f):
                    row.append(1 if i < a else 0)
            scalings.append(row)
        return cls(field, n, e, frame, frame_inv, scalings)

    @classmethod
    def from_chain(cls, field, chain_lattices):
        """Adapted order from an explicit principal chain L_0 > ... > L_{e-1}.

        The chain is adapted over the residue field: the images
        V_a = L_a / T L_0 form a flag in kappa^N, and any lifted flag basis
        diagonalizes every L_a simultaneously.
        """
        e = len(chain_lattices)
        L0 = chain_lattices[0]
        N = L0.dim
        B0 = L0.basis_matrix()
        B0_inv = invert(B0)
        kappa = field.kappa
        # subspace images mod p, as kappa row-vectors
        flags = []
        for L in chain_lattices[1:]:
            cols = []
            for col in L.basis:
                coord = mat_mul(B0_inv, [[c] for c in col])
                vec = []
                for i in range(N):
                    c = coord[i][0]
                    if c.codes and c.v < 0:
                        raise InputError("chain member not contained in L_0")
                    vec.append(c.residue())
                cols.append(vec)
            flags.append(cols)
        # adapted kappa-basis: start from the deepest subspace
        basis_vecs = []

        def reduce_against(vec, chosen):
            vec = list(vec)
            for cv in chosen:
                lead = next((i for i, x in enumerate(cv) if x), None)
                if lead is not None and vec[lead]:
                    fct = kappa.div(vec[lead], cv[lead])
                    vec = [kappa.sub(x, kappa.mul(fct, y)) for x, y in zip(vec, cv)]
            return vec

        for level in range(len(flags) - 1, -1, -1):
            for cand in flags[level]:
                red = reduce_against(cand, basis_vecs)
                if any(red):
                    basis_vecs.append(red)
        for i in range(N):
            cand = [1 if j == i else 0 for j in range(N)]
            red = reduce_against(cand, basis_vecs)
            if any(red):
                basis_vecs.append(red)
        if len(basis_vecs) != N:
            raise InputError("flag adaptation failed")
        # order the basis so that V_a = span(first dim V_a vectors)
        dims = [N] + [_kappa_rank(kappa, fl) for fl in flags]
        # vectors were appended deepest-first, so membership depth decreases
        depth = []
        for v in basis_vecs:
            d = 0
            for level, fl in enumerate(flags):
                if _kappa_in_span(kappa, fl, v):
                    d = level + 1
            depth.append(d)
        order_idx = sorted(range(N), key=lambda i: -depth[i])
        frame_cols = []
        for i in order_idx:
            vec = basis_vecs[i]
            col = [field.zero()] * N
            for l, code in enumerate(vec):
                if code:
                    for rw in range(N):
                        col[rw] = col[rw] + B0[rw][l] * field.from_code(code)
            frame_cols.append(col)
        frame = [[frame_cols[j][i] for j in range(N)] for i in range(N)]
        frame_inv = invert(frame)
        scalings = []
        for a in range(e):
            if a == 0:
                scalings.append([0] * N)
            else:
                keep = dims[a]
                scalings.append([0 if l < keep else 1 for l in range(N)])
        order = cls(field, N, e, frame, frame_inv, scalings)
        # verify: the declared chain reproduces the input lattices
        for a, L in enumerate(chain_lattices):
            mine = order.chain_lattice(a)
            if not (mine.contains_lattice(L) and L.contains_lattice(mine)):
                raise InputError("chain adaptation verification failed")
        return order

    # -- chain / pattern -----------------------------------------------------------

    def chain_lattice(self, a):
        """L_a as an OLattice in F^N (a taken modulo the period, scaled)."""
        e = self.period
        shift, a0 = divmod(a, e)
        cols = []
        for l in range(self.N):
            k = self._cvec[a0][l] + shift
            col = [self.frame[i][l].shift(k) for i in range(self.N)]
            cols.append(col)
        return OLattice(self.field, cols)

    def _c_ext(self, l, a):
        e = self.period
        shift, a0 = divmod(a, e)
        return self._cvec[a0][l] + shift

    def pattern_exponents(self, k):
        """exps[i][j]: v-bound for entry (i, j) of P^k in frame coordinates."""
        cached = self._exp_cache.get(k)
        if cached is not None:
            return cached
        N, e = self.N, self.period
        exps = [[0] * N for _ in range(N)]
        for i in range(N):
            for j in range(N):
                best = None
                for a in range(e):
                    need = self._c_ext(i, a + k) - self._c_ext(j, a)
                    if best is None or need > best:
                        best = need
                exps[i][j] = best
        self._exp_cache[k] = exps
        return exps

    def to_frame(self, x):
        return mat_mul(self.frame_inv, mat_mul(x, self.frame))

    def from_frame(self, y):
        return mat_mul(self.frame, mat_mul(y, self.frame_inv))

    def nu(self, x, in_frame=False):
        """v_A(x); None for the (known) zero matrix."""
        y = x if in_frame else self.to_frame(x)
        N, e = self.N, self.period
        best = None
        for i in range(N):
            for j in range(N):
                c = y[i][j]
                if c.codes:
                    v = c.v
                elif c.is_lazy_zero():
                    # bound only: conservative check below
                    v = None
                    bound = c.prec
                    k_bound = self._entry_k_max(i, j, bound)
                    if best is not None and k_bound < best:
                        raise InsufficientPrecision(
                            "v_A undetermined by a lazy entry")
                    continue
                else:
                    continue
                k_here = self._entry_k_max(i, j, v)
                if best is None or k_here < best:
                    best = k_here
        return best

    def nu_floor(self, x, in_frame=False):
        """Certified lower bound for v_A(x): lazy entries count their bound.

        None when every entry is exactly zero.
        """
        y = x if in_frame else self.to_frame(x)
        N = self.N
        best = None
        for i in range(N):
            for j in range(N):
                c = y[i][j]
                if c.codes:
                    v = c.v
                elif c.is_lazy_zero():
                    v = c.prec
                else:
                    continue
                k_here = self._entry_k_max(i, j, v)
                if best is None or k_here < best:
                    best = k_here
        return best

    def _entry_k_max(self, i, j, v):
        """Largest k with exps_k(i, j) <= v (exps_{k+e} = exps_k + 1)."""
        e = self.period
        k0 = e * v
        best = None
        for kk in range(k0 - e, k0 + e + 1):
            if self.pattern_exponents(kk)[i][j] <= v:
                best = kk
        return best

    def in_Pk(self, x, k, in_frame=False):
        y = x if in_frame else self.to_frame(x)
        exps = self.pattern_exponents(k)
        for i in range(self.N):
            for j in range(self.N):
                c = y[i][j]
                if c.codes:
                    if c.v < exps[i][j]:
                        return False
                elif c.is_lazy_zero() and c.prec < exps[i][j]:
                    raise InsufficientPrecision("P^k membership undecided")
        return True

    def Pk_lattice(self, k):
        """P^k as an OLattice in flattened frame coordinates."""
        exps = self.pattern_exponents(k)
        N = self.N
        return OLattice.standard(self.field, N * N,
                                 [exps[i][j] for i in range(N) for j in range(N)])

    # -- intertwining ---------------------------------------------------------------

    def N_k_lattice(self, beta_frame, k):
        """N_k(beta, A) = {x in A : ad_beta(x) in P^k}, flattened frame coords."""
        field = self.field
        N = self.N
        ad = ad_matrix(beta_frame)
        e0 = self.pattern_exponents(0)
        ek = self.pattern_exponents(k)
        n2 = N * N
        # M[(i,j) flat row][(a,b) flat col] = T^{-ek[ij]} * ad[ij][ab] * T^{e0[ab]}
        m = [[field.zero()] * n2 for _ in range(n2)]
        for rw in range(n2):
            i, j = divmod(rw, N)
            for cl in range(n2):
                a, b = divmod(cl, N)
                c = ad[rw][cl]
                if not c.is_exact_zero():
                    m[rw][cl] = c.shift(e0[a][b] - ek[i][j])
        pre = integral_preimage_basis(m, field)
        # back to frame coordinates: x_flat = D0 * c
        cols = []
        for col in pre.basis:
            out = []
            for rw in range(n2):
                i, j = divmod(rw, N)
                out.append(col[rw].shift(e0[i][j]))
            cols.append(out)
        return OLattice(field, cols)

    def centralizer_cap_order(self, beta_frame, centralizer_dim=None):
        """B = ker(ad_beta) intersect A, as generators in flattened frame coords.

        x = K c runs over the kernel with c free in F^dim, so the preimage
        must not restrict c to o^dim: the lattice is K * full_preimage.
        `centralizer_dim` certifies the kernel dimension when precision
        alone cannot (see kernel_basis).
        """
        field = self.field
        N = self.N
        ad = ad_matrix(beta_frame)
        ker = kernel_basis(ad, expected_dim=centralizer_dim)
        if not ker:
            raise InputError("trivial centralizer?")
        e0 = self.pattern_exponents(0)
        n2 = N * N
        mat = [[ker[t][rw].shift(-e0[divmod(rw, N)[0]][divmod(rw, N)[1]])
                for t in range(len(ker))] for rw in range(n2)]
        coeff_cols = full_preimage_coefficient_basis(mat, field)
        cols = []
        for col in coeff_cols:
            out = [field.zero()] * n2
            for t in range(len(ker)):
                c = col[t]
                if c.is_exact_zero():
                    continue
                for rw in range(n2):
                    out[rw] = out[rw] + ker[t][rw] * c
            cols.append(out)
        return cols

    def k0(self, beta, in_frame=False, cap_mult=4, centralizer_dim=None):
        """k_0(beta, A): the largest k with N_k not inside B + P.

        Scans upward from v_A(beta) with the configured safety window;
        central beta (scalar) gives -infinity, returned as None.
        """
        field = self.field
        N = self.N
        bf = beta if in_frame else self.to_frame(beta)
        if _is_central(bf, field, N):
            return None
        nu_b = self.nu(bf, in_frame=True)
        if nu_b is None:
            return None
        b_gens = self.centralizer_cap_order(bf, centralizer_dim=centralizer_dim)
        p1 = self.Pk_lattice(1)
        bp_cols = [list(c) for c in b_gens] + [list(c) for c in p1.basis]
        bp = OLattice(field, hermite_column_basis(field, bp_cols, N * N))
        cap = nu_b + cap_mult * N * self.period
        k = nu_b
        last_not_contained = None
        while k <= cap:
            nk = self.N_k_lattice(bf, k)
            if bp.contains_lattice(nk):
                if last_not_contained is None:
                    # N_k shrank into B + P already at the start: k_0 < nu_b
                    # cannot happen for pure non-central beta (equality at
                    # minimality); treat as an input error
                    raise InputError("k_0 scan started inside B + P")
                return last_not_contained
            last_not_contained = k
            k += 1
        raise CapExceeded(f"k_0 scan exceeded its window (cap {cap})")


def full_preimage_coefficient_basis(mat, field):
    """Basis of {c in F^m : mat*c in o^n} for mat of full column rank."""
    from .lattices import smith_valuations
    m = len(mat[0])
    U, vals, V, _ = smith_valuations(mat)
    cols = []
    for i in range(m):
        if i >= len(vals) or vals[i] is None:
            raise InputError("full_preimage requires full column rank")
        shift = -vals[i]
        col = [V[rw][i].shift(shift) if shift else V[rw][i] for rw in range(m)]
        cols.append(col)
    return cols


def _kappa_rank(kappa, vecs):
    work = [list(v) for v in vecs]
    rank = 0
    cols = len(work[0]) if work else 0
    used_rows = []
    for v in work:
        red = list(v)
        for u in used_rows:
            lead = next((i for i, x in enumerate(u) if x), None)
            if lead is not None and red[lead]:
                f = kappa.div(red[lead], u[lead])
                red = [kappa.sub(x, kappa.mul(f, y)) for x, y in zip(red, u)]
        if any(red):
            used_rows.append(red)
            rank += 1
    return rank


def _kappa_in_span(kappa, vecs, target):
    red = list(target)
    used = []
    for v in vecs:
        u = list(v)
        for w in used:
            lead = next((i for i, x in enumerate(w) if x), None)
            if lead is not None and u[lead]:
                f = kappa.div(u[lead], w[lead])
                u = [kappa.sub(x, kappa.mul(f, y)) for x, y in zip(u, w)]
        if any(u):
            used.append(u)
    for w in used:
        lead = next((i for i, x in enumerate(w) if x), None)
        if lead is not None and red[lead]:
            f = kappa.div(red[lead], w[lead])
            red = [kappa.sub(x, kappa.mul(f, y)) for x, y in zip(red, w)]
    return not any(red)


def ad_matrix(beta):
    """Matrix of x -> beta x - x beta on flattened N x N matrices."""
    N = len(beta)
    field = beta[0][0].field
    n2 = N * N
    out = [[field.zero()] * n2 for _ in range(n2)]
    for i in range(N):
        for j in range(N):
            rw = i * N + j
            # (beta x)_{ij} = sum_a beta_{ia} x_{aj}; (x beta)_{ij} = sum_b x_{ib} beta_{bj}
            for a in range(N):
                if not beta[i][a].is_exact_zero():
                    out[rw][a * N + j] = out[rw][a * N + j] + beta[i][a]
            for b in range(N):
                if not beta[b][j].is_exact_zero():
                    out[rw][i * N + b] = out[rw][i * N + b] - beta[b][j]
    return out


def _is_central(mat, field, N):
    for i in range(N):
        for j in range(N):
            if i != j and mat[i][j].codes:
                return False
    d = mat[0][0]
    for i in range(1, N):
        if not (mat[i][i] - d).known_zero_at_precision():
            return False
    return True


def flatten_matrix(x):
    return [c for row in x for c in row]


def unflatten_matrix(vec, N):
    return [[vec[i * N + j] for j in range(N)] for i in range(N)]
