"""Numerical invariants of quasi-regular elements and the eta/mu identities.

For an elliptic element the whole computation happens inside A(E) for
E = F[gamma]: the matrix only contributes its minimal polynomial, which makes
conjugation invariance structural.  eta exponents come from the conductor
chain (c_F, c_tilde), mu exponents from exact lattice indices; the paper's
identity eta*mu = 1 is *not* used anywhere in the pipeline, so it remains an
honest cross-check between two independent computations.

All factors are stored as integer exponents of q: eta_G = q^(-eta_G_exp),
mu_F = q^(mu_exp), and likewise for the Lie-algebra variants.
"""

from __future__ import annotations

from .errors import (
    CapExceeded, InconsistentMinimality, InputError, InsufficientPrecision,
    RelationViolated,
)
from .extfield import (
    LocalFieldExt, minimal_polynomial, multiplication_matrix_base,
    ramification_report,
)
from .lattices import (
    OLattice, hermite_column_basis, index_exponent, index_exponent_virtual,
)
from .linalg import (
    charpoly_berkowitz, det_berkowitz, invert, mat_mul, row_echelon,
)
from .matrices import classify, extension_of_factor, minimal_polynomial_matrix
from .orders import HereditaryOrder, ad_matrix, flatten_matrix
from .seriespoly import SeriesPoly

CONDUCTOR_CAP_MULT = 8


class EllipticInvariants:
    """The record of invariants of a quasi-regular elliptic element."""

    __slots__ = ("e", "f", "n", "n_F", "k_F", "k_tilde", "c_F", "c_tilde",
                 "minimal", "separable", "nu_D", "nu_D_plus", "delta", "sigma",
                 "eta_G_exp", "eta_g_exp", "mu_exp", "mu_plus_exp")

    def to_json_dict(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __repr__(self):
        return ("EllipticInvariants(" +
                ", ".join(f"{k}={getattr(self, k)}" for k in self.__slots__) + ")")


def elliptic_invariants(gamma, E, compute_mu=True, compute_D=True):
    """Invariants of gamma in E = F[gamma] (certified elliptic of degree n).

    gamma is an ExtElem generating E over the base field.
    """
    inv = EllipticInvariants()
    n = E.n
    inv.e, inv.f, inv.n = E.e, E.f_res, n
    v = gamma.valuation()
    if v is None:
        raise InputError("zero element is not quasi-regular for n > 0")
    inv.n_F = -v

    rep = ramification_report(E, count_automorphisms=False)
    inv.separable = rep.separable
    inv.delta = rep.delta
    inv.sigma = rep.sigma

    if n == 1:
        inv.k_F = None
        inv.k_tilde = None
        inv.minimal = True
        inv.c_F = 0
        inv.c_tilde = 0
        inv.nu_D = 0 if inv.separable else None
        inv.nu_D_plus = 0 if inv.separable else None
        inv.eta_G_exp = 0
        inv.eta_g_exp = 0
        inv.mu_exp = 0
        inv.mu_plus_exp = 0
        return inv

    order = HereditaryOrder.of_extension(E)
    g_mat = multiplication_matrix_base(gamma)
    k_F = order.k0(g_mat, centralizer_dim=n)
    if k_F is None:
        raise InputError("element is central: not elliptic for n > 1")
    inv.k_F = k_F
    inv.k_tilde = k_F + inv.n_F
    if inv.k_tilde < 0:
        raise RelationViolated("k_tilde < 0 contradicts the theory")

    minimal_by_k = (inv.k_tilde == 0)
    minimal_by_def = _minimal_by_definition(gamma, E)
    if minimal_by_k != minimal_by_def:
        raise InconsistentMinimality(
            f"k-test says {minimal_by_k}, definition says {minimal_by_def}")
    inv.minimal = minimal_by_k

    inv.c_F = conductor_c(gamma, E)
    inv.c_tilde = inv.c_F + (n - 1) * inv.n_F

    if compute_D and inv.separable:
        inv.nu_D = D_valuation(gamma, E, order=order, g_mat=g_mat)
        det_g = det_berkowitz(g_mat)
        inv.nu_D_plus = (n - 1) * det_g.valuation() + inv.nu_D
    else:
        inv.nu_D = None
        inv.nu_D_plus = None

    inv.eta_G_exp = inv.f * (inv.c_tilde + inv.e - 1)
    inv.eta_g_exp = inv.f * (inv.c_F + inv.e - 1)

    if compute_mu:
        inv.mu_exp, inv.mu_plus_exp = mu_exponents(
            gamma, E, order=order, g_mat=g_mat, k_F=k_F, k_tilde=inv.k_tilde)
        # section 3.8 relation (2): mu+ = q_E^{n_F (1-N)} mu
        expected = inv.mu_exp + inv.f * inv.n_F * (1 - n)
        if inv.mu_plus_exp != expected:
            raise RelationViolated(
                f"mu_plus exponent {inv.mu_plus_exp} != {expected} from relation (2)")
    else:
        inv.mu_exp = None
        inv.mu_plus_exp = None
    return inv


def _minimal_by_definition(gamma, E):
    """gcd(n_F, e) = 1 and the normalized power generates the residue field."""
    import math
    v = gamma.valuation()
    n_F = -v
    if math.gcd(n_F, E.e) != 1:
        return False
    u = gamma ** E.e
    shift = E.from_base(E.base.T(-v))  # T^{-v}: clears e*v = v_E(gamma^e)
    u = u * shift
    if u.valuation() != 0:
        raise InputError("normalized power is not a unit (internal)")
    res = u.residue_code()
    kappa2 = E.Fp.kappa
    d = kappa2.element_order_degree(res)
    # [kappa(res) : kappa] = lcm(r, d) / r must be the full residue degree
    r = E.base.kappa.r
    return _lcm(r, d) // r == E.f_res


def _lcm(a, b):
    import math
    return a * b // math.gcd(a, b)


def conductor_c(gamma, E, cap_mult=CONDUCTOR_CAP_MULT):
    """c_F(gamma): exponent of the conductor of o[gamma] in o_E.

    Scales gamma into o_E, scans for the least k with p_E^k o_E inside the
    o-span of the powers, and unscales by c(z*gamma) = c + e(n-1)v(z).
    """
    n = E.n
    F = E.base
    v = gamma.valuation()
    z_val = max(0, -(v // E.e) if v % E.e == 0 else (-v + E.e - 1) // E.e)
    if v + E.e * z_val < 0:
        z_val += 1
    work = gamma * E.from_base(F.T(z_val)) if z_val else gamma
    # o-span of 1, work, ..., work^{n-1}
    vecs = []
    acc = E.one()
    vecs.append(E.decompose_over_base(acc))
    for _ in range(n - 1):
        acc = acc * work
        vecs.append(E.decompose_over_base(acc))
    span = OLattice(F, vecs)
    basis = E.basis_elements()
    cap = cap_mult * n * E.e
    pi = E.pi()
    scaled = [b for b in basis]
    for k in range(cap + 1):
        if all(span.contains(E.decompose_over_base(b)) for b in scaled):
            return k - E.e * (n - 1) * z_val
        scaled = [b * pi for b in scaled]
    raise CapExceeded(f"conductor scan exceeded its window ({cap})")


def _ad_complement_data(E, g_mat=None):
    """Complement coordinates for A(E)/E and the projection along E."""
    F = E.base
    n = E.n
    n2 = n * n
    basis = E.basis_elements()
    e_vectors = [flatten_matrix(multiplication_matrix_base(b)) for b in basis]
    rows, pivots, _ = row_echelon([list(v) for v in e_vectors])
    if len(pivots) != n:
        raise InsufficientPrecision("E-image rank not certified")
    comp = [i for i in range(n2) if i not in pivots]

    def project(vec):
        w = list(vec)
        for r, col in enumerate(pivots):
            c = w[col]
            if c.known_zero_at_precision():
                continue
            fct = c * rows[r][col].inv()
            for j in range(n2):
                w[j] = w[j] - fct * rows[r][j]
        return [w[j] for j in comp]

    return comp, project


def D_valuation(gamma, E, order=None, g_mat=None):
    """v(det(1 - Ad_gamma; A(E)/E)) on an explicit complement basis."""
    F = E.base
    n = E.n
    n2 = n * n
    if g_mat is None:
        g_mat = multiplication_matrix_base(gamma)
    g_inv = invert(g_mat)
    comp, project = _ad_complement_data(E)
    # columns: (1 - Ad)(unit vector at complement coordinate), projected
    cols = []
    for c_idx in comp:
        i, j = divmod(c_idx, n)
        # basis matrix unit E_ij
        x = [[F.zero()] * n for _ in range(n)]
        x[i][j] = F.one()
        adx = mat_mul(mat_mul(g_mat, x), g_inv)
        vec = [a - b for a, b in zip(flatten_matrix(x), flatten_matrix(adx))]
        cols.append(project(vec))
    m = len(comp)
    mat = [[cols[j][i] for j in range(m)] for i in range(m)]
    det = det_berkowitz(mat)
    val = det.valuation()
    if val is None:
        raise InsufficientPrecision(
            "D_F determinant indistinguishable from zero at this precision")
    return val


def mu_exponents(gamma, E, order=None, g_mat=None, k_F=None, k_tilde=None):
    """(mu_exp, mu_plus_exp): exact lattice indices behind the normalization.

    mu_F = [N_{k_F}(gamma, A) : o_E + P^{k_tilde}]; mu+ is the analogous
    index of (E + N_{k_F}) / (E + P^{k_F}) inside A(E)/E.
    """
    F = E.base
    n = E.n
    n2 = n * n
    if order is None:
        order = HereditaryOrder.of_extension(E)
    if g_mat is None:
        g_mat = multiplication_matrix_base(gamma)
    if k_F is None:
        k_F = order.k0(g_mat, centralizer_dim=n)
        k_tilde = k_F + (-gamma.valuation())
    nk = order.N_k_lattice(order.to_frame(g_mat), k_F)
    # o_E + P^{k_tilde}
    basis = E.basis_elements()
    oe_gens = [flatten_matrix(multiplication_matrix_base(b)) for b in basis]
    pk = order.Pk_lattice(k_tilde)
    cols = [list(c) for c in oe_gens] + [list(c) for c in pk.basis]
    denom = OLattice(F, hermite_column_basis(F, cols, n2))
    mu_exp = index_exponent(nk, denom)

    # quotient side: project along E, then index the projected lattices
    comp, project = _ad_complement_data(E)
    nk_proj = [project(col) for col in nk.basis]
    pkf = order.Pk_lattice(k_F)
    pk_proj = [project(col) for col in pkf.basis]
    m = n2 - n
    top = OLattice(F, hermite_column_basis(F, nk_proj, m))
    bot = OLattice(F, hermite_column_basis(F, pk_proj, m))
    # mu+ can be < 1 (exponent n_F(1-N) changes sign with v(gamma)), so the
    # index here is the signed determinant ratio
    mu_plus_exp = index_exponent_virtual(top, bot)
    return mu_exp, mu_plus_exp


def descent_lambda(beta, E, d):
    """Exponent of lambda = (q_E^{n_F(beta)} mu_F(beta))^{d^2} over q."""
    if E.n == 1:
        raise InputError("descent constant needs E != F")
    inv = elliptic_invariants(beta, E, compute_D=False)
    return d * d * (E.f_res * inv.n_F + inv.mu_exp)


# -- matrix front ends -------------------------------------------------------------


def invariants_of_matrix(mat):
    """EllipticInvariants of a quasi-regular elliptic matrix."""
    cls = classify(mat)
    if not cls.quasi_regular_elliptic:
        raise InputError("matrix is not quasi-regular elliptic")
    minp = cls.factors[0][0]
    E = extension_of_factor(minp)
    gamma = E.root_origin()
    return elliptic_invariants(gamma, E)


class QuasiRegularInvariants:
    """Block data for gamma = (gamma_1, ..., gamma_r) plus the off-diagonal dets."""

    __slots__ = ("blocks", "dMG_val", "dmg_val", "eta_G_exp", "eta_g_exp")

    def to_json_dict(self):
        return {
            "blocks": [b.to_json_dict() for b in self.blocks],
            "dMG_val": self.dMG_val,
            "dmg_val": self.dmg_val,
            "eta_G_exp": self.eta_G_exp,
            "eta_g_exp": self.eta_g_exp,
        }


def eta_exponents_of_matrix(mat, enforce_det_relation=True):
    """(eta_G_exp, eta_g_exp) of a quasi-regular matrix, via M(gamma)-blocks.

    Elliptic blocks use the closed formulas; the off-diagonal contribution is
    v(det(1 - Ad)) resp. v(det(-ad)) on the explicit block complement.
    """
    cls = classify(mat)
    if not cls.quasi_regular:
        raise InputError("matrix is not quasi-regular")
    field = mat[0][0].field
    n_total = len(mat)
    blocks = []
    for (poly, mult, e, f) in cls.factors:
        E = extension_of_factor(poly)
        gamma_i = E.root_origin()
        blocks.append(elliptic_invariants(gamma_i, E, compute_mu=False,
                                          compute_D=False))
    out = QuasiRegularInvariants()
    out.blocks = blocks
    if len(blocks) == 1:
        out.dMG_val = 0
        out.dmg_val = 0
    else:
        out.dMG_val, out.dmg_val = _off_diagonal_det_vals(cls, field)
    out.eta_G_exp = sum(b.eta_G_exp for b in blocks) + out.dMG_val
    out.eta_g_exp = sum(b.eta_g_exp for b in blocks) + out.dmg_val
    if enforce_det_relation:
        det = det_berkowitz(mat)
        dv = det.valuation()
        if dv is not None:
            expected = out.eta_G_exp + (n_total - 1) * dv
            if out.eta_g_exp != expected:
                raise RelationViolated(
                    f"eta_g exponent {out.eta_g_exp} != {expected} "
                    "from |det|^{N-1} eta_G")
    return out


def _off_diagonal_det_vals(cls, field):
    """v(det(1 - Ad)) and v(det(-ad)) on sum of Hom(V_j, V_i), i != j.

    Works in the block companion model determined by the characteristic
    polynomial, which is conjugation invariant.
    """
    comps = []
    for (poly, mult, _e, _f) in cls.factors:
        comp = _companion(poly)
        comps.append(comp)
    val_AD = 0
    val_ad = 0
    for i, ci in enumerate(comps):
        for j, cj in enumerate(comps):
            if i == j:
                continue
            val_AD += _hom_block_det(ci, cj, field, multiplicative=True)
            val_ad += _hom_block_det(ci, cj, field, multiplicative=False)
    return val_AD, val_ad


def _companion(poly):
    field = poly.field
    n = poly.degree()
    out = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n):
        out[i][i - 1] = field.one()
    for i in range(n):
        out[i][n - 1] = -poly.coeff(i)
    return out


def _hom_block_det(ci, cj, field, multiplicative):
    """det of (1 - Ad) resp. (-ad) on Hom(V_j, V_i): u -> ci u cj^{-1} etc."""
    ni, nj = len(ci), len(cj)
    dim = ni * nj
    if multiplicative:
        cj_inv = invert(cj)
    cols = []
    for a in range(ni):
        for b in range(nj):
            u = [[field.zero()] * nj for _ in range(ni)]
            u[a][b] = field.one()
            if multiplicative:
                img = mat_mul(mat_mul(ci, u), cj_inv)
                vec = []
                for ii in range(ni):
                    for jj in range(nj):
                        base = field.one() if (ii == a and jj == b) else field.zero()
                        vec.append(base - img[ii][jj])
            else:
                left = mat_mul(ci, u)
                right = mat_mul(u, cj)
                vec = []
                for ii in range(ni):
                    for jj in range(nj):
                        vec.append(-(left[ii][jj] - right[ii][jj]))
            cols.append(vec)
    mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
    det = det_berkowitz(mat)
    v = det.valuation()
    if v is None:
        raise InsufficientPrecision("off-diagonal determinant vanished at precision")
    return v


def mu_of_matrix(mat):
    """(mu_exp, mu_plus_exp) of a quasi-regular elliptic matrix."""
    inv = invariants_of_matrix(mat)
    return inv.mu_exp, inv.mu_plus_exp
