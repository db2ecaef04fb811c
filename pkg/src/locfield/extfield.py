"""Finite extensions E/F of F = F_q((T)) in canonical two-step form.

An extension is stored as the unramified part F' = F_{q^f}((T)) followed by
an Eisenstein polynomial phi of degree e over F'; elements are polynomials of
degree < e in the uniformizer pi (the class of x) with F'-series
coefficients.  In this shape the valuation of sum c_i pi^i is exactly
min_i (e*v(c_i) + i) - the terms have distinct valuations mod e, so no
cancellation is possible and v_E is certified whenever the coefficient
valuations are.

Arbitrary irreducible input polynomials are standardized on construction:
(e, f) are read off a sampling certificate (value-group denominators and
Teichmueller residue degrees, certified by e*f = n), a uniformizer is
assembled by a Bezout combination, the residue field is lifted by a
Teichmueller search, and the Eisenstein polynomial comes out of exact linear
algebra over F'.
"""

from __future__ import annotations

import itertools

from .errors import (
    InputError, Inseparable, InseparableRootSearch, InsufficientPrecision,
    NotIrreducible,
)
from .gf import GF, embedding, kappa_decompose
from .linalg import charpoly_berkowitz, det_berkowitz, row_echelon, solve_linear
from .series import FqT, TruncatedSeries, make_series
from .seriespoly import SeriesPoly, is_eisenstein, newton_polygon


class LocalFieldExt:
    """E/F with residue degree f_res, ramification index e, Eisenstein phi."""

    def __init__(self, base, f_res, phi, origin=None, root_origin_coords=None):
        self.base = base
        self.f_res = f_res
        self.e = phi.degree()
        self.n = self.e * f_res
        self.Fp = unramified_field(base, f_res)
        if phi.field != self.Fp:
            raise InputError("phi must live over the unramified subextension")
        if not is_eisenstein(phi):
            raise InputError("phi must be Eisenstein")
        self.phi = phi
        self.origin = origin
        self._root_origin_coords = root_origin_coords
        self.emb = embedding(base.kappa, self.Fp.kappa)
        self._decomp = kappa_decompose(base.kappa, self.Fp.kappa)
        self._cache = {}

    # -- basic elements ------------------------------------------------------

    def zero(self):
        return ExtElem(self, (self.Fp.zero(),) * self.e)

    def one(self):
        return ExtElem(self, (self.Fp.one(),) + (self.Fp.zero(),) * (self.e - 1))

    def pi(self):
        """The canonical uniformizer (class of x)."""
        if self.e == 1:
            # phi = x - a0 with v(a0) = 1: pi is a0 itself
            return ExtElem(self, (-self.phi.coeffs[0],))
        coords = [self.Fp.zero()] * self.e
        coords[1] = self.Fp.one()
        return ExtElem(self, tuple(coords))

    def omega(self):
        """Constant lift of the residue-field generator of kappa'."""
        if self.Fp.kappa.r == 1:
            return self.from_Fprime(self.Fp.one())
        gen_code = self.Fp.kappa.from_coords(
            tuple([0, 1] + [0] * (self.Fp.kappa.r - 2)))
        return self.from_Fprime(self.Fp.from_code(gen_code))

    def from_base(self, series):
        """F -> E."""
        return self.from_Fprime(series.map_coeffs(lambda c: self.emb[c], self.Fp))

    def from_Fprime(self, series):
        return ExtElem(self, (series,) + (self.Fp.zero(),) * (self.e - 1))

    def from_kappa_prime(self, code):
        return self.from_Fprime(self.Fp.from_code(code))

    def root_origin(self):
        """Image of the original defining polynomial's variable, if any."""
        if self._root_origin_coords is None:
            return None
        return ExtElem(self, self._root_origin_coords)

    # -- structure ------------------------------------------------------------

    def basis_elements(self):
        """o-basis of o_E in chain order: omega^j * pi^i, i major."""
        out = []
        om = self.omega()
        pi = self.pi()
        om_pows = [self.one()]
        for _ in range(self.f_res - 1):
            om_pows.append(om_pows[-1] * om)
        acc = self.one()
        for i in range(self.e):
            for j in range(self.f_res):
                out.append(acc * om_pows[j])
            if i < self.e - 1:
                acc = acc * pi
        return out

    def decompose_over_base(self, elem):
        """F-coordinates of elem w.r.t. basis_elements() (exact, no solving)."""
        out = []
        for i in range(self.e):
            c = elem.coords[i]
            rows = [[] for _ in range(self.f_res)]
            pieces = [[] for _ in range(self.f_res)]
            for j in range(self.f_res):
                codes = []
                for code in c.codes:
                    codes.append(self._decomp(code)[j])
                pieces[j] = make_series(self.base, c.v if c.codes else (c.prec or 0),
                                        codes, c.prec)
            out.append(pieces)
        # reorder to basis order (i major, j minor)
        flat = []
        for i in range(self.e):
            for j in range(self.f_res):
                flat.append(out[i][j])
        return flat

    def __eq__(self, other):
        return (isinstance(other, LocalFieldExt)
                and self.base == other.base
                and self.f_res == other.f_res
                and self.phi == other.phi)

    def __hash__(self):
        return hash((self.base, self.f_res, self.phi))

    def __repr__(self):
        return f"LocalFieldExt(e={self.e}, f={self.f_res} over q={self.base.q})"


_UNRAM_CACHE = {}


def unramified_field(base, f_res):
    key = (base.kappa, base.default_prec, f_res)
    fld = _UNRAM_CACHE.get(key)
    if fld is None:
        fld = FqT(base.kappa.p, base.kappa.r * f_res,
                  default_prec=base.default_prec)
        _UNRAM_CACHE[key] = fld
    return fld


class ExtElem:
    """Element of a LocalFieldExt: coords (c_0, ..., c_{e-1}) over F'."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        if len(coords) != parent.e:
            raise InputError("coordinate vector has wrong length")
        self.parent = parent
        self.coords = tuple(coords)

    def __add__(self, other):
        return ExtElem(self.parent,
                       tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return ExtElem(self.parent, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        par = self.parent
        e = par.e
        Fp = par.Fp
        if e == 1:
            return ExtElem(par, (self.coords[0] * other.coords[0],))
        out = [Fp.zero()] * (2 * e - 1)
        for i, a in enumerate(self.coords):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(other.coords):
                if not b.is_exact_zero():
                    out[i + j] = out[i + j] + a * b
        # reduce modulo phi (monic): x^e = -(lower part)
        low = par.phi.coeffs[:e]
        for k in range(2 * e - 2, e - 1, -1):
            c = out[k]
            if c.known_zero_at_precision() and not c.codes:
                if c.is_lazy_zero():
                    # propagate the uncertainty into lower coordinates
                    for i in range(e):
                        out[k - e + i] = out[k - e + i] + c * low[i]
                continue
            for i in range(e):
                out[k - e + i] = out[k - e + i] - c * low[i]
        return ExtElem(par, tuple(out[:e]))

    def __pow__(self, m):
        par = self.parent
        if m < 0:
            return self.inv() ** (-m)
        acc = par.one()
        base = self
        while m:
            if m & 1:
                acc = acc * base
            m >>= 1
            if m:
                base = base * base
        return acc

    def scalar_mul(self, series_Fp):
        return ExtElem(self.parent, tuple(c * series_Fp for c in self.coords))

    def is_zero_known(self):
        return all(c.known_zero_at_precision() for c in self.coords)

    def valuation(self):
        """v_E, certified; None for (known) zero."""
        e = self.parent.e
        best = None
        bound = None
        for i, c in enumerate(self.coords):
            if c.codes:
                v = e * c.v + i
                if best is None or v < best:
                    best = v
            elif c.is_lazy_zero():
                b = e * c.prec + i
                if bound is None or b < bound:
                    bound = b
        if best is None:
            if bound is None:
                return None
            raise InsufficientPrecision("v_E undetermined: element is zero at precision")
        if bound is not None and bound <= best:
            raise InsufficientPrecision("v_E undetermined by a lazy coordinate")
        return best

    def abs_prec(self):
        """Largest k with the element known modulo pi^k (None if exact)."""
        e = self.parent.e
        best = None
        for i, c in enumerate(self.coords):
            if c.prec is not None:
                b = e * c.prec + i
                if best is None or b < best:
                    best = b
        return best

    def inv(self):
        par = self.parent
        cols = [[c] for c in par.one().coords]
        mat = multiplication_matrix_Fprime(self)
        sol = solve_linear(mat, cols)
        return ExtElem(par, tuple(sol[i][0] for i in range(par.e)))

    def __truediv__(self, other):
        return self * other.inv()

    def residue_code(self):
        """Image in kappa_E = kappa' for an integral element."""
        v = self.valuation()
        if v is None:
            return 0
        if v < 0:
            raise InputError("residue of a non-integral element")
        if v > 0:
            return 0
        return self.coords[0].residue()

    def truncate(self, pi_prec):
        """Weaken to absolute pi-adic precision."""
        e = self.parent.e
        out = []
        for i, c in enumerate(self.coords):
            tprec = -((i - pi_prec) // e)  # ceil((pi_prec - i)/e)
            out.append(c.truncate(tprec))
        return ExtElem(self.parent, tuple(out))

    def same_value(self, other, pi_prec=None):
        d = self - other
        if d.is_zero_known():
            if pi_prec is None:
                return True
            ap = d.abs_prec()
            return ap is None or ap >= pi_prec
        return False

    def __eq__(self, other):
        return (isinstance(other, ExtElem) and self.parent == other.parent
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        from .series import format_series
        parts = [f"({format_series(c)})*pi^{i}" for i, c in enumerate(self.coords)
                 if not c.is_exact_zero()]
        return "ExtElem(" + (" + ".join(parts) if parts else "0") + ")"


def multiplication_matrix_Fprime(elem):
    """Matrix of y -> elem*y on E as an F'-space, in the pi-power basis."""
    par = elem.parent
    cols = []
    acc = elem
    pi = par.pi()
    cols.append(list(acc.coords))
    for _ in range(par.e - 1):
        acc = acc * pi
        cols.append(list(acc.coords))
    return [[cols[j][i] for j in range(par.e)] for i in range(par.e)]


def multiplication_matrix_base(elem):
    """Matrix of multiplication on E as an F-space, in chain basis order."""
    par = elem.parent
    basis = par.basis_elements()
    cols = []
    for b in basis:
        cols.append(par.decompose_over_base(elem * b))
    n = par.n
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def norm_to_base(elem):
    return det_berkowitz(multiplication_matrix_base(elem))


def trace_to_base(elem):
    mat = multiplication_matrix_base(elem)
    acc = elem.parent.base.zero()
    for i in range(elem.parent.n):
        acc = acc + mat[i][i]
    return acc


def minimal_polynomial(elem, certify_degree=None):
    """Monic minimal polynomial of elem over F, by first linear dependence."""
    par = elem.parent
    F = par.base
    n = par.n
    vecs = [par.decompose_over_base(par.one())]
    acc = par.one()
    for _ in range(n):
        acc = acc * elem
        vecs.append(par.decompose_over_base(acc))
    for d in range(1, n + 1):
        mat = [[vecs[i][k] for i in range(d)] for k in range(n)]
        try:
            sol = _solve_overdetermined(mat, vecs[d])
        except InsufficientPrecision:
            continue
        if sol is None:
            continue
        coeffs = [-c for c in sol] + [F.one()]
        if certify_degree is not None and d != certify_degree:
            raise InputError("minimal polynomial degree mismatch")
        return SeriesPoly(F, coeffs)
    raise InsufficientPrecision("no certified linear dependence found")


def _solve_overdetermined(mat, rhs):
    """Solve mat * x = rhs (tall system); None when inconsistent."""
    n = len(mat)
    m = len(mat[0])
    aug = [list(mat[i]) + [rhs[i]] for i in range(n)]
    rows, pivots, _ = row_echelon(aug, ncols=m)
    sol = [None] * m
    field = rhs[0].field
    for r, col in enumerate(pivots):
        sol[col] = rows[r][m] * rows[r][col].inv()
    for i in range(len(rows)):
        if i >= len(pivots):
            if not rows[i][m].known_zero_at_precision():
                return None
    if any(s is None for s in sol):
        return None
    return sol


# -- canonicalization ----------------------------------------------------------

def build_extension(phi, origin_hint=None, max_samples=48):
    """Canonical (f, Eisenstein) form of F[x]/(phi), phi monic irreducible."""
    from .factor import factor_local

    F = phi.field
    n = phi.degree()
    if n < 1:
        raise InputError("degree must be >= 1")
    factors = factor_local(phi)
    if len(factors) != 1 or factors[0][1] != 1:
        raise NotIrreducible("defining polynomial factors")

    if n == 1:
        root = -phi.coeffs[0]  # root of x + a0
        return LocalFieldExt(F, 1, SeriesPoly(F, [-F.T(), F.one()]),
                             origin=phi, root_origin_coords=(root,))

    if is_eisenstein(phi):
        # already canonical (f = 1): keep the exact data, root = pi itself
        coords = [F.zero()] * n
        coords[1] = F.one()
        return LocalFieldExt(F, 1, phi, origin=phi,
                             root_origin_coords=tuple(coords))

    quo = _Quotient(F, phi)
    e, f_res, val_samples = _ramification_sampling(quo, max_samples)
    pi_hat = _uniformizer_from_samples(quo, e, val_samples)
    omega_hat = _residue_lift(quo, f_res, e, pi_hat)
    Fp = unramified_field(F, f_res)
    phi_E, x_coords = _eisenstein_by_linear_algebra(quo, Fp, pi_hat, omega_hat, e, f_res)
    E = LocalFieldExt(F, f_res, phi_E, origin=phi, root_origin_coords=x_coords)
    root = E.root_origin()
    check = _eval_poly_ext(phi, E, root)
    ap = check.abs_prec()
    if not check.is_zero_known():
        raise InsufficientPrecision("canonicalization check failed: phi(root) != 0")
    return E


def _eval_poly_ext(poly_F, E, x):
    acc = E.zero()
    for c in reversed(poly_F.coeffs):
        acc = acc * x + E.from_base(c)
    return acc


class _Quotient:
    """Scratch model K = F[x]/(phi) used only during canonicalization."""

    def __init__(self, F, phi):
        self.F = F
        self.phi = phi
        self.n = phi.degree()

    def one(self):
        return SeriesPoly(self.F, [self.F.one()])

    def x(self):
        return SeriesPoly(self.F, [self.F.zero(), self.F.one()])

    def from_base(self, s):
        return SeriesPoly(self.F, [s])

    def mul(self, a, b):
        out = (a * b).divmod(self.phi)[1]
        return out.truncate_coeffs(self.F.default_prec)

    def pow(self, a, m):
        acc = self.one()
        base = a
        while m:
            if m & 1:
                acc = self.mul(acc, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return acc

    def inv(self, a):
        n = self.n
        cols = [[self.F.one() if i == 0 else self.F.zero()] for i in range(n)]
        mat = self.mult_matrix(a)
        sol = solve_linear(mat, cols)
        return SeriesPoly(self.F, [sol[i][0] for i in range(n)])

    def coords(self, a):
        return [a.coeff(i) for i in range(self.n)]

    def mult_matrix(self, a):
        cols = []
        for i in range(self.n):
            xi = SeriesPoly(self.F, [self.F.zero()] * i + [self.F.one()])
            cols.append(self.coords(self.mul(a, xi)))
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def norm(self, a):
        return det_berkowitz(self.mult_matrix(a))

    def nu_F_times_n(self, a):
        """n * v_F(a) = v(N(a)); None for (known) zero."""
        nm = self.norm(a)
        return nm.valuation()

    def same(self, a, b):
        return (a - b).is_zero()


def _ramification_sampling(quo, max_samples):
    """(e, f) certified by value-group and residue-degree sampling."""
    from fractions import Fraction
    import random as _random
    F = quo.F
    n = quo.n
    kappa = F.kappa
    rng = _random.Random(hash(("ram", n, tuple(c.codes for c in quo.phi.coeffs))) & 0xffffffff)
    e_hat = 1
    f_hat = 1
    samples = []  # (element, nu_K) with nu_K = e * nu_F once e is known
    nuF_samples = []  # (element, Fraction nu_F)

    def consider(y):
        nonlocal e_hat, f_hat
        vn = quo.nu_F_times_n(y)
        if vn is None:
            return
        nu = Fraction(vn, n)
        nuF_samples.append((y, nu))
        e_hat = _lcm(e_hat, nu.denominator)
        if nu.denominator == 1:
            # unit part exists over F: sample its residue degree
            unit = quo.mul(y, quo.from_base(F.T(-_floor_div(nu))))
            t = _teichmueller(quo, unit)
            if t is not None:
                d = _residue_degree(quo, t, n)
                if d:
                    f_hat = _lcm(f_hat, _lcm(kappa.r, d) // kappa.r)

    candidates = _candidate_stream(quo, rng)
    for _ in range(max_samples):
        if e_hat * f_hat == n:
            break
        consider(next(candidates))
    if e_hat * f_hat != n:
        raise InsufficientPrecision(
            f"could not certify (e, f): reached e>={e_hat}, f>={f_hat} for n={n}")
    return e_hat, f_hat, nuF_samples


def _floor_div(fr):
    return fr.numerator // fr.denominator


def _lcm(a, b):
    import math
    return a * b // math.gcd(a, b)


def _candidate_stream(quo, rng):
    F = quo.F
    x = quo.x()
    yield x
    yield (x + quo.from_base(F.one()))
    yield quo.mul(x, x) + x
    kappa = F.kappa
    while True:
        coeffs = []
        for i in range(quo.n):
            c = rng.randrange(kappa.q)
            v = rng.randrange(0, 2)
            coeffs.append(F.from_code(c, v) if c else F.zero())
        cand = SeriesPoly(F, coeffs)
        if not cand.is_zero():
            yield cand


def _teichmueller(quo, unit):
    """Teichmueller representative of a unit's residue class in K."""
    F = quo.F
    q = F.kappa.q
    t = unit
    # iterate t -> t^(q^n); each step at least multiplies the 1-unit depth by p
    steps = 1
    prec = F.default_prec
    import math
    need = max(2, math.ceil(math.log(max(prec, 2), max(F.kappa.p, 2))) + 2)
    qk = q ** quo.n
    for _ in range(need):
        t = quo.pow(t, qk)
    # fixed-point check
    if not quo.same(quo.pow(t, qk) - t, quo.from_base(F.zero())) :
        diff = quo.pow(t, qk) - t
        if not all(c.known_zero_at_precision() for c in diff.coeffs):
            return None
    return t


def _residue_degree(quo, teich, n):
    """Degree over F_p of the residue of a Teichmueller representative."""
    p = quo.F.kappa.p
    r = quo.F.kappa.r
    for d in range(1, r * n + 1):
        if (r * n) % d:
            continue
        diff = quo.pow(teich, p ** d) - teich
        if all(c.known_zero_at_precision() for c in diff.coeffs):
            return d
    return 0


def _uniformizer_from_samples(quo, e, nuF_samples):
    """Bezout combination with v_K = 1 from sampled values."""
    import math
    F = quo.F
    # v_K(y) = e * nu_F(y); v_K(T) = e
    items = []
    for y, nu in nuF_samples:
        vk = int(nu * e)
        items.append((y, vk))
    items.append((quo.from_base(F.T()), e))
    # find an integer combination of the v_K's equal to 1
    g = 0
    for _, vk in items:
        g = math.gcd(g, vk)
    if g != 1:
        raise InsufficientPrecision("sampled values do not generate the value group")
    # greedy Bezout over the list
    coeffs = _bezout_combination([vk for _, vk in items])
    acc = quo.one()
    for (y, vk), a in zip(items, coeffs):
        if a == 0:
            continue
        if a > 0:
            acc = quo.mul(acc, quo.pow(y, a))
        else:
            acc = quo.mul(acc, quo.pow(quo.inv(y), -a))
    return acc


def _bezout_combination(vals):
    """Integer coefficients a_i with sum a_i vals_i = 1 (gcd of vals is 1)."""
    import math
    coeffs = [0] * len(vals)
    g = vals[0]
    coeffs[0] = 1
    for i in range(1, len(vals)):
        if g == 1:
            break
        newg = math.gcd(g, vals[i])
        # extended euclid on (g, vals[i])
        x, y = _ext_gcd(g, vals[i])
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
        g = newg
    if g != 1:
        raise InputError("values do not generate Z")
    return coeffs


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    return old_s, old_t


def _residue_lift(quo, f_res, e, pi_hat):
    """Lift of a generator of kappa' = F_{q^f} into K (exact root search)."""
    F = quo.F
    kappa = F.kappa
    if f_res == 1 and kappa.r >= 1:
        # kappa' = kappa: generator of kappa lifted as a constant
        if kappa.r == 1:
            return quo.from_base(F.one())
        gen_code = kappa.from_coords(tuple([0, 1] + [0] * (kappa.r - 2)))
        return quo.from_base(F.from_code(gen_code))
    kappa2 = GF(kappa.p, kappa.r * f_res)
    # find a Teichmueller generator, then a root of kappa2's modulus among
    # its powers
    rng_candidates = _candidate_stream(quo, __import__("random").Random(0xA11CE))
    for _ in range(48):
        y = next(rng_candidates)
        vn = quo.nu_F_times_n(y)
        if vn is None or vn % quo.n:
            continue
        unit = quo.mul(y, quo.from_base(F.T(-vn // quo.n))) if vn else y
        t = _teichmueller(quo, unit)
        if t is None:
            continue
        d = _residue_degree(quo, t, quo.n)
        if d and _lcm(kappa.r, d) // kappa.r == f_res:
            # powers of t run over the cyclic group; find a modulus root
            target = kappa2.modulus
            acc = quo.one()
            for _j in range(kappa2.q - 1):
                acc = quo.mul(acc, t)
                val = _eval_fp_poly(quo, target, acc)
                if all(c.known_zero_at_precision() for c in val.coeffs):
                    return acc
    raise InsufficientPrecision("residue-field generator not found")


def _eval_fp_poly(quo, modulus, x):
    """Evaluate the monic polynomial with F_p coefficients `modulus` at x in K."""
    F = quo.F
    acc = quo.one()
    for c in reversed(modulus):
        acc = quo.mul(acc, x) + quo.from_base(F.from_int(c))
    return acc


def _eisenstein_by_linear_algebra(quo, Fp, pi_hat, omega_hat, e, f_res):
    """Minimal polynomial of pi_hat over F' plus coordinates of x-bar.

    Solves pi^e = sum_{i<e} a_i pi^i with a_i in F', as an F-linear system in
    the basis omega^j pi^i; also expresses x-bar in the same basis.
    """
    F = quo.F
    n = quo.n
    decomp = kappa_decompose(F.kappa, Fp.kappa)
    emb = embedding(F.kappa, Fp.kappa)
    # columns: omega^j pi^i (j < f, i < e)
    basis = []
    om_pows = [quo.one()]
    for _ in range(f_res - 1):
        om_pows.append(quo.mul(om_pows[-1], omega_hat))
    pi_pows = [quo.one()]
    for _ in range(e - 1):
        pi_pows.append(quo.mul(pi_pows[-1], pi_hat))
    cols = []
    for i in range(e):
        for j in range(f_res):
            cols.append(quo.coords(quo.mul(pi_pows[i], om_pows[j])))
    mat = [[cols[c][rw] for c in range(n)] for rw in range(n)]
    pi_e = quo.mul(pi_pows[-1], pi_hat)
    xbar = quo.x()
    rhs = [[quo.coords(pi_e)[rw], quo.coords(xbar)[rw]] for rw in range(n)]
    sol = solve_linear(mat, rhs)

    def fprime_coeff(col):
        out = []
        for i in range(e):
            # a_i = sum_j sol[(i,j)] * gen'^j: assemble kappa'-coded series
            comps = [sol[i * f_res + j][col] for j in range(f_res)]
            out.append(_assemble_kappa_prime_series(F, Fp, comps))
        return out

    a = fprime_coeff(0)
    phi_coeffs = [-c for c in a] + [Fp.one()]
    phi_E = SeriesPoly(Fp, phi_coeffs)
    x_coords = tuple(fprime_coeff(1))
    return phi_E, x_coords


def _assemble_kappa_prime_series(F, Fp, comps):
    """sum_j comps_j * gen'^j as one kappa'-coded series over F'."""
    kappa2 = Fp.kappa
    emb = embedding(F.kappa, kappa2)
    gen = kappa2.from_coords(tuple([0, 1] + [0] * (kappa2.r - 2))) \
        if kappa2.r > 1 else 1
    acc = Fp.zero()
    gpow = 1
    for j, comp in enumerate(comps):
        lifted = comp.map_coeffs(lambda c: kappa2.mul(emb[c], gpow), Fp)
        acc = acc + lifted
        gpow = kappa2.mul(gpow, gen)
    return acc


# -- E as an abstract base field ------------------------------------------------

class BaseFieldModel:
    """E presented as the series field kappa'((S)), S a uniformizer of E.

    The digit expansion uses the canonical coefficient field (the kappa'
    constants of the model), so both directions are ring isomorphisms and
    exact on terminating expansions.
    """

    def __init__(self, E):
        self.E = E
        self.field = FqT(E.base.kappa.p, E.base.kappa.r * E.f_res,
                         default_prec=E.base.default_prec * E.e)
        a0 = E.phi.coeffs[0]
        # pi^e = -a0 * (1 + higher): w0 = residue of pi^e / T
        self._w0 = (-a0).shift(-1).residue()
        self._pi = E.pi()

    def to_series(self, x, pi_prec=None):
        E = self.E
        e = E.e
        kappa2 = E.Fp.kappa
        limit = E.base.default_prec * e
        ap = x.abs_prec()
        if ap is not None:
            limit = min(limit, ap)
        if pi_prec is not None:
            limit = min(limit, pi_prec)
        digits = {}
        cur = x
        pi = self._pi
        pow_cache = {}
        exact_end = False
        while True:
            if cur.is_zero_known():
                exact_end = all(c.is_exact_zero() for c in cur.coords)
                break
            try:
                v = cur.valuation()
            except InsufficientPrecision:
                # a lazy coordinate bounds what is extractable: stop there
                bound = None
                for i, c in enumerate(cur.coords):
                    if c.is_lazy_zero():
                        b = e * c.prec + i
                        bound = b if bound is None else min(bound, b)
                limit = min(limit, bound)
                break
            if v >= limit:
                break
            # residue of cur * pi^(-v) is lead(c_{i0}) * w0^(-j0)
            i0 = v % e
            j0 = v // e
            c = cur.coords[i0]
            lead = c.codes[0]
            if j0 >= 0:
                t = kappa2.mul(lead, kappa2.inv(kappa2.pow(self._w0, j0)))
            else:
                t = kappa2.mul(lead, kappa2.pow(self._w0, -j0))
            digits[v] = t
            piv = pow_cache.get(v)
            if piv is None:
                piv = pi ** v
                pow_cache[v] = piv
            cur = cur - piv.scalar_mul(E.Fp.from_code(t))
        if not digits:
            if exact_end:
                return self.field.zero()
            return make_series(self.field, limit, (), limit)
        vmin = min(digits)
        vmax = max(digits)
        codes = [digits.get(k, 0) for k in range(vmin, vmax + 1)]
        prec = None if exact_end else limit
        return make_series(self.field, vmin, codes, prec)

    def from_series(self, s):
        E = self.E
        if s.is_exact_zero():
            return E.zero()
        if not s.codes:
            return E.zero().truncate(s.prec)
        pi = self._pi
        acc = E.zero()
        power = pi ** s.v
        for i, code in enumerate(s.codes):
            if code:
                acc = acc + power.scalar_mul(E.Fp.from_code(code))
            if i < len(s.codes) - 1:
                power = power * pi
        if s.prec is not None:
            acc = acc.truncate(s.prec)
        return acc


def as_base_field(E):
    return BaseFieldModel(E)


# -- roots ------------------------------------------------------------------------

def roots_in_extension(psi, E, dedupe=True, any_root=False):
    """All roots of the monic F-polynomial psi in E, to working precision.

    Residue-root enumeration plus Newton lifting along v_E, with digit
    branching while the Newton inequality v(psi(x)) > 2 v(psi'(x)) has not
    yet been reached.  Inseparable polynomials are split as sep(x^(p^s))
    first; p-th roots are taken digitwise in the canonical coefficient field.
    """
    F = psi.field
    if not psi.is_monic():
        raise InputError("roots_in_extension requires a monic polynomial")
    p = F.kappa.p
    steps = 0
    work = psi
    while True:
        d = work.derivative()
        state = _poly_state(d)
        if state == "nonzero":
            break
        if state == "unknown":
            raise InsufficientPrecision("separability of psi undetermined")
        coeffs = []
        deg = work.degree()
        for i in range(0, deg + 1, p):
            coeffs.append(work.coeff(i))
        work = SeriesPoly(F, coeffs)
        steps += 1
    g = [E.from_base(c) for c in work.coeffs]
    roots = _roots_separable(g, E, any_root=any_root)
    for _ in range(steps):
        nxt = []
        for r in roots:
            rr = pth_root_elem(r, E)
            if rr is not None:
                nxt.append(rr)
        roots = nxt
    if dedupe:
        out = []
        for r in roots:
            if not any(r.same_value(s) for s in out):
                out.append(r)
        roots = out
    return roots


def _poly_state(f):
    saw_lazy = False
    for c in f.coeffs:
        if c.codes:
            return "nonzero"
        if c.is_lazy_zero():
            saw_lazy = True
    return "unknown" if saw_lazy else "zero"


def _ext_poly_eval(g, x):
    acc = x.parent.zero()
    for c in reversed(g):
        acc = acc * x + c
    return acc


def _ext_poly_derivative(g, E):
    out = []
    for i in range(1, len(g)):
        out.append(g[i].scalar_mul(E.Fp.from_int(i)))
    return out


def _roots_separable(g, E, any_root=False):
    """Peel roots one at a time: find, divide out, repeat."""
    roots = []
    work = list(g)
    while len(work) > 1:
        r = _find_one_root(work, E)
        if r is None:
            break
        roots.append(r)
        if any_root:
            break
        work = _divide_linear(work, r, E)
    return roots


def _divide_linear(g, r, E):
    """Synthetic division of g by (y - r); remainder must be invisible."""
    n = len(g) - 1
    out = [None] * n
    acc = g[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = g[i] + r * acc
    if not acc.is_zero_known():
        raise InsufficientPrecision("root division left a visible remainder")
    return out


def _find_one_root(g, E):
    kappa2 = E.Fp.kappa
    e = E.e
    # zero root
    c0 = g[0]
    if c0.is_zero_known() and all(c.is_exact_zero() for c in c0.coords):
        return E.zero()
    # candidate valuations from the v_E polygon (integer slopes only)
    pts = []
    for i, c in enumerate(g):
        try:
            v = c.valuation()
        except InsufficientPrecision:
            continue
        if v is not None:
            pts.append((i, v))
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    cand_vals = set()
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        num, den = y1 - y2, x2 - x1
        if num % den == 0:
            cand_vals.add(num // den)
    gprime = _ext_poly_derivative(g, E)
    budget = E.base.default_prec * e
    for w in sorted(cand_vals):
        piw = E.pi() ** w
        # residue polynomial of y -> g(pi^w y), normalized by its min valuation
        vals = []
        for i, c in enumerate(g):
            try:
                v = c.valuation()
            except InsufficientPrecision:
                v = None
            vals.append(None if v is None else v + i * w)
        mv = min(v for v in vals if v is not None)
        res = []
        for i, c in enumerate(g):
            if vals[i] == mv:
                shifted = c * (E.pi() ** (i * w - mv) if i * w >= mv
                               else E.pi().inv() ** (mv - i * w))
                res.append(shifted.residue_code())
            else:
                res.append(0)
        from .gf import pol_roots, pol_trim
        for lam in pol_roots(kappa2, pol_trim(res)):
            if lam == 0:
                continue
            approx = piw.scalar_mul(E.Fp.from_code(lam))
            found = _lift_root(g, gprime, approx, w + 1, budget, E)
            if found:
                return found[0]
    return None


def _lift_root(g, gprime, approx, depth, budget, E):
    """Newton when certified, digit branching before that."""
    val = _ext_poly_eval(g, approx)
    if val.is_zero_known():
        return [approx]
    try:
        v0 = val.valuation()
    except InsufficientPrecision:
        return [approx]  # root to available precision
    dval = _ext_poly_eval(gprime, approx)
    v1 = None
    if not dval.is_zero_known():
        try:
            v1 = dval.valuation()
        except InsufficientPrecision:
            v1 = None
    if v1 is not None and v0 > 2 * v1:
        x = approx
        for _ in range(64):
            fx = _ext_poly_eval(g, x)
            if fx.is_zero_known():
                if all(c.is_exact_zero() for c in fx.coords):
                    return [x]
                bound = fx.abs_prec()
                return [x.truncate(bound - v1) if bound is not None else x]
            try:
                vfx = fx.valuation()
            except InsufficientPrecision:
                bound = fx.abs_prec()
                return [x.truncate(bound - v1) if bound is not None else x]
            if vfx >= budget:
                # accuracy of x is only v(f(x)) - v(f'(x)): do not overclaim
                return [x.truncate(vfx - v1)]
            dfx = _ext_poly_eval(gprime, x)
            x = x - fx / dfx
        return [x]
    if depth > budget:
        if v1 is None:
            raise InseparableRootSearch(
                "lifting stalled on a vanishing derivative")
        raise InsufficientPrecision("root lifting exceeded the precision budget")
    # digit walk with a shared shift polynomial: g(approx + y) = sum c_k y^k;
    # along the zero-digit "wait" moves approx does not change, so the c_k
    # are reused and only the pi-power terms advance
    out = []
    kappa2 = E.Fp.kappa
    cs = _shift_poly(g, approx, E)
    deg = len(cs) - 1
    pi = E.pi()
    pid = pi ** depth
    d = depth
    while d <= min(budget, v0 + 1):
        pid_pows = [None, pid]
        for k in range(2, deg + 1):
            pid_pows.append(pid_pows[-1] * pid)
        terms = [None]
        for k in range(1, deg + 1):
            terms.append(cs[k] * pid_pows[k] if k > 1 else cs[1] * pid)
        for delta in range(1, kappa2.q):
            val_c = cs[0]
            dpow = delta
            for k in range(1, deg + 1):
                val_c = val_c + terms[k].scalar_mul(E.Fp.from_code(dpow))
                dpow = kappa2.mul(dpow, delta)
            if val_c.is_zero_known():
                cand = approx + pid.scalar_mul(E.Fp.from_code(delta))
                out.extend(_lift_root(g, gprime, cand, d + 1, budget, E))
                continue
            try:
                vc = val_c.valuation()
            except InsufficientPrecision:
                cand = approx + pid.scalar_mul(E.Fp.from_code(delta))
                out.extend(_lift_root(g, gprime, cand, d + 1, budget, E))
                continue
            if vc > v0:
                cand = approx + pid.scalar_mul(E.Fp.from_code(delta))
                out.extend(_lift_root(g, gprime, cand, d + 1, budget, E))
        d += 1
        pid = pid * pi
    return out


def _shift_poly(g, x, E):
    """Coefficients of g(x + y) as a polynomial in y (Horner, char-p safe)."""
    acc = [g[-1]]
    for i in range(len(g) - 2, -1, -1):
        nxt = [E.zero()] * (len(acc) + 1)
        for k, c in enumerate(acc):
            nxt[k + 1] = nxt[k + 1] + c
            nxt[k] = nxt[k] + c * x
        nxt[0] = nxt[0] + g[i]
        acc = nxt
    return acc


def pth_root_elem(x, E):
    """The p-th root of x in E if it exists (char p: unique), else None."""
    p = E.base.kappa.p
    model = as_base_field(E)
    s = model.to_series(x)
    if s.is_exact_zero():
        return E.zero()
    if not s.codes:
        return E.zero().truncate(s.prec // p)
    kappa2 = E.Fp.kappa
    if s.v % p:
        return None
    codes = []
    for i, c in enumerate(s.codes):
        if i % p == 0:
            codes.append(kappa2.pth_root(c))
        elif c != 0:
            return None
    prec = None if s.prec is None else -((-s.prec) // p)
    root_series = make_series(model.field, s.v // p, codes, prec)
    root = model.from_series(root_series)
    check = root ** p - x
    if not check.is_zero_known():
        return None
    return root


# -- primitive elements, isomorphism, ramification -------------------------------

def primitive_element(E):
    """A generator of E/F, certified by linear independence of its powers."""
    if E.f_res == 1:
        return E.pi()
    if E.e == 1:
        return E.omega()
    candidates = [E.pi() + E.omega()]
    om = E.omega()
    acc = om
    for _ in range(4):
        acc = acc * om
        candidates.append(E.pi() + acc)
    candidates.append(E.pi() * (E.one() + om))
    for cand in candidates:
        if _is_primitive(cand):
            return cand
    raise InsufficientPrecision("no certified primitive element found")


def _is_primitive(elem):
    par = elem.parent
    n = par.n
    vecs = []
    acc = par.one()
    vecs.append(par.decompose_over_base(acc))
    for _ in range(n - 1):
        acc = acc * elem
        vecs.append(par.decompose_over_base(acc))
    try:
        _, pivots, _ = row_echelon([list(v) for v in vecs])
    except InsufficientPrecision:
        return False
    return len(pivots) == n


def defining_polynomial(E):
    """A degree-n monic F-polynomial with a root generating E (origin if known)."""
    if E.origin is not None:
        return E.origin
    prim = primitive_element(E)
    return minimal_polynomial(prim, certify_degree=E.n)


def is_isomorphic(E1, E2):
    """F-isomorphism test: (e, f) match and E1's defining polynomial has a root."""
    if E1.base != E2.base:
        raise InputError("extensions over different base fields")
    if (E1.e, E1.f_res) != (E2.e, E2.f_res):
        return False
    if E1 is E2 or E1 == E2:
        return True
    poly = defining_polynomial(E1)
    return len(roots_in_extension(poly, E2)) > 0


class RamificationReport:
    """e, f, n, different exponent d, delta = f*d, Swan sigma, separable, w."""

    __slots__ = ("e", "f", "n", "d", "delta", "sigma", "separable", "w")

    def __init__(self, e, f, n, d, delta, sigma, separable, w):
        self.e = e
        self.f = f
        self.n = n
        self.d = d
        self.delta = delta
        self.sigma = sigma
        self.separable = separable
        self.w = w

    def to_json_dict(self):
        return {
            "e": self.e, "f": self.f, "n": self.n,
            "d": self.d, "delta": self.delta, "sigma": self.sigma,
            "separable": self.separable, "w": self.w,
        }

    def __repr__(self):
        return (f"RamificationReport(e={self.e}, f={self.f}, d={self.d}, "
                f"delta={self.delta}, sigma={self.sigma}, "
                f"separable={self.separable}, w={self.w})")


def ramification_report(E, count_automorphisms=True):
    """Ramification data of E/F; wild invariants are None when inseparable.

    The different is phi'(pi) (the conductor of o_F'[pi] = o_E is trivial for
    an Eisenstein generator); the unramified part never contributes.
    """
    phi_prime = E.phi.derivative()
    separable = not phi_prime.is_zero()
    d = delta = sigma = None
    if separable:
        val = _eval_Fp_poly_at_pi(phi_prime, E)
        d = val.valuation()
        delta = E.f_res * d
        sigma = d - (E.e - 1)
    w = None
    if count_automorphisms:
        poly = defining_polynomial(E)
        w = len(roots_in_extension(poly, E))
    return RamificationReport(E.e, E.f_res, E.n, d, delta, sigma, separable, w)


def _eval_Fp_poly_at_pi(poly_Fp, E):
    acc = E.zero()
    pi = E.pi()
    for c in reversed(poly_Fp.coeffs):
        acc = acc * pi + E.from_Fprime(c)
    return acc
