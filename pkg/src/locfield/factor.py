"""Local factorization of monic polynomials over F_q((T)).

The recursion is a simplified iterated-Newton-polygon scheme:

  1. derivative zero: f = h(x^p); factor h and pull factors back through the
     p-th power map (the field is imperfect, so H(x^p) is irreducible exactly
     when the coefficients of H are not all p-th powers);
  2. squarefree reduction by gcd(f, f') (legitimate here: f' != 0);
  3. coprime residue factorization: multi-factor Hensel splitting;
  4. single residue factor: either a certified irreducibility criterion
     (one segment of slope -h/m with m = deg, or irreducible residual
     polynomial), a shift of the center, or a base change - unramified when
     the residual data lives in an extension of the residue field, ramified
     (T = S^m) when a slope denominator must be cleared - followed by a
     recursive factorization and descent of the factor multiset.

Inseparable irreducibles are certified by polygon/segment data only; no
gcd(f, f') is ever taken on them (branch 1 removes them first).

Everything is verified: the returned factors re-multiply to the input modulo
the working precision, or FactorizationIncomplete is raised.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    FactorizationIncomplete, InputError, Inseparable, InsufficientPrecision,
)
from .gf import GF, embedding, pol_ext_gcd, pol_factor, pol_roots, pol_trim
from .series import FqT, SeriesField, make_series
from .seriespoly import SeriesPoly, discriminant_valuation, newton_polygon

_MAX_DEPTH = 60


# -- small helpers -----------------------------------------------------------

def residue_codes(f):
    """Reduction of an integral polynomial modulo T, as kappa codes."""
    out = []
    for c in f.coeffs:
        if c.codes and c.v < 0:
            raise InputError("polynomial is not integral")
        out.append(c.residue())
    return pol_trim(out)


def lift_kappa_poly(field, codes):
    return SeriesPoly(field, [field.from_code(c) for c in codes])


def poly_zero_mod(f, k):
    """All coefficients provably zero modulo T^k."""
    for c in f.coeffs:
        if c.codes:
            if c.v < k:
                return False
        elif c.prec is not None and c.prec < k:
            return False
    return True


def working_prec(f):
    best = None
    for c in f.coeffs:
        if c.prec is not None:
            best = c.prec if best is None else min(best, c.prec)
    return best if best is not None else f.field.default_prec


def _monic_integral_check(f):
    if not f.is_monic():
        raise InputError("factor_local requires a monic polynomial")
    for c in f.coeffs:
        if c.codes and c.v < 0:
            return False
    return True


# -- Hensel lifting -----------------------------------------------------------

def hensel_split_pair(f, gbar, hbar, target):
    """Lift the coprime residue factorization f' = gbar*hbar to precision.

    Classic quadratic lifting; both lifted factors are monic.  Raises
    InsufficientPrecision if the update ever stops contracting.
    """
    field = f.field
    kappa = field.kappa
    d, sbar, tbar = pol_ext_gcd(kappa, gbar, hbar)
    if d != (1,):
        raise InputError("hensel_split_pair: residue factors not coprime")
    g = lift_kappa_poly(field, gbar)
    h = lift_kappa_poly(field, hbar)
    s = lift_kappa_poly(field, sbar)
    t = lift_kappa_poly(field, tbar)
    dg, dh = len(gbar) - 1, len(hbar) - 1
    target = min(target, working_prec(f))
    last_gain = 0
    for _ in range(64):
        e = (f - g * h).truncate_coeffs(target)
        if poly_zero_mod(e, target):
            return (g.truncate_coeffs(target).force_monic_leading(),
                    h.truncate_coeffs(target).force_monic_leading())
        gain = _poly_min_val(e)
        if gain is None or gain >= target:
            return (g.truncate_coeffs(target).force_monic_leading(),
                    h.truncate_coeffs(target).force_monic_leading())
        if gain <= last_gain:
            raise InsufficientPrecision("hensel lifting stopped contracting")
        last_gain = gain
        q, r = (s * e).divmod(h)
        g = _degree_cap((g + t * e + q * g).truncate_coeffs(target), dg, gain)
        h = _degree_cap((h + r).truncate_coeffs(target), dh, gain)
        b = (s * g + t * h - SeriesPoly(field, [field.one()])).truncate_coeffs(target)
        bv = _poly_min_val(b)
        cap_st = max(1, bv if bv is not None else gain)
        c2, d2 = (s * b).divmod(h)
        s = _degree_cap((s - d2).truncate_coeffs(target), dh - 1, cap_st)
        t = _degree_cap((t - t * b - c2 * g).truncate_coeffs(target), dg - 1, cap_st)
    raise FactorizationIncomplete("hensel lifting exceeded its iteration budget")


def _degree_cap(f, dcap, minval):
    """Drop coefficients above degree dcap; they must be deep (>= T^minval).

    Working modulo T^k keeps the textbook degree bounds of the Hensel step;
    full series arithmetic leaves junk of valuation >= k above them, which
    this removes (and certifies as junk).
    """
    if len(f.coeffs) <= dcap + 1:
        return f
    for c in f.coeffs[dcap + 1:]:
        if c.codes and c.v < minval:
            raise InsufficientPrecision("hensel degree bound violated")
    return SeriesPoly(f.field, f.coeffs[:dcap + 1])


def _poly_min_val(f):
    best = None
    for c in f.coeffs:
        if c.codes:
            best = c.v if best is None else min(best, c.v)
        elif c.prec is not None:
            best = c.prec if best is None else min(best, c.prec)
    return best


def hensel_split_multi(f, residue_pieces, target):
    """Split f along pairwise-coprime residue pieces (kappa polynomials)."""
    if len(residue_pieces) == 1:
        return [f]
    kappa = f.field.kappa
    first = residue_pieces[0]
    rest = (1,)
    from .gf import pol_mul
    for piece in residue_pieces[1:]:
        rest = pol_mul(kappa, rest, piece)
    g, h = hensel_split_pair(f, first, rest, target)
    return [g] + hensel_split_multi(h, residue_pieces[1:], target)


# -- base changes --------------------------------------------------------------

class _Change:
    """A base change F -> F2 with coefficient maps and a rationality test."""

    def __init__(self, field, field2, fwd, back):
        self.field = field
        self.field2 = field2
        self.fwd = fwd
        self.back = back  # returns None when not rational over the base

    def fwd_poly(self, f):
        return SeriesPoly(self.field2, [self.fwd(c) for c in f.coeffs])

    def back_poly(self, f):
        out = []
        for c in f.coeffs:
            b = self.back(c)
            if b is None:
                return None
            out.append(b)
        return SeriesPoly(self.field, out)


def unramified_change(field, u):
    """F_q((T)) -> F_{q^u}((T)) by a residue-field embedding."""
    kappa = field.kappa
    kappa2 = GF(kappa.p, kappa.r * u)
    field2 = FqT(kappa.p, kappa.r * u, default_prec=field.default_prec)
    emb = embedding(kappa, kappa2)
    inv = {}
    for i, code in enumerate(emb):
        inv[code] = i

    def fwd(series):
        return series.map_coeffs(lambda c: emb[c], field2)

    def back(series):
        codes = []
        for c in series.codes:
            if c not in inv:
                return None
            codes.append(inv[c])
        return make_series(field, series.v, codes, series.prec)

    return _Change(field, field2, fwd, back)


def ramified_change(field, m):
    """F = F_q((T)) -> F2 = F_q((S)) with T = S^m (totally ramified, degree m)."""
    if m == 1:
        ident = _Change(field, field, lambda s: s, lambda s: s)
        return ident
    field2 = FqT(field.kappa.p, field.kappa.r,
                 default_prec=field.default_prec * m,
                 modulus=field.kappa.modulus if field.kappa.r > 1 else None)

    def fwd(series):
        if series.is_exact_zero():
            return field2.zero()
        codes = []
        for i, c in enumerate(series.codes):
            if i:
                codes.extend([0] * (m - 1))
            codes.append(c)
        prec = None if series.prec is None else series.prec * m
        return make_series(field2, series.v * m, codes, prec)

    def back(series):
        if series.is_exact_zero():
            return field.zero()
        prec = None if series.prec is None else -((-series.prec) // m)
        if not series.codes:
            return make_series(field, 0 if prec is None else prec, (), prec)
        if series.v % m:
            return None
        codes = []
        for i, c in enumerate(series.codes):
            if i % m == 0:
                codes.append(c)
            elif c != 0:
                return None
        return make_series(field, series.v // m, codes, prec)

    return _Change(field, field2, fwd, back)


def _descend_multiset(f, factors2, change, scale_back):
    """Descend a factor multiset over field2 to the base field.

    `factors2` is a list of (poly over field2, multiplicity); `scale_back`
    maps a field2 polynomial back into base-field x-coordinates (undoing any
    x -> S^h y substitution) before the rationality test.  Minimal
    sub-multisets whose product descends give the base-field irreducible
    factors.
    """
    instances = []
    for poly, mult in factors2:
        instances.extend([poly] * mult)
    out = {}
    guard = 0
    while instances:
        guard += 1
        if guard > 64:
            raise FactorizationIncomplete("descent did not stabilize")
        found = None
        for size in range(1, len(instances) + 1):
            for combo in itertools.combinations(range(len(instances)), size):
                prod = instances[combo[0]]
                for idx in combo[1:]:
                    prod = prod * instances[idx]
                cand = change.back_poly(scale_back(prod))
                if cand is not None:
                    found = (combo, cand)
                    break
            if found:
                break
        if not found:
            raise FactorizationIncomplete(
                "no sub-multiset of conjugate factors descends to the base field")
        combo, cand = found
        for idx in sorted(combo, reverse=True):
            instances.pop(idx)
        key = cand
        out[key] = out.get(key, 0) + 1
    merged = {}
    for poly, mult in out.items():
        hit = None
        for seen in merged:
            if seen.same_value(poly):
                hit = seen
                break
        if hit is None:
            merged[poly] = mult
        else:
            merged[hit] += mult
    return list(merged.items())


# -- residual polynomial --------------------------------------------------------

def residual_polynomial(f, h, m):
    """Residual polynomial of the single segment of slope -h/m (length = deg f).

    Coefficient j is the residue of a_{j*m} / T^{h*(s-j)}; points above the
    segment contribute zero.  Raises when a needed coefficient is uncertified.
    """
    n = f.degree()
    s = n // m
    kappa = f.field.kappa
    out = []
    for j in range(s + 1):
        want = h * (s - j)
        c = f.coeff(j * m)
        if c.codes:
            if c.v == want:
                out.append(c.codes[0])
            elif c.v > want:
                out.append(0)
            else:
                raise InputError("coefficient below the declared segment")
        else:
            if c.prec is not None and c.prec <= want:
                raise InsufficientPrecision(
                    f"residual coefficient {j} undetermined")
            out.append(0)
    return pol_trim(out)


# -- the main recursion ----------------------------------------------------------

def factor_local(f, target=None):
    """Monic irreducible factorization [(g_i, m_i)] over F_q((T)).

    The product of the output re-multiplies to f modulo the working
    precision; each g_i is certified irreducible.  Raises
    FactorizationIncomplete or InsufficientPrecision when certification is
    impossible at this precision.
    """
    field = f.field
    d = f.degree()
    if d < 0:
        raise InputError("cannot factor the zero polynomial")
    if not f.is_monic():
        raise InputError("factor_local requires a monic polynomial")
    if target is None:
        target = working_prec(f)
    # rescale to integral coefficients: g(y) = T^(k*deg) * f(y * T^-k)
    k = 0
    for i, c in enumerate(f.coeffs):
        if c.codes and c.v < 0 and i < d:
            k = max(k, (-c.v + (d - i) - 1) // (d - i))
    if k > 0:
        g = _scale_roots_up(f, k)
        fac = _factor(g, target + k * d, 0, False)
        out = []
        for piece, mult in fac:
            out.append((_scale_roots_down(piece, k), mult))
        return _verify_product(f, out, target)
    fac = _factor(f, target, 0, False)
    return _verify_product(f, fac, target)


def _scale_roots_up(f, k):
    """g(y) = T^(k*deg) f(y T^-k): integral when k is large enough."""
    field = f.field
    d = f.degree()
    out = []
    for i, c in enumerate(f.coeffs):
        out.append(c.shift(k * (d - i)))
    return SeriesPoly(field, out)


def _scale_roots_down(f, k):
    field = f.field
    d = f.degree()
    out = []
    for i, c in enumerate(f.coeffs):
        out.append(c.shift(-k * (d - i)))
    return SeriesPoly(field, out)


def _verify_product(f, factors, target):
    field = f.field
    prod = SeriesPoly(field, [field.one()])
    for g, m in factors:
        for _ in range(m):
            prod = prod * g
    diff = prod - f
    # every coefficient must vanish to its own (propagated) precision, and
    # the propagated precision must not have collapsed
    if _certified_state(diff) == "nonzero":
        raise FactorizationIncomplete(
            "factor product does not reproduce the input at working precision")
    floor = min(target, working_prec(f))
    got = working_prec(diff)
    if got is not None and got < min(4, floor):
        raise FactorizationIncomplete(
            "factor product verified only at collapsed precision")
    return factors


def _factor(f, target, depth, squarefree):
    """Recursive worker; returns [(monic irreducible, multiplicity)].

    `squarefree` records that f is known to divide a squarefree polynomial;
    divisors inherit it, as do separable base changes and shifts, so the
    fragile gcd-based reduction only ever runs where it is needed.
    """
    if depth > _MAX_DEPTH:
        raise FactorizationIncomplete("factorization recursion budget exceeded")
    field = f.field
    n = f.degree()
    if n == 0:
        return []
    if n == 1:
        return [(f, 1)]
    if not _monic_integral_check(f):
        raise InputError("internal: non-integral polynomial in recursion")

    if not squarefree:
        deriv = f.derivative()
        dstate = _certified_state(deriv)
        if dstate == "zero":
            return _factor_frobenius_kernel(f, target, depth)
        if dstate == "unknown":
            raise InsufficientPrecision(
                "derivative indistinguishable from zero at this precision")
        # squarefree reduction (valid: derivative certified nonzero);
        # if precision blocks the Euclid steps, proceed without the
        # reduction: the polygon machinery either untangles repeated
        # factors or fails honestly, and the product check gates output.
        try:
            g = _poly_gcd_monic(f, deriv, target)
        except InsufficientPrecision:
            g = None
        if g is not None and g.degree() > 0:
            return _factor_with_multiplicities(f, g, target, depth)
        if g is not None:
            squarefree = True

    fbar = residue_codes(f)
    kappa = field.kappa
    pieces = pol_factor(kappa, fbar)
    if len(pieces) > 1:
        from .gf import pol_mul
        residue_parts = []
        for gbar, e in pieces:
            part = (1,)
            for _ in range(e):
                part = pol_mul(kappa, part, gbar)
            residue_parts.append(part)
        split = hensel_split_multi(f, residue_parts, target)
        out = []
        for piece in split:
            out.extend(_factor(piece, target, depth + 1, squarefree))
        return out

    gbar, etot = pieces[0]
    u = len(gbar) - 1
    if etot == 1:
        return [(f, 1)]  # irreducible: residue irreducible of full degree

    if u > 1:
        # unramified base change splits the residue factor
        change = unramified_change(field, u)
        f2 = change.fwd_poly(f)
        factors2 = _factor(f2, target, depth + 1, squarefree)
        return _descend_multiset(f, factors2, change, lambda poly: poly)

    # gbar linear: x - c
    c = kappa.neg(gbar[0]) if len(gbar) == 2 else 0
    if u == 1 and c != 0:
        shift = field.from_code(c)
        f2 = f.compose_linear(shift)  # f(x + c)
        fac = _factor(f2, target, depth + 1, squarefree)
        return [(piece.compose_linear(-shift), m) for piece, m in fac]

    # f == x^n mod T: extract exact powers of x
    a0 = f.coeff(0)
    if a0.is_exact_zero():
        k = 0
        while k < n and f.coeff(k).is_exact_zero():
            k += 1
        lazy_block = any(f.coeff(i).is_lazy_zero() for i in range(k))
        if lazy_block:
            raise InsufficientPrecision("x-divisibility undecided at this precision")
        x = SeriesPoly(field, [field.zero(), field.one()])
        rest = SeriesPoly(field, list(f.coeffs[k:]))
        out = [(x, k)] if k else []
        out.extend(_factor(rest, target, depth + 1, squarefree))
        return out
    if a0.is_lazy_zero():
        return _split_deep_simple_root(f, target, depth, squarefree)

    np_ = newton_polygon(f)
    segments = np_.segments

    # last (shallowest) slope -h/m
    slope = segments[-1][0]
    h, m = -slope.numerator, slope.denominator
    if len(segments) == 1 and m == n:
        return [(f, 1)]  # totally ramified piece: slope denominator = degree

    if len(segments) == 1 and m >= 1:
        rbar = residual_polynomial(f, h, m)
        rfac = pol_factor(kappa, rbar)
        if len(rfac) == 1 and rfac[0][1] == 1:
            return [(f, 1)]  # irreducible residual certifies irreducibility
        if len(rfac) == 1 and len(rfac[0][0]) - 1 > 1:
            chg = unramified_change(field, len(rfac[0][0]) - 1)
            f2 = chg.fwd_poly(f)
            factors2 = _factor(f2, target, depth + 1, squarefree)
            return _descend_multiset(f, factors2, chg, lambda poly: poly)

    # clear the slope denominator / separate segments: x = S^h y over T = S^m
    change = ramified_change(field, m)
    f2 = change.fwd_poly(f)
    g = _scale_roots_generic(f2, h)   # g(y) = S^(-h n) f2(S^h y), integral
    target2 = target * m
    sf2 = squarefree and (m % field.kappa.p != 0)
    factors2 = _factor(g, target2, depth + 1, sf2)

    def scale_back(poly):
        return _unscale_roots_generic(poly, h)

    return _descend_multiset(f, factors2, change, scale_back)


def _split_deep_simple_root(f, target, depth, squarefree):
    """Constant term zero modulo T^P: split off the unique deep root.

    Quantitative Hensel: if v(a_1) = m1 is certified and P > 2*m1, f has a
    unique root of valuation > m1 in the base field; it is indistinguishable
    from 0 here, so the linear factor carries a lazy-zero constant term.
    """
    field = f.field
    a0 = f.coeff(0)
    a1 = f.coeff(1)
    bound = a0.prec
    if not a1.codes or bound is None or bound <= 2 * a1.v:
        raise InsufficientPrecision(
            "constant term undetermined and no certified simple deep root")
    from .series import TruncatedSeries
    root_prec = bound - a1.v
    rho = TruncatedSeries(field, root_prec, (), root_prec)  # 0 mod T^root_prec
    lin = SeriesPoly(field, [rho, field.one()])
    rest, rem = f.divmod(lin)
    if not poly_zero_mod(rem, min(target, root_prec)):
        raise InsufficientPrecision("deep-root division left a visible remainder")
    out = [(lin, 1)]
    out.extend(_factor(rest, target, depth + 1, squarefree))
    return out


def _scale_roots_generic(f, hshift):
    """g(y) = S^(-h*deg) f(S^h y)."""
    field = f.field
    d = f.degree()
    out = []
    for i, c in enumerate(f.coeffs):
        out.append(c.shift(hshift * (i - d)))
    return SeriesPoly(field, out)


def _unscale_roots_generic(f, hshift):
    """Undo _scale_roots_generic on a (descended) factor: S^(h*deg) f(y/S^h)."""
    field = f.field
    d = f.degree()
    out = []
    for i, c in enumerate(f.coeffs):
        out.append(c.shift(hshift * (d - i)))
    return SeriesPoly(field, out)


def _factor_frobenius_kernel(f, target, depth):
    """f with f' = 0: f = h(x^p); pull the factorization of h back."""
    field = f.field
    p = field.kappa.p
    n = f.degree()
    coeffs = []
    for i in range(0, n + 1, p):
        coeffs.append(f.coeff(i))
    for i in range(n + 1):
        if i % p and not f.coeff(i).known_zero_at_precision():
            raise InputError("derivative zero but stray coefficients present")
    h = SeriesPoly(field, coeffs)
    out = []
    for H, mult in _factor(h, target, depth + 1, False):
        root = _poly_pth_root_fq_t(H)
        if root is not None:
            out.append((root, mult * p))
        else:
            comp = SeriesPoly(field,
                              _interleave_coeffs(field, H.coeffs, p))
            out.append((comp, mult))
    return out


def _certified_state(f):
    """'zero' (all exact zeros), 'nonzero' (some certified coeff), or 'unknown'."""
    saw_lazy = False
    for c in f.coeffs:
        if c.codes:
            return "nonzero"
        if c.is_lazy_zero():
            saw_lazy = True
    return "unknown" if saw_lazy else "zero"


def _interleave_coeffs(field, coeffs, p):
    out = []
    for i, c in enumerate(coeffs):
        if i:
            out.extend([field.zero()] * (p - 1))
        out.append(c)
    return out


def _poly_pth_root_fq_t(H):
    """G with G^p = H(x^p) if the coefficients of H are p-th powers, else None.

    In kappa((T)) the p-th powers are the series supported on exponents
    divisible by p (kappa itself is perfect).
    """
    field = H.field
    p = field.kappa.p
    kappa = field.kappa
    out = []
    for c in H.coeffs:
        if c.is_exact_zero():
            out.append(c)
            continue
        if not c.codes:
            raise InsufficientPrecision(
                "p-th power test undetermined at this precision")
        if c.v % p:
            return None
        codes = []
        for i, code in enumerate(c.codes):
            if i % p == 0:
                codes.append(kappa.pth_root(code))
            elif code != 0:
                return None
        prec = None if c.prec is None else -((-c.prec) // p)
        out.append(make_series(field, c.v // p, codes, prec))
    return SeriesPoly(field, out)


def _certified_trimmed(f):
    """Strip trailing zeros, refusing to guess about lazy ones."""
    coeffs = list(f.coeffs)
    while coeffs and coeffs[-1].known_zero_at_precision():
        if coeffs[-1].is_lazy_zero():
            raise InsufficientPrecision(
                "polynomial degree undetermined (lazy leading coefficient)")
        coeffs.pop()
    return SeriesPoly(f.field, coeffs)


def _poly_gcd_monic(f, g, target):
    """Monic gcd over F[x] with certified degree decisions."""
    a, b = f, g
    while True:
        bt = _certified_trimmed(b)
        if bt.degree() < 0:
            break
        _, r = a.divmod(bt)
        a, b = bt, r
    a = _certified_trimmed(a)
    if a.degree() < 0:
        return a
    lead_inv = a.leading().inv()
    return a.scale(lead_inv)


def _factor_with_multiplicities(f, g, target, depth):
    """f with nontrivial gcd(f, f') = g: factor the squarefree part, divide out."""
    field = f.field
    fs = f.divmod(g)[0]
    base_factors = _factor(fs, target, depth + 1, True)
    out = []
    rest = f
    for piece, _ in base_factors:
        mult = 0
        while True:
            q, r = rest.divmod(piece)
            if poly_zero_mod(r, min(target, working_prec(rest))):
                rest = q
                mult += 1
            else:
                break
        if mult:
            out.append((piece, mult))
    rest = rest.trimmed()
    if rest.degree() > 0:
        # leftover p-th-power part (all multiplicities divisible by p)
        out.extend(_factor(rest, target, depth + 1, False))
        # merge duplicates
        merged = []
        for poly, m in out:
            hit = False
            for i, (q, mm) in enumerate(merged):
                if q.same_value(poly):
                    merged[i] = (q, mm + m)
                    hit = True
                    break
            if not hit:
                merged.append((poly, m))
        return merged
    return out


# -- Krasner radius -------------------------------------------------------------

def krasner_radius(f):
    """k such that any monic g = f mod p^k has the same splitting type.

    Conservative bound 1 + v(disc f); raises Inseparable when f' = 0.
    """
    d = f.degree()
    if d < 1:
        raise InputError("krasner radius needs positive degree")
    if d == 1:
        return 1
    if f.derivative().is_zero():
        raise Inseparable("derivative is identically zero")
    return 1 + discriminant_valuation(f)
