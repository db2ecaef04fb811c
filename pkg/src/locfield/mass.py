"""Eisenstein enumeration, isomorphism clustering, and Serre's mass formula.

Totally ramified extensions are discovered per divisor e | n over the
unramified base F' of degree n/e: tame e from Kummer candidates x^e - c T
(completeness is certified when the mass sum hits its exact value), wild e
by enumerating Eisenstein coefficient classes at class-sufficient precision.
Entries are pre-grouped by their Krasner truncation (congruent polynomials
generate the same field), so the expensive root-search isomorphism test only
runs between group representatives.

All masses are exact rationals: q^{-sigma} terms with small denominators.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import BudgetExceeded, Inseparable, InputError
from .extfield import (
    LocalFieldExt, build_extension, is_isomorphic, ramification_report,
    roots_in_extension, unramified_field,
)
from .factor import krasner_radius
from .invariants import conductor_c
from .series import make_series
from .seriespoly import SeriesPoly, discriminant_valuation, is_eisenstein

DEFAULT_BUDGET = 400_000


class EisensteinCatalog:
    """All Eisenstein residue classes of degree n at precision M."""

    __slots__ = ("field", "n", "M", "entries")

    def __init__(self, field, n, M, entries):
        self.field = field
        self.n = n
        self.M = M
        self.entries = entries


def eisenstein_count(q, n, M):
    return (q ** (M - 1)) ** (n - 1) * (q - 1) * q ** (M - 2)


def enumerate_eisenstein(field, n, M, budget=DEFAULT_BUDGET):
    """Every Eisenstein polynomial of degree n, coefficients mod p^M."""
    if M < 3:
        raise InputError("precision must be at least 3")
    q = field.kappa.q
    total = eisenstein_count(q, n, M)
    if total > budget:
        raise BudgetExceeded(
            f"catalog would have {total} entries (budget {budget})")
    entries = []
    mid_choices = list(_integral_choices(field, M, unit_lead=False))
    a0_choices = list(_integral_choices(field, M, unit_lead=True))
    for mids in itertools.product(mid_choices, repeat=n - 1):
        for a0 in a0_choices:
            coeffs = [a0] + list(mids) + [field.one()]
            entries.append(SeriesPoly(field, coeffs))
    return EisensteinCatalog(field, n, M, entries)


def _integral_choices(field, M, unit_lead):
    """Representatives c with v >= 1 mod T^M, as exact truncations.

    Representatives are honest polynomials (exact Laurent data): the class
    structure lives in the enumeration grid, and per-class precision
    sufficiency is checked against the Krasner radius downstream.
    """
    q = field.kappa.q
    if unit_lead:
        heads = range(1, q)
        tail_len = M - 2
        for head in heads:
            for tail in itertools.product(range(q), repeat=tail_len):
                yield make_series(field, 1, (head,) + tail, None)
    else:
        tail_len = M - 1
        for tail in itertools.product(range(q), repeat=tail_len):
            yield make_series(field, 1, tail, None)


class ClassReport:
    """One isomorphism class of the catalog."""

    __slots__ = ("rep", "E", "w", "delta", "sigma", "member_count",
                 "mass_term", "separable", "precision_limited")

    def __init__(self, rep, E, w, delta, sigma, member_count, mass_term,
                 separable, precision_limited):
        self.rep = rep
        self.E = E
        self.w = w
        self.delta = delta
        self.sigma = sigma
        self.member_count = member_count
        self.mass_term = mass_term
        self.separable = separable
        self.precision_limited = precision_limited

    def to_json_dict(self):
        from .series import format_series
        return {
            "rep": [format_series(c) for c in self.rep.coeffs],
            "w": self.w,
            "delta": self.delta,
            "sigma": self.sigma,
            "member_count": self.member_count,
            "mass_term": [self.mass_term.numerator, self.mass_term.denominator],
            "separable": self.separable,
            "precision_limited": self.precision_limited,
        }


def cluster_classes(catalog):
    """Partition the catalog under field isomorphism.

    Entries are grouped first by (delta, Krasner truncation), then group
    representatives are matched by root search; classes come out sorted by
    delta ascending, inseparable entries in their own classes with mass 0.
    Isomorphism testing runs over a reduced-precision copy of the base
    field: class separation only needs the Krasner radius, not the caller's
    full budget.
    """
    from .series import FqT
    field = catalog.field
    work_prec = max(12, 2 * catalog.M + 4)
    if field.default_prec > work_prec:
        kappa = field.kappa
        field = FqT(kappa.p, kappa.r, default_prec=work_prec,
                    modulus=kappa.modulus if kappa.r > 1 else None)
        catalog = EisensteinCatalog(
            field, catalog.n, catalog.M,
            [SeriesPoly(field, [c.map_coeffs(lambda x: x, field)
                                for c in p.coeffs])
             for p in catalog.entries])
    q = field.kappa.q
    n = catalog.n
    cutoff = catalog.M - 2
    groups = {}
    for entry in catalog.entries:
        try:
            delta = discriminant_valuation(entry)
            kr = min(catalog.M, delta + 2)
            sep = True
        except Inseparable:
            delta = None
            kr = catalog.M
            sep = False
        if sep and delta <= cutoff:
            entry = _unit_reduce(entry, catalog.M)
        key = (delta, _trunc_key(entry, kr))
        slot = groups.get(key)
        if slot is None:
            groups[key] = [entry, 1, sep]
        else:
            slot[1] += 1
    classes = []
    order = sorted(groups.items(),
                   key=lambda kv: (kv[0][0] if kv[0][0] is not None else 10 ** 9,
                                   kv[0][1]))
    for (delta, _tk), (rep, count, sep) in order:
        testable = sep and delta <= cutoff
        placed = False
        if testable:
            for cls in classes:
                if cls.separable != sep or cls.delta != delta:
                    continue
                if roots_in_extension(rep, cls.E):
                    cls.member_count += count
                    placed = True
                    break
        if placed:
            continue
        E = build_extension(rep)
        if conductor_c(E.pi(), E) != 0:
            raise InputError("Eisenstein representative with nonzero conductor")
        rr = ramification_report(E, count_automorphisms=testable)
        if sep:
            precision_limited = not testable
            sigma = rr.sigma
            mass = (Fraction(1, rr.w) * Fraction(1, q ** sigma)
                    if testable else Fraction(0))
        else:
            precision_limited = True
            sigma = None
            mass = Fraction(0)
        classes.append(ClassReport(rep, E, rr.w, delta, sigma, count, mass,
                                   sep, precision_limited))
    return classes


def _unit_reduce(poly, M):
    """Same-field canonical form under x -> u x (u a unit).

    The substitution sends a_i to a_i u^{i-n} and the root pi to u^{-1} pi,
    so the generated field is unchanged.  Digits of the unit part of a_0 are
    cleared greedily (at short working precision), collapsing unit-orbit
    members to one key before the expensive isomorphism testing.
    """
    field = poly.field
    kappa = field.kappa
    n = poly.degree()
    window = M + 2
    w = poly.coeffs[0].shift(-1).truncate(window)  # unit part of a_0
    u_total = field.one()
    for j in range(1, M):
        digit = w.coeff(j) if (w.codes or w.prec is None) else 0
        if digit == 0:
            continue
        for eps in range(1, kappa.q):
            step = field.one() + field.from_code(eps, j)
            factor = (step.inv(prec=window) ** n).truncate(window)
            w_try = (w * factor).truncate(window)
            if w_try.coeff(j) == 0:
                w = w_try
                u_total = u_total * step
                break
    u_inv = u_total.inv(prec=window + n)
    invpows = [field.one()]
    for _ in range(n):
        invpows.append((invpows[-1] * u_inv).truncate(window + n))
    out = []
    for i, c in enumerate(poly.coeffs):
        out.append((c * invpows[n - i]).truncate(M + 1))
    return SeriesPoly(field, [_exactify(c) for c in out])


def _exactify(c):
    """Exact truncation of a series (drop the O-tail after canonicalization)."""
    if c.prec is None:
        return c
    return make_series(c.field, c.v if c.codes else 0, c.codes, None)


def _trunc_key(poly, k):
    out = []
    for c in poly.coeffs:
        codes = []
        if c.codes:
            for i, code in enumerate(c.codes):
                if c.v + i < k:
                    codes.append((c.v + i, code))
        out.append(tuple(codes))
    return tuple(out)


# -- class discovery for the mass sums ------------------------------------------


def tame_candidates(Fp, e):
    """x^e - c T over F' for lifts c of the unit residues (Kummer forms)."""
    out = []
    for code in range(1, Fp.kappa.q):
        coeffs = [-(Fp.from_code(code, 1))] + [Fp.zero()] * (e - 1) + [Fp.one()]
        out.append(SeriesPoly(Fp, coeffs))
    return out


def discover_totally_ramified(Fp, e, delta_prime_max, M, budget=DEFAULT_BUDGET):
    """Isomorphism classes of totally ramified degree-e extensions of F'
    with delta(E/F') <= delta_prime_max, as ClassReports over F'.

    Tame e: Kummer candidates (classically complete; the caller certifies
    completeness through the exact mass identity).  Wild e: bounded
    Eisenstein enumeration at class-sufficient precision.
    """
    p = Fp.kappa.p
    if e == 1:
        triv = SeriesPoly(Fp, [-(Fp.T()), Fp.one()])
        E = build_extension(triv)
        rr = ramification_report(E)
        mass = Fraction(1, rr.w)
        return [ClassReport(triv, E, rr.w, 0, 0, 1, mass, True, False)]
    if e % p:
        cands = tame_candidates(Fp, e)
        catalog = EisensteinCatalog(Fp, e, M, cands)
        return cluster_classes(catalog)
    K = min(M, delta_prime_max + 2)
    if K < 3:
        K = 3
    catalog = enumerate_eisenstein(Fp, e, K, budget=budget)
    classes = cluster_classes(catalog)
    return [c for c in classes
            if not c.separable or c.delta <= delta_prime_max]


class MassReport:
    """Sums of the mass formula in its three forms."""

    __slots__ = ("q", "n", "M", "D_max", "sum_totally_ramified",
                 "weighted_sum", "per_e_sums", "grand_sum", "per_e_classes",
                 "partial_sums", "flags")

    def to_json_dict(self):
        def frac(x):
            return [x.numerator, x.denominator]
        return {
            "q": self.q, "n": self.n, "M": self.M, "D_max": self.D_max,
            "sum_totally_ramified": frac(self.sum_totally_ramified),
            "weighted_sum": frac(self.weighted_sum),
            "per_e_sums": {str(e): frac(v) for e, v in self.per_e_sums.items()},
            "grand_sum": frac(self.grand_sum),
            "partial_sums": [[d, frac(s)] for d, s in self.partial_sums],
            "classes": {str(e): [c.to_json_dict() for c in cl]
                        for e, cl in self.per_e_classes.items()},
            "flags": self.flags,
        }


def mass_sums(field, n, M, D_max=None, budget=DEFAULT_BUDGET):
    """Mass sums over all e | n; exact rationals throughout.

    sum_totally_ramified counts subfields: sum over classes of
    (n / w) q^{-sigma}; weighted_sum is sum (1/w) q^{-sigma}; the grand sum
    aggregates (1/w) q_E^{-sigma} over every degree-n class and equals
    sum_{e | n} e/n when complete.
    """
    if D_max is None:
        D_max = M - 2
    q = field.kappa.q
    report = MassReport()
    report.q = q
    report.n = n
    report.M = M
    report.D_max = D_max
    report.per_e_sums = {}
    report.per_e_classes = {}
    report.flags = []
    grand = Fraction(0)
    tot_sum = Fraction(0)
    weighted = Fraction(0)
    partial = {}
    for e in sorted(d for d in range(1, n + 1) if n % d == 0):
        f = n // e
        Fp = unramified_field(field, f) if f > 1 else field
        delta_prime_max = D_max // f
        classes = discover_totally_ramified(Fp, e, delta_prime_max, M,
                                            budget=budget)
        report.per_e_classes[e] = classes
        e_sum = Fraction(0)
        for cls in classes:
            if not cls.separable:
                report.flags.append(f"e={e}: inseparable class excluded from mass")
                continue
            if cls.precision_limited:
                report.flags.append(f"e={e}: class at delta'={cls.delta} "
                                    "is precision limited")
            sigma = cls.sigma  # sigma(E/F) = sigma(E/F') for unramified F'/F
            w_over_F = f * cls.w
            # q_E = q_{F'} = q^f
            e_sum += Fraction(1, w_over_F) * Fraction(1, (q ** f) ** sigma)
            if e == n:
                tot_sum += Fraction(n, w_over_F) * Fraction(1, q ** sigma)
                weighted += Fraction(1, w_over_F) * Fraction(1, q ** sigma)
                delta_F = f * cls.delta
                partial[delta_F] = partial.get(delta_F, Fraction(0)) + \
                    Fraction(n, w_over_F) * Fraction(1, q ** sigma)
        report.per_e_sums[e] = e_sum
        grand += e_sum
    report.sum_totally_ramified = tot_sum
    report.weighted_sum = weighted
    report.grand_sum = grand
    acc = Fraction(0)
    out = []
    for d in sorted(partial):
        acc += partial[d]
        out.append((d, acc))
    report.partial_sums = out
    return report
