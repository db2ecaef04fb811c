import pytest

from locfield import FqT, NotIrreducible, parse_series
from locfield.extfield import (
    as_base_field, build_extension, defining_polynomial, is_isomorphic,
    minimal_polynomial, norm_to_base, primitive_element, pth_root_elem,
    ramification_report, roots_in_extension,
)
from locfield.seriespoly import SeriesPoly

F3 = FqT(3)
F2 = FqT(2)


def poly(field, *texts):
    return SeriesPoly(field, [parse_series(field, t) for t in texts])


def E_x2_minus_T_f3():
    return build_extension(poly(F3, "2*T", "0", "1"))


def E_wild_quadratic_f2():
    return build_extension(poly(F2, "T", "T", "1"))


def E_insep_quadratic_f2():
    return build_extension(poly(F2, "T", "0", "1"))


def E_unram_quadratic_f2():
    return build_extension(poly(F2, "1", "1", "1"))


def test_build_extension_basic_shapes():
    E = E_x2_minus_T_f3()
    assert (E.e, E.f_res) == (2, 1)
    E2 = E_unram_quadratic_f2()
    assert (E2.e, E2.f_res) == (1, 2)
    with pytest.raises(NotIrreducible):
        build_extension(poly(F3, "T", "2 + 2*T", "1"))  # (x-1)(x-T)


def test_root_origin_satisfies_origin():
    for E in [E_x2_minus_T_f3(), E_wild_quadratic_f2(), E_insep_quadratic_f2(),
              E_unram_quadratic_f2()]:
        r = E.root_origin()
        acc = E.zero()
        for c in reversed(E.origin.coeffs):
            acc = acc * r + E.from_base(c)
        assert acc.is_zero_known()


def test_valuation_formula():
    E = E_x2_minus_T_f3()
    pi = E.pi()
    assert pi.valuation() == 1
    assert (pi * pi).valuation() == 2
    assert E.from_base(F3.T()).valuation() == 2  # nu_E = e * nu_F
    assert (pi + E.one()).valuation() == 0
    assert pi.inv().valuation() == -1


def test_norm_valuation_relation():
    # nu(N(x)) = f * nu_E(x)
    E = build_extension(poly(F2, "T^2", "0", "T", "0", "1"))  # e=2, f=2
    pi = E.pi()
    for elem, expect in [(pi, 2 * 1), (pi * pi, 2 * 2), (E.one() + pi, 0)]:
        nv = norm_to_base(elem).valuation()
        assert nv == expect


def test_ramification_report_tame():
    E = E_x2_minus_T_f3()
    rep = ramification_report(E)
    assert (rep.e, rep.f, rep.delta, rep.sigma, rep.separable) == (2, 1, 1, 0, True)
    assert rep.w == 2  # roots +-pi


def test_ramification_report_wild():
    E = E_wild_quadratic_f2()
    rep = ramification_report(E)
    assert (rep.e, rep.f, rep.delta, rep.sigma, rep.separable) == (2, 1, 2, 1, True)
    assert rep.w == 2  # Artin-Schreier pair


def test_ramification_report_inseparable():
    E = E_insep_quadratic_f2()
    rep = ramification_report(E)
    assert rep.separable is False
    assert rep.d is None and rep.delta is None and rep.sigma is None
    assert rep.w == 1  # the double root counts once


def test_roots_in_extension_spec_examples():
    E = E_x2_minus_T_f3()
    roots = roots_in_extension(poly(F3, "2*T", "0", "1"), E)
    assert len(roots) == 2
    # x^2 - T has no root in F_3((T)) itself: e=1 trivial extension
    triv = build_extension(poly(F3, "2*T^3 + 1", "1"))
    assert (triv.e, triv.f_res) == (1, 1)
    assert roots_in_extension(poly(F3, "2*T", "0", "1"), triv) == []


def test_roots_wild_pair_distinct():
    E = E_wild_quadratic_f2()
    roots = roots_in_extension(poly(F2, "T", "T", "1"), E)
    assert len(roots) == 2
    d = roots[0] - roots[1]
    assert d.valuation() is not None  # genuinely distinct


def test_is_isomorphic_basic():
    E1 = E_x2_minus_T_f3()
    E2 = build_extension(poly(F3, "2*T", "0", "1"))
    assert is_isomorphic(E1, E2)
    # non-square unit twist: x^2 - uT with u = -1 = 2 (2 is not a square mod 3)
    E3 = build_extension(poly(F3, "T", "0", "1"))  # x^2 + T = x^2 - 2T
    assert not is_isomorphic(E1, E3)
    E4 = E_unram_quadratic_f2()
    E5 = E_wild_quadratic_f2()
    assert not is_isomorphic(E4, E5)  # (e, f) mismatch


def test_isomorphic_same_field_different_eisenstein():
    # x^2 - T and x^2 - T(1+T)^2-ish: same field since (1+T) is a square * unit
    # use x^2 - T*u^2 with u = 1 + T: T*u^2 = T + 2T^2 + T^3
    E1 = E_x2_minus_T_f3()
    E2 = build_extension(poly(F3, "2*T + T^2 + 2*T^3", "0", "1"))
    assert is_isomorphic(E1, E2)


def test_base_field_model_roundtrip():
    E = E_wild_quadratic_f2()
    model = as_base_field(E)
    pi = E.pi()
    for elem in [pi, pi * pi, E.one() + pi, pi.inv(), E.from_base(F2.T(3))]:
        s = model.to_series(elem)
        back = model.from_series(s)
        assert back.same_value(elem, pi_prec=min(20, s.prec or 20))
    # ring homomorphism on a pair
    a, b = pi + E.one(), pi * pi + pi
    sa, sb = model.to_series(a), model.to_series(b)
    assert model.to_series(a * b).same_value(sa * sb, prec=16)


def test_pth_root():
    E = E_insep_quadratic_f2()  # pi^2 = T
    pi = E.pi()
    r = pth_root_elem(E.from_base(F2.T()), E)
    assert r is not None and r.same_value(pi)
    assert pth_root_elem(pi, E) is None  # pi has no square root in E


def test_primitive_element_quartic():
    E = build_extension(poly(F2, "T^2", "0", "T", "0", "1"))
    prim = primitive_element(E)
    mp = minimal_polynomial(prim)
    assert mp.degree() == 4


def test_w_divides_n_and_tame_count():
    # tame totally ramified degree 2, q=3: w = gcd(2, 3-1) = 2
    rep = ramification_report(E_x2_minus_T_f3())
    assert rep.w == 2
    # tame totally ramified degree 3, q=2: w = gcd(3, 1) = 1
    E = build_extension(poly(F2, "T", "0", "0", "1"))
    rep3 = ramification_report(E)
    assert rep3.w == 1 and rep3.sigma == 0
