import pytest
from hypothesis import given, settings, strategies as st

from locfield import FqT, Inseparable, parse_series
from locfield.factor import factor_local, krasner_radius, poly_zero_mod
from locfield.seriespoly import SeriesPoly

F3 = FqT(3)
F2 = FqT(2)
F4 = FqT(2, 2)


def poly(field, *texts):
    return SeriesPoly(field, [parse_series(field, t) for t in texts])


def remultiply(field, factors):
    acc = SeriesPoly(field, [field.one()])
    for g, m in factors:
        for _ in range(m):
            acc = acc * g
    return acc


def test_x2_minus_T_irreducible_f3():
    f = poly(F3, "2*T", "0", "1")
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][1] == 1
    assert fac[0][0].same_value(f)


def test_split_linear_pair():
    # (x - 1)(x - T) = x^2 - (1+T) x + T
    f = poly(F3, "T", "2 + 2*T", "1")
    fac = factor_local(f)
    assert sorted(m for _, m in fac) == [1, 1]
    assert poly_zero_mod(remultiply(F3, fac) - f, 20)
    roots = sorted(str(g.coeffs[0].codes) for g, _ in fac)
    degs = [g.degree() for g, _ in fac]
    assert degs == [1, 1]


def test_x2_minus_T_char2_inseparable_irreducible():
    f = poly(F2, "T", "0", "1")  # x^2 - T = x^2 + T
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][1] == 1 and fac[0][0].degree() == 2
    # inseparable: zero derivative
    assert fac[0][0].derivative().is_zero()


def test_eisenstein_quadratic_wild():
    f = poly(F2, "T", "T", "1")  # x^2 + Tx + T
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][0].degree() == 2


def test_unramified_quadratic():
    # x^2 + x + 1 over F_2: residue irreducible
    f = poly(F2, "1", "1", "1")
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][0].degree() == 2


def test_repeated_inseparable_square():
    # (x^2 - T)^2 = x^4 + T^2 over F_2
    f = poly(F2, "T^2", "0", "0", "0", "1")
    fac = factor_local(f)
    assert len(fac) == 1
    g, m = fac[0]
    assert m == 2 and g.degree() == 2
    assert g.same_value(poly(F2, "T", "0", "1"))


def test_two_close_inseparable_quadratics():
    # (x^2 - T)(x^2 - T - T^2) over F_2: same residual data, depth-2 split
    f = poly(F2, "T", "0", "1") * poly(F2, "T + T^2", "0", "1")
    fac = factor_local(f)
    assert sorted(g.degree() for g, _ in fac) == [2, 2]
    assert all(m == 1 for _, m in fac)
    assert poly_zero_mod(remultiply(F2, fac) - f, 20)


def test_close_ramified_quadratics_f3():
    # (x^2 - T)(x^2 - T - T^2) over F_3: residual (y-1)^2, needs refinement
    f = poly(F3, "2*T", "0", "1") * poly(F3, "2*T + 2*T^2", "0", "1")
    fac = factor_local(f)
    assert sorted(g.degree() for g, _ in fac) == [2, 2]
    assert poly_zero_mod(remultiply(F3, fac) - f, 20)


def test_mixed_slopes_cubic():
    # x^3 + Tx + T over F_2: polygon slope -1/3 single segment, length 3
    f = poly(F2, "T", "T", "0", "1")
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][0].degree() == 3


def test_slope_split():
    # (x - T)(x^2 - T): slopes -1 and -1/2
    f = poly(F3, "2*T", "0", "1") * poly(F3, "2*T", "1")
    fac = factor_local(f)
    assert sorted(g.degree() for g, _ in fac) == [1, 2]


def test_quartic_e2_f2():
    # x^4 + Tx^2 + T^2 over F_2: e = 2, f = 2 (irreducible residual of degree 2)
    f = poly(F2, "T^2", "0", "T", "0", "1")
    fac = factor_local(f)
    assert len(fac) == 1 and fac[0][0].degree() == 4


def test_unramified_quartic_residue_square():
    # (x^2 + x + 1)^2 + T-ish: f = (x^2+x+1)^2 + T x: residue (x^2+x+1)^2
    base = poly(F2, "1", "1", "1")
    f = base * base + poly(F2, "0", "T")
    fac = factor_local(f)
    assert poly_zero_mod(remultiply(F2, fac) - f, 20)
    assert sum(g.degree() * m for g, m in fac) == 4


def test_krasner_radius_examples():
    assert krasner_radius(poly(F3, "2*T", "0", "1")) == 2       # x^2 - T, q=3
    assert krasner_radius(poly(F3, "2", "1")) == 1              # linear
    assert krasner_radius(poly(F2, "T", "T", "1")) == 3         # x^2+Tx+T, q=2
    with pytest.raises(Inseparable):
        krasner_radius(poly(F2, "T", "0", "1"))


def test_krasner_radius_perturbation_oracle():
    # brute force: all g = f mod p^2 at precision 5 stay irreducible (q=3, x^2-T)
    f = poly(F3, "2*T", "0", "1")
    k = krasner_radius(f)
    assert k == 2
    M = 5
    codes = range(3)
    from itertools import product
    for d1 in product(codes, repeat=M - k):
        for d0 in product(codes, repeat=M - k):
            pert1 = sum((F3.from_code(c, k + i) for i, c in enumerate(d1)), F3.zero())
            pert0 = sum((F3.from_code(c, k + i) for i, c in enumerate(d0)), F3.zero())
            g = SeriesPoly(F3, [f.coeffs[0] + pert0, pert1, F3.one()])
            fac = factor_local(g)
            assert len(fac) == 1 and fac[0][0].degree() == 2, repr(g)


@st.composite
def random_quartic(draw):
    coeffs = []
    for _ in range(4):
        v = draw(st.integers(min_value=0, max_value=2))
        c = draw(st.integers(min_value=0, max_value=2))
        coeffs.append(F3.from_code(c, v) if c else F3.zero())
    coeffs.append(F3.one())
    return SeriesPoly(F3, coeffs)


@settings(max_examples=40, deadline=None)
@given(random_quartic())
def test_factor_remultiplies(f):
    fac = factor_local(f)
    assert poly_zero_mod(remultiply(F3, fac) - f, 16)
    assert sum(g.degree() * m for g, m in fac) == 4
