import random

import pytest

from locfield import FqT, parse_series
from locfield.linalg import identity, invert, mat_mul
from locfield.matrices import (
    are_conjugate, char_min_invariant, charpoly_matrix, classify,
    coefficient_map, filtration_member,
)
from locfield.seriespoly import SeriesPoly

F3 = FqT(3)
F2 = FqT(2)


def mat(field, rows):
    return [[parse_series(field, t) for t in row] for row in rows]


def companion(field, coeffs_texts):
    """Companion matrix of monic x^n + a_{n-1} x^{n-1} + ... + a_0."""
    coeffs = [parse_series(field, t) for t in coeffs_texts]
    n = len(coeffs)
    out = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n):
        out[i][i - 1] = field.one()
    for i in range(n):
        out[i][n - 1] = -coeffs[i]
    return out


def random_unimodular(field, n, rng):
    """Exact element of GL(n, o): unit diagonal + strictly triangular parts."""
    q = field.kappa.q
    upper = identity(field, n)
    lower = identity(field, n)
    for i in range(n):
        for j in range(n):
            if i < j:
                upper[i][j] = field.from_code(rng.randrange(q), rng.randrange(0, 2))
            elif i > j:
                lower[i][j] = field.from_code(rng.randrange(q), rng.randrange(0, 3))
    perm = list(range(n))
    rng.shuffle(perm)
    pmat = [[field.one() if perm[i] == j else field.zero() for j in range(n)]
            for i in range(n)]
    return mat_mul(mat_mul(upper, lower), pmat)


def test_companion_single_invariant_factor():
    g = companion(F3, ["2*T", "0"])  # x^2 - T
    char, key = char_min_invariant(g)
    assert len(key.factors) == 1
    assert key.minimal().same_value(SeriesPoly(F3, [parse_series(F3, "2*T"),
                                                    F3.zero(), F3.one()]))


def test_scalar_matrix_two_factors():
    g = mat(F3, [["T", "0"], ["0", "T"]])
    _, key = char_min_invariant(g)
    assert len(key.factors) == 2
    assert all(f.degree() == 1 for f in key.factors)


def test_diag_distinct_single_factor():
    g = mat(F3, [["1", "0"], ["0", "T"]])
    _, key = char_min_invariant(g)
    assert len(key.factors) == 1 and key.minimal().degree() == 2


def test_are_conjugate_under_random_g():
    rng = random.Random(3)
    gamma = companion(F3, ["2*T", "1"])
    for _ in range(5):
        g = random_unimodular(F3, 2, rng)
        conj = mat_mul(mat_mul(invert(g), gamma), g)
        assert are_conjugate(gamma, conj)


def test_not_conjugate_scalar_vs_companion():
    a = mat(F3, [["T", "0"], ["0", "T"]])
    b = companion(F3, ["T^2", "T"])  # (x-T)^2 = x^2 - 2Tx + T^2: a_0=T^2, a_1=-2T
    b = companion(F3, ["T^2", "T"])
    assert not are_conjugate(a, b)


def test_companion_transpose_conjugate():
    gamma = companion(F3, ["2*T", "0"])
    tr = [[gamma[j][i] for j in range(2)] for i in range(2)]
    assert are_conjugate(gamma, tr)


def test_classify_inseparable_elliptic():
    g = companion(F2, ["T", "0"])  # x^2 - T over F_2
    c = classify(g)
    assert c.quasi_regular_elliptic and not c.separable
    assert c.factors[0][2] == 2 and c.factors[0][3] == 1  # e=2, f=1


def test_classify_split_regular():
    g = mat(F3, [["1", "0"], ["0", "T"]])
    c = classify(g)
    assert c.quasi_regular and not c.quasi_regular_elliptic
    assert c.separable and c.regular and c.closed


def test_classify_nilpotent_not_closed():
    g = mat(F3, [["0", "1"], ["0", "0"]])
    c = classify(g)
    assert not c.closed and not c.quasi_regular


def test_filtration_member_examples():
    g = companion(F3, ["T", "0"])  # x^2 + T: a_0 = T, a_1 = 0
    assert filtration_member(g, 0)
    ident = identity(F3, 2)
    assert not filtration_member(ident, 0)
    tid = mat(F3, [["T", "0"], ["0", "T"]])
    assert filtration_member(tid, 0)
    assert not filtration_member(tid, 1)


def test_filtration_homogeneity():
    # member(gamma, k) <=> member(T^-k gamma, 0)
    rng = random.Random(5)
    for _ in range(10):
        g = companion(F3, [f"{rng.randrange(3)}*T^{rng.randrange(1, 4)}" if rng.randrange(2)
                           else "T", f"{rng.randrange(3)}*T" if rng.randrange(2) else "0"])
        for k in (-1, 0, 1):
            scaled = [[c.shift(-k) for c in row] for row in g]
            assert filtration_member(g, k) == filtration_member(scaled, 0)


def test_coefficient_map_examples():
    g = companion(F3, ["2*T", "0"])  # x^2 - T
    coeffs, bound = coefficient_map(g)
    assert coeffs[0].known_zero_at_precision()      # a_1 = 0
    assert coeffs[1].same_value(parse_series(F3, "2*T"))
    assert bound == 0
    ident = identity(F3, 2)
    _, b_id = coefficient_map(ident)
    assert b_id == 0
    t2 = mat(F3, [["T^2", "0"], ["0", "T^2"]])
    _, b2 = coefficient_map(t2)
    assert b2 == 2


def test_filtration_vs_det_valuation_lemma():
    # for qre gamma: nu_F(gamma) >= k + 1/N <=> filtration_member(gamma, k)
    from locfield.linalg import det_berkowitz
    from fractions import Fraction
    rng = random.Random(11)
    checked = 0
    while checked < 25:
        a0 = f"{1 + rng.randrange(2)}*T^{rng.randrange(1, 5)}"
        a1c = rng.randrange(3)
        a1 = f"{a1c}*T^{rng.randrange(1, 3)}" if a1c else "0"
        g = companion(F3, [a0, a1])
        c = classify(g)
        if not c.quasi_regular_elliptic:
            continue
        checked += 1
        det = det_berkowitz(g)
        nu_F = Fraction(det.valuation(), 2)
        for k in (-1, 0, 1):
            assert filtration_member(g, k) == (nu_F >= k + Fraction(1, 2))
