from fractions import Fraction

import pytest

from locfield import BudgetExceeded, FqT
from locfield.mass import (
    cluster_classes, eisenstein_count, enumerate_eisenstein, mass_sums,
)

F3 = FqT(3)
F2 = FqT(2)


def test_enumerate_counts():
    cat = enumerate_eisenstein(F2, 2, 4)
    assert len(cat.entries) == 32 == eisenstein_count(2, 2, 4)
    # the spec example text says 18 for (q=3, n=2, M=3); the stated counting
    # rule (q^{M-1})^{n-1} (q-1) q^{M-2} gives 54, which enumeration confirms
    cat3 = enumerate_eisenstein(F3, 2, 3)
    assert len(cat3.entries) == 54 == eisenstein_count(3, 2, 3)


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_eisenstein(F3, 4, 8, budget=1000)


def test_cluster_tame_quadratics_q3():
    cat = enumerate_eisenstein(F3, 2, 3)
    classes = cluster_classes(cat)
    sep = [c for c in classes if c.separable]
    assert len(sep) == 2
    assert all(c.w == 2 and c.sigma == 0 for c in sep)
    assert sum(c.member_count for c in classes) == len(cat.entries)
    assert all(c.mass_term == Fraction(1, 2) for c in sep)


def test_cluster_wild_quadratics_q2_small():
    cat = enumerate_eisenstein(F2, 2, 5)
    classes = cluster_classes(cat)
    insep = [c for c in classes if not c.separable]
    sep = [c for c in classes if c.separable]
    assert insep and all(c.mass_term == 0 for c in insep)
    deltas = sorted(set(c.delta for c in sep))
    assert deltas[0] == 2
    # delta = 2: two classes (the Artin-Schreier pole plus the unit twist)
    assert sum(1 for c in sep if c.delta == 2) == 2
    assert all(c.w == 2 for c in sep if c.delta == 2)
    assert sum(c.member_count for c in classes) == len(cat.entries)


def test_mass_tame_exact_q3_n2():
    rep = mass_sums(F3, 2, 6)
    assert rep.sum_totally_ramified == 2
    assert rep.weighted_sum == 1
    assert rep.grand_sum == Fraction(1, 2) + Fraction(2, 2)


def test_mass_tame_exact_q2_n3():
    rep = mass_sums(F2, 3, 6)
    assert rep.sum_totally_ramified == 3
    assert rep.weighted_sum == 1
    # sum over e | 3 of e/3 = 1/3 + 1 = 4/3
    assert rep.grand_sum == Fraction(4, 3)


def test_mass_wild_partial_sums_q2_n2():
    rep = mass_sums(F2, 2, 8, D_max=6)
    # classes at delta = 2m: 2^m of them, each w = 2: S(D) = 2 - 2^{1-D/2}
    expect = {2: Fraction(1), 4: Fraction(3, 2), 6: Fraction(7, 4)}
    got = dict(rep.partial_sums)
    for d, s in expect.items():
        assert got[d] == s
    assert rep.sum_totally_ramified < 2
