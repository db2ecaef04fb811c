import pytest

from locfield import FqT, parse_series
from locfield.extfield import build_extension, multiplication_matrix_base
from locfield.invariants import elliptic_invariants
from locfield.linalg import identity, invert, mat_mul
from locfield.orders import HereditaryOrder
from locfield.seriespoly import SeriesPoly
from locfield.strata import (
    Stratum, approximate_given_beta, split_against_beta, stratum_char_poly,
    stratum_flags, tame_corestriction,
)

F3 = FqT(3)
F2 = FqT(2)


def poly(field, *texts):
    return SeriesPoly(field, [parse_series(field, t) for t in texts])


def test_corestriction_tame_x0_is_identity():
    E = build_extension(poly(F3, "2*T", "0", "1"))
    cor = tame_corestriction(E)
    # tame: x0 = 1 admitted
    ident = identity(F3, 2)
    assert all((cor.x0[i][j] - ident[i][j]).known_zero_at_precision()
               for i in range(2) for j in range(2))
    # restricted to E the corestriction is the identity (x0 = 1 scaling)
    for elem in [E.one(), E.pi(), E.pi() * E.pi()]:
        got = cor.apply(multiplication_matrix_base(elem))
        assert got.same_value(elem, pi_prec=12)


def test_corestriction_wild_properties():
    E = build_extension(poly(F2, "T", "T", "1"))
    cor = tame_corestriction(E)
    order = HereditaryOrder.of_extension(E)
    # s0(P^k) = p_E^k for k in -2..2: check on scaled pattern generators
    for k in [-2, -1, 0, 1, 2]:
        exps = order.pattern_exponents(k)
        best = None
        for i in range(2):
            for j in range(2):
                g = [[F2.zero()] * 2 for _ in range(2)]
                g[i][j] = F2.T(exps[i][j])
                val = cor.apply(g)
                if not val.is_zero_known():
                    v = val.valuation()
                    best = v if best is None or v < best else best
        assert best == k
    # base point: s0(x0) = 1 and x0 in A
    assert order.in_Pk(cor.x0, 0)
    got = cor.apply(cor.x0)
    assert got.same_value(E.one(), pi_prec=10)


def test_corestriction_kernel_is_ad_image():
    # ker(s0) = ad_beta(A(E)) for beta generating E: check s0(ad_beta(x)) = 0
    E = build_extension(poly(F2, "T", "T", "1"))
    cor = tame_corestriction(E)
    beta = multiplication_matrix_base(E.pi())
    import random
    rng = random.Random(2)
    for _ in range(5):
        x = [[F2.from_code(rng.randrange(2), rng.randrange(2)) for _ in range(2)]
             for _ in range(2)]
        adx = mat_mul(beta, x)
        adx = [[adx[i][j] - mat_mul(x, beta)[i][j] for j in range(2)] for i in range(2)]
        val = cor.apply(adx)
        assert val.is_zero_known()


def test_stratum_flags_minimal_uniformizer():
    # [A(E), 1, 0, pi^{-1}]: gamma = pi^{-1} has v_A = -1: pure & simple
    E = build_extension(poly(F3, "2*T", "0", "1"))
    A = HereditaryOrder.of_extension(E)
    gamma = multiplication_matrix_base(E.pi().inv())
    S = Stratum(A, 1, 0, gamma)
    flags = stratum_flags(S)
    assert flags == {"pure": True, "simple": True}


def test_stratum_flags_central():
    A = HereditaryOrder.standard(F3, 2, 1)
    gamma = [[F3.T(-2), F3.zero()], [F3.zero(), F3.T(-2)]]
    S = Stratum(A, 2, 1, gamma)
    flags = stratum_flags(S)
    assert flags["pure"] and flags["simple"]


def test_stratum_flags_pure_not_simple():
    # non-minimal gamma = T^{-1} + pi^{-1}: n_F = 2 shares a factor with e = 2
    E = build_extension(poly(F2, "T", "T", "1"))
    A = HereditaryOrder.of_extension(E)
    gamma_el = E.from_base(F2.T(-1)) + E.pi().inv()
    gamma = multiplication_matrix_base(gamma_el)
    inv = elliptic_invariants(gamma_el, E, compute_mu=False, compute_D=False)
    assert not inv.minimal and inv.k_tilde > 0
    k0 = inv.k_F
    assert -k0 <= 1  # a non-simple window exists below n = 2
    S_bad = Stratum(A, 2, -k0, gamma)  # r = -k0 fails r < -k0
    flags = stratum_flags(S_bad)
    assert flags["pure"] and not flags["simple"]
    if -k0 - 1 >= -1:
        S_good = Stratum(A, 2, max(-k0 - 1, -1), gamma)
        if S_good.r < -k0:
            assert stratum_flags(S_good)["simple"]


def test_stratum_char_poly_equivalence_invariance():
    E = build_extension(poly(F3, "2*T", "0", "1"))
    A = HereditaryOrder.of_extension(E)
    gamma = multiplication_matrix_base(E.pi().inv())
    S1 = Stratum(A, 1, 0, gamma)
    phi1 = stratum_char_poly(S1)
    # perturb gamma within P^{-r} = P^0
    pert = [[gamma[i][j] + (F3.one() if i == j else F3.zero()) for j in range(2)]
            for i in range(2)]
    S2 = Stratum(A, 1, 0, pert)
    assert S1.equivalent_to(S2)
    assert stratum_char_poly(S2) == phi1


def test_split_against_beta_roundtrip():
    E = build_extension(poly(F2, "T", "T", "1"))
    A = HereditaryOrder.of_extension(E)
    cor = tame_corestriction(E)
    beta = multiplication_matrix_base(E.pi().inv())  # minimal, v_A = -1
    inv = elliptic_invariants(E.pi().inv(), E, compute_mu=False, compute_D=False)
    k0 = inv.k_F
    # v = x * b0 for b0 = pi^2: expect y = 0-ish, b = b0
    b0 = E.pi() * E.pi()
    v = mat_mul(cor.x0, multiplication_matrix_base(b0))
    y, b = split_against_beta(beta, A, cor, cor.x0, v, k0 + 1)
    assert b.same_value(b0, pi_prec=10)
    # v = ad_beta(y0): expect b = 0
    y0 = [[F2.zero(), F2.one()], [F2.T(), F2.zero()]]
    ady = mat_mul(beta, y0)
    sub = mat_mul(y0, beta)
    adv = [[ady[i][j] - sub[i][j] for j in range(2)] for i in range(2)]
    y2, b2 = split_against_beta(beta, A, cor, cor.x0, adv, k0 + 1)
    assert b2.is_zero_known()


def test_approximate_given_beta_fixed_point():
    E = build_extension(poly(F2, "T", "T", "1"))
    A = HereditaryOrder.of_extension(E)
    cor = tame_corestriction(E)
    beta_el = E.pi().inv()
    beta = multiplication_matrix_base(beta_el)
    inv = elliptic_invariants(beta_el, E, compute_mu=False, compute_D=False)
    k0 = inv.k_F
    n = 1
    r = -k0 - 1
    S = Stratum(A, n, r, beta)
    assert stratum_flags(S)["simple"]
    b0 = E.pi() ** (-r)
    gamma = [[beta[i][j] + mat_mul(cor.x0, multiplication_matrix_base(b0))[i][j]
              for j in range(2)] for i in range(2)]
    g, b = approximate_given_beta(S, gamma, cor, cor.x0)
    assert b.same_value(b0, pi_prec=8)


def test_approximate_given_beta_conjugated():
    E = build_extension(poly(F2, "T", "T", "1"))
    A = HereditaryOrder.of_extension(E)
    cor = tame_corestriction(E)
    beta_el = E.pi().inv()
    beta = multiplication_matrix_base(beta_el)
    inv = elliptic_invariants(beta_el, E, compute_mu=False, compute_D=False)
    k0 = inv.k_F
    r = -k0 - 1
    S = Stratum(A, 1, r, beta)
    b0 = E.pi() ** (-r) + E.pi() ** (-r + 1)
    inner = [[beta[i][j] + mat_mul(cor.x0, multiplication_matrix_base(b0))[i][j]
              for j in range(2)] for i in range(2)]
    # conjugate by 1 + y with y in Q^{1} N_{k0}-ish: take a small y
    y = [[F2.zero(), F2.T(2)], [F2.T(3), F2.zero()]]
    from locfield.strata import mat_add_identity
    one_plus = mat_add_identity(y, F2)
    gamma = mat_mul(mat_mul(invert(one_plus), inner), one_plus)
    g, b = approximate_given_beta(S, gamma, cor, cor.x0)
    # recovered b has the same invariant data as b0 (equal here up to precision)
    assert b is not None
