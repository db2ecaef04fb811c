import pytest

from locfield import FqT, parse_series
from locfield.extfield import build_extension, multiplication_matrix_base
from locfield.lattices import OLattice, index_exponent
from locfield.orders import HereditaryOrder, flatten_matrix
from locfield.seriespoly import SeriesPoly

F3 = FqT(3)
F2 = FqT(2)


def poly(field, *texts):
    return SeriesPoly(field, [parse_series(field, t) for t in texts])


def test_standard_order_e1_is_full_matrix_ring():
    A = HereditaryOrder.standard(F3, 2, 1)
    exps = A.pattern_exponents(0)
    assert exps == [[0, 0], [0, 0]]
    # P_max = T * A
    assert A.pattern_exponents(1) == [[1, 1], [1, 1]]


def test_standard_order_iwahori_patterns():
    A = HereditaryOrder.standard(F3, 2, 2)
    # A = [[o, o], [p, o]]
    assert A.pattern_exponents(0) == [[0, 0], [1, 0]]
    # P_min = [[p, o], [p, p]]
    assert A.pattern_exponents(1) == [[1, 0], [1, 1]]
    # p^k A = P^{2k}
    assert A.pattern_exponents(2) == [[1, 1], [2, 1]]


def test_det_image_of_Pk():
    # {det g : g in P_e^k} = p^{kN/e}: check the minimal det valuation
    # over the generators of P^k for (N, e, k) combinations
    from locfield.linalg import det_berkowitz
    for (N, e, k) in [(2, 2, 1), (2, 1, 1), (2, 2, 2), (3, 3, 1)]:
        if N % e:
            continue
        A = HereditaryOrder.standard(F3, N, e)
        exps = A.pattern_exponents(k)
        # element with entries T^exps (all ones pattern scaled) has det of
        # valuation k*N/e when chosen as the "permutation-like" optimum;
        # check the bound via a sampled family
        best = None
        import itertools
        for perm in itertools.permutations(range(N)):
            v = sum(exps[i][perm[i]] for i in range(N))
            best = v if best is None or v < best else best
        assert best == k * N // e


def test_chain_inclusions_spec():
    # P_e^{ak} <= P_{e'}^k <= P_e^{a(k-1)+1} for e' | e, a = e/e'
    N = 4
    for (e, ep) in [(4, 2), (4, 1), (2, 1)]:
        a = e // ep
        Ae = HereditaryOrder.standard(F3, N, e)
        Aep = HereditaryOrder.standard(F3, N, ep)
        for k in [0, 1, 2]:
            big = Aep.pattern_exponents(k)
            low = Ae.pattern_exponents(a * k)
            hi = Ae.pattern_exponents(a * (k - 1) + 1)
            for i in range(N):
                for j in range(N):
                    assert low[i][j] >= big[i][j] >= hi[i][j]


def test_order_of_extension_ramified_quadratic():
    E = build_extension(poly(F3, "2*T", "0", "1"))
    A = HereditaryOrder.of_extension(E)
    assert A.period == 2
    pi_mat = multiplication_matrix_base(E.pi())
    assert A.nu(pi_mat) == 1
    t_mat = multiplication_matrix_base(E.from_base(F3.T()))
    assert A.nu(t_mat) == 2
    # pi normalizes A: pi A pi^{-1} = A: check pattern stability on generators
    from locfield.linalg import mat_mul, invert
    pi_inv = invert(pi_mat)
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        gen = [[F3.zero()] * 2 for _ in range(2)]
        gen[i][j] = F3.T(A.pattern_exponents(0)[i][j])
        conj = mat_mul(mat_mul(pi_mat, gen), pi_inv)
        assert A.in_Pk(conj, 0)


def test_lattice_index_examples():
    L1 = OLattice.standard(F3, 2)
    assert index_exponent(L1, L1) == 0
    L2 = OLattice.standard(F3, 2, [1, 0])  # p + o
    assert index_exponent(L1, L2) == 1
    # [A_max : P_max] in M_2: 4-dim matrix space, index q^4
    A = HereditaryOrder.standard(F3, 2, 1)
    assert index_exponent(A.Pk_lattice(0), A.Pk_lattice(1)) == 4


def test_N_k_for_central_element_is_A():
    A = HereditaryOrder.standard(F3, 2, 2)
    beta = [[F3.T(), F3.zero()], [F3.zero(), F3.T()]]
    nk = A.N_k_lattice(A.to_frame(beta), 5)
    a0 = A.Pk_lattice(0)
    assert a0.contains_lattice(nk) and nk.contains_lattice(a0)
    assert A.k0(beta) is None  # central: -infinity


def test_k0_of_uniformizer_is_minimal():
    # beta = pi in A(E), E = F_3((T))[x]/(x^2 - T): minimal, k_0 = v_A(beta) = 1
    E = build_extension(poly(F3, "2*T", "0", "1"))
    A = HereditaryOrder.of_extension(E)
    pi_mat = multiplication_matrix_base(E.pi())
    assert A.k0(pi_mat, centralizer_dim=2) == 1


def test_k0_wild_quadratic_uniformizer():
    E = build_extension(poly(F2, "T", "T", "1"))
    A = HereditaryOrder.of_extension(E)
    pi_mat = multiplication_matrix_base(E.pi())
    assert A.k0(pi_mat, centralizer_dim=2) == 1  # uniformizers are minimal


def test_k0_nonminimal_element():
    # gamma = pi + pi^3 (wild quadratic, q=2): k_tilde = k_F + n_F > 0
    E = build_extension(poly(F2, "T", "T", "1"))
    pi = E.pi()
    gamma = pi + pi * pi * pi
    A = HereditaryOrder.of_extension(E)
    g_mat = multiplication_matrix_base(gamma)
    k0 = A.k0(g_mat, centralizer_dim=2)
    n_F = -gamma.valuation()
    assert gamma.valuation() == 1
    # non-minimality shows as k0 + n_F > 0... here gamma = pi(1 + pi^2):
    # 1 + pi^2 = unit; in fact gamma is minimal iff k0 == v_A = 1
    assert k0 is not None and k0 >= 1


def test_intersection_of_N_k_is_B():
    # deep k: N_k lattice approx B + (deep P-part): check N_k subset B + P^1
    E = build_extension(poly(F3, "2*T", "0", "1"))
    A = HereditaryOrder.of_extension(E)
    pi_mat = A.to_frame(multiplication_matrix_base(E.pi()))
    deep = A.N_k_lattice(pi_mat, 9)
    bgens = A.centralizer_cap_order(pi_mat, centralizer_dim=2)
    from locfield.lattices import hermite_column_basis
    p8 = A.Pk_lattice(8)
    cols = [list(c) for c in bgens] + [list(c) for c in p8.basis]
    bp = OLattice(F3, hermite_column_basis(F3, cols, 4))
    assert bp.contains_lattice(deep)


def test_from_chain_roundtrip_standard():
    # rebuild the Iwahori order from its chain and compare patterns
    A = HereditaryOrder.standard(F3, 2, 2)
    chain = [A.chain_lattice(0), A.chain_lattice(1)]
    B = HereditaryOrder.from_chain(F3, chain)
    for k in [0, 1, 2, 3]:
        ea = A.pattern_exponents(k)
        eb = B.pattern_exponents(k)
        # patterns agree up to basis permutation; compare lattices directly
        la, lb = A.Pk_lattice(k), B.Pk_lattice(k)
        # compare in ambient coordinates: frame is identity for A; for B use
        # membership of generators
        ga = [A.from_frame([[la.basis[t][i * 2 + j] for j in range(2)] for i in range(2)])
              for t in range(4)]
        for gmat in ga:
            assert B.in_Pk(gmat, k)
