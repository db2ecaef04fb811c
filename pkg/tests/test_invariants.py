import pytest

from locfield import FqT, parse_series
from locfield.extfield import build_extension
from locfield.invariants import (
    conductor_c, descent_lambda, elliptic_invariants, eta_exponents_of_matrix,
    invariants_of_matrix, mu_exponents,
)
from locfield.matrices import classify
from locfield.seriespoly import SeriesPoly

F3 = FqT(3)
F2 = FqT(2)


def poly(field, *texts):
    return SeriesPoly(field, [parse_series(field, t) for t in texts])


def companion(field, coeffs_texts):
    coeffs = [parse_series(field, t) for t in coeffs_texts]
    n = len(coeffs)
    out = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(1, n):
        out[i][i - 1] = field.one()
    for i in range(n):
        out[i][n - 1] = -coeffs[i]
    return out


def test_uniformizer_tame_quadratic():
    # gamma = pi in E = F_3((T))[x]/(x^2-T): c=0, c_tilde=1-n=-1, eta_G=1, mu=1
    E = build_extension(poly(F3, "2*T", "0", "1"))
    inv = elliptic_invariants(E.pi(), E)
    assert inv.c_F == 0 and inv.c_tilde == -1
    assert inv.minimal
    assert inv.eta_G_exp == 0          # eta_G = q^0 = 1
    assert inv.mu_exp == 0             # mu_F = 1
    assert inv.eta_G_exp == inv.mu_exp  # eta*mu = 1
    assert inv.nu_D == inv.delta + 1 - inv.n  # paper remark: tame uniformizer


def test_uniformizer_wild_quadratic():
    E = build_extension(poly(F2, "T", "T", "1"))
    inv = elliptic_invariants(E.pi(), E)
    assert inv.minimal and inv.c_F == 0 and inv.c_tilde == -1
    assert inv.delta == 2 and inv.sigma == 1
    assert inv.nu_D == inv.delta + 1 - 2
    # separable consistency: c_tilde = (nu_D - delta)/f
    assert inv.c_tilde == (inv.nu_D - inv.delta) // inv.f
    assert inv.eta_G_exp == inv.mu_exp
    assert inv.eta_g_exp == inv.mu_plus_exp


def test_inseparable_uniformizer():
    E = build_extension(poly(F2, "T", "0", "1"))
    inv = elliptic_invariants(E.pi(), E)
    assert inv.separable is False
    assert inv.nu_D is None and inv.delta is None and inv.sigma is None
    assert inv.minimal
    # eta_G = q^{-f(c_tilde + e - 1)} = q^0 and mu agrees even inseparably
    assert inv.eta_G_exp == 0 == inv.mu_exp


def test_scaling_covariance_of_conductor():
    # c_F(z gamma) - c_F(gamma) = e(n-1) v(z)
    E = build_extension(poly(F3, "2*T", "0", "1"))
    gamma = E.pi() + E.from_base(F3.T(2))
    c_plain = conductor_c(gamma, E)
    z = F3.T(3)
    c_scaled = conductor_c(gamma * E.from_base(z), E)
    assert c_scaled - c_plain == E.e * (E.n - 1) * 3


def test_non_minimal_wild_element():
    # gamma = pi + pi^3 * u in wild quadratic: k_tilde > 0 expected? compute
    E = build_extension(poly(F2, "T", "T", "1"))
    pi = E.pi()
    gamma = pi + pi ** 3
    inv = elliptic_invariants(gamma, E)
    assert inv.eta_G_exp == inv.mu_exp
    assert inv.eta_g_exp == inv.mu_plus_exp
    assert inv.minimal == (inv.k_tilde == 0)


def test_eta_mu_identity_on_matrix_pipeline():
    g = companion(F2, ["T", "T"])  # x^2 + Tx + T
    inv = invariants_of_matrix(g)
    assert inv.eta_G_exp == inv.mu_exp
    assert inv.eta_g_exp == inv.mu_plus_exp


def test_eta_nonelliptic_diag_example():
    # diag(1, T): eta_G = |D_{M\G}| * 1 * 1 with v(D_{M\G}) = -1
    g = [[F3.one(), F3.zero()], [F3.zero(), F3.T()]]
    out = eta_exponents_of_matrix(g)
    assert out.dMG_val == -1
    assert out.eta_G_exp == -1
    # eta_g = |det|^{N-1} eta_G: v(det) = 1: exponent -1 + 1 = 0
    assert out.eta_g_exp == 0


def test_eta_scaling_homogeneity():
    # eta_g(z gamma) = |z|^{N(N-1)} eta_g(gamma); eta_G invariant
    g = companion(F3, ["2*T", "1"])
    cls = classify(g)
    if not cls.quasi_regular:
        pytest.skip("companion not qr (unexpected)")
    base = eta_exponents_of_matrix(g)
    z_val = 2
    scaled = [[c.shift(z_val) for c in row] for row in g]
    out = eta_exponents_of_matrix(scaled)
    N = 2
    assert out.eta_G_exp == base.eta_G_exp
    assert out.eta_g_exp == base.eta_g_exp + N * (N - 1) * z_val


def test_descent_lambda_minimal_uniformizer():
    # d = 1, beta = pi minimal: lambda = q_E^{n_F} = q^{f n_F}: exponent f*n_F
    E = build_extension(poly(F3, "2*T", "0", "1"))
    lam = descent_lambda(E.pi(), E, 1)
    assert lam == E.f_res * (-1)

    with pytest.raises(Exception):
        triv = build_extension(poly(F3, "1 + T", "1"))
        descent_lambda(triv.pi(), triv, 2)


def test_quartic_elliptic_identity():
    # e=2, f=2 quartic over F_2
    g = companion(F2, ["T^2", "0", "T", "0"])  # x^4 + Tx^2 + T^2
    inv = invariants_of_matrix(g)
    assert (inv.e, inv.f) == (2, 2)
    assert inv.eta_G_exp == inv.mu_exp
    assert inv.eta_g_exp == inv.mu_plus_exp
    if inv.separable:
        assert inv.f * inv.c_tilde == inv.nu_D - inv.delta
