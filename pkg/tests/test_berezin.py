from math import factorial

import numpy as np
import pytest

from conftest import product_rule, su2_rep
from flagq import toeplitz as tz
from flagq.berezin import (berezin_eigenvalue, berezin_of_operator, berezin_of_symbol, berezin_sup_error,
                           decompose, hs_pairing_check, invariant_dimension, invariant_dimension_estimate,
                           invariant_vectors, isotypic_project, multiplicity, multiplicity_estimate,
                           rescaled_isotypic_gram)
from flagq.errors import PreconditionError
from flagq.group import haar_sample
from flagq.quadrature import mc_rule
from flagq.representations import build_irrep
from flagq.toeplitz import assemble_toeplitz
from flagq.weights import Weight


def b_su2(k: int, l: int) -> float:
    """Berezin eigenvalue of spin l inside spin k/2 (x) its conjugate."""
    return (k + 1) * factorial(k) ** 2 / (factorial(k - l) * factorial(k + l + 1))


def pi_su2(dynkin: int):
    return build_irrep(Weight((dynkin,)), special=True)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
def test_berezin_eigenvalues_closed_form(k):
    rep = su2_rep(k)
    rule = product_rule(4 * k)
    for l in range(k + 1):
        assert abs(berezin_eigenvalue(rep, pi_su2(2 * l), rule) - b_su2(k, l)) < 1e-12


def test_lambda2_values():
    rule = product_rule(8)
    vals = [berezin_eigenvalue(su2_rep(2), pi_su2(2 * l), rule) for l in range(3)]
    assert np.allclose(vals, [1.0, 0.5, 0.1], atol=1e-13)


@pytest.mark.parametrize("k", [2, 4, 6])
def test_berezin_trace(k):
    comps = decompose(su2_rep(k), product_rule(4 * k))
    assert [c.pi.coeffs[0] for c in comps] == list(range(0, 2 * k + 1, 2))
    total = sum(c.dim_pi * (k + 1) / c.dim_pi * c.norm2 for c in comps)
    assert abs(total - (k + 1)) <= 1e-8
    assert abs(sum(c.dim_pi * b_su2(k, c.pi.coeffs[0] // 2) for c in comps) - (k + 1)) < 1e-12
    assert max(c.idempotence_residual for c in comps) < 1e-10


@pytest.mark.parametrize("k", range(1, 11))
def test_multiplicity_stabilises(k):
    # spin 1 sits once in sigma (x) conj(sigma) and has a one-dimensional T-fixed space
    rep = su2_rep(k)
    pi = pi_su2(2)
    assert multiplicity(rep, pi, product_rule(2 * k + 2)) == 1
    assert invariant_dimension(pi, (1, 1), special=True) == 1


@pytest.mark.parametrize("m", range(0, 9))
def test_su2_invariant_dimension_parity(m):
    assert invariant_dimension(pi_su2(m), (1, 1), special=True) == (1 if m % 2 == 0 else 0)
    assert multiplicity(su2_rep(3), pi_su2(m), product_rule(6 + m)) == (1 if m % 2 == 0 and m <= 6 else 0)


def test_u3_fundamental_multiplicities():
    rep = build_irrep(Weight((1, 0)))
    rule = mc_rule(3, 200000, seed=8)
    for lam in (Weight((0, 0)), Weight((1, 1), -1)):
        value, s = multiplicity_estimate(rep, build_irrep(lam), rule)
        assert abs(value - 1) <= 5 * s
        assert multiplicity(rep, build_irrep(lam), rule) == 1


def test_u3_adjoint_invariants():
    adj = build_irrep(Weight((1, 1), -1))
    assert invariant_dimension(adj, (1, 2), count=100000, seed=2) == 1
    assert invariant_vectors(adj, (1, 2)).shape[1] == 1
    assert invariant_dimension(adj, (1, 1, 1)) == 2
    assert invariant_vectors(adj, (1, 1, 1)).shape[1] == 2


def test_invariant_estimate_is_exact_on_torus():
    value, s = invariant_dimension_estimate(pi_su2(4), (1, 1), special=True)
    assert s == 0 and abs(value - 1) < 1e-12


def test_berezin_eigenvalue_needs_multiplicity_one():
    rep = build_irrep(Weight((1, 1)))
    with pytest.raises(PreconditionError):
        berezin_eigenvalue(rep, Weight((1, 1)), mc_rule(3, 20000, seed=1))


def test_rescaled_gram_is_b_on_su2():
    k = 4
    M = rescaled_isotypic_gram(su2_rep(k), pi_su2(2), product_rule(2 * k + 2 + 4))
    assert M.shape == (1, 1)
    assert abs(M[0, 0] - b_su2(k, 1)) < 1e-10


def test_berezin_of_constant():
    rep = su2_rep(5)
    x = haar_sample(2, 1, 10, special=True)
    assert np.allclose(berezin_of_symbol(rep, tz.const_symbol(2.5, 2), x, product_rule(10)), 2.5)
    assert np.allclose(berezin_of_operator(rep, np.eye(6), x), 1)


@pytest.mark.parametrize("k", [2, 10, 40])
def test_berezin_of_abs2_g11(k):
    # |g11|^2 - 1/2 is a spin-1 harmonic, scaled by b_1 = k / (k + 2)
    rep = su2_rep(k)
    x = haar_sample(2, 6, 30, special=True)
    f = tz.abs2_g11()
    got = berezin_of_symbol(rep, f, x, product_rule(2 * k + 2))
    expect = 0.5 + k / (k + 2) * (f(x) - 0.5)
    assert np.allclose(got, expect, atol=1e-12)
    # and through the operator
    T = assemble_toeplitz(rep, f, product_rule(2 * k + 2))
    assert np.allclose(berezin_of_operator(rep, T, x), expect, atol=1e-12)


def test_berezin_of_operator_matches_convolution():
    k = 5
    rep = su2_rep(k)
    x = haar_sample(2, 2, 10, special=True)
    f = tz.abs4_g11()
    T = assemble_toeplitz(rep, f, product_rule(2 * k + 4))
    via_op = berezin_of_operator(rep, T, x)
    via_conv = berezin_of_symbol(rep, f, x, product_rule(2 * k + 4))
    assert np.allclose(via_op, via_conv, atol=1e-12)


def test_sup_error_decreases():
    x = haar_sample(2, 7, 20, special=True)
    errs = [berezin_sup_error(su2_rep(k), tz.abs2_g11(), x, product_rule(2 * k + 2))[0] for k in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 0.03


@pytest.mark.parametrize("k", [2, 4, 6])
def test_hs_pairing(k):
    rep = su2_rep(k)
    for f, g in ((tz.abs2_g11(), tz.hopf_x()), (tz.abs4_g11(), tz.abs2_g11_plus_g12())):
        assert hs_pairing_check(rep, f, g, product_rule(2 * k + 4)) <= 1e-8


def test_isotypic_projector_is_idempotent():
    rep = su2_rep(2)
    X = np.random.default_rng(0).standard_normal((3, 3)) + 0j
    PX, res = isotypic_project(rep, pi_su2(2), X, product_rule(10), return_residual=True)
    assert res < 1e-12
    # projections onto all constituents add up to X
    total = sum(isotypic_project(rep, pi_su2(m), X, product_rule(8 + m)) for m in (0, 2, 4))
    assert np.allclose(total, X, atol=1e-12)


def test_embedding_norm_is_berezin_weighted():
    # int |C(X)|^2 = d sum_pi b_pi ||X^pi||^2, X = v (x) conj(w)
    k = 2
    rep = su2_rep(k)
    rng = np.random.default_rng(1)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    from flagq.berezin import embed_tensor_as_symbol
    from flagq.quadrature import integrate
    C = embed_tensor_as_symbol(rep, v, w)
    rule = product_rule(4 * k)
    lhs = integrate(rule, lambda g: np.abs(C.func(g)) ** 2).real
    X = np.outer(v, w.conj())
    rhs = sum((k + 1) * b_su2(k, l) * np.linalg.norm(isotypic_project(rep, pi_su2(2 * l), X, rule)) ** 2
              for l in range(k + 1))
    assert abs(lhs - rhs) < 1e-10 * max(1.0, lhs)
