import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagq.quadrature import convolve_at, integrate, integrate_with_error, mc_rule, su2_product_rule, torus_rule


@given(st.integers(0, 12))
@settings(max_examples=13, deadline=None)
def test_product_rule_moments(k):
    # |g11|^2 is uniform on [0, 1] for SU(2)
    rule = su2_product_rule(2 * k)
    val = integrate(rule, lambda g: np.abs(g[:, 0, 0]) ** (2 * k))
    assert abs(val - 1 / (k + 1)) < 1e-13


def test_product_rule_character_orthogonality():
    # characters of SU(2): int chi_a chi_b = delta_ab
    rule = su2_product_rule(16)

    def chi(j):
        def f(g):
            t = np.trace(g, axis1=1, axis2=2).real / 2
            th = np.arccos(np.clip(t, -1, 1))
            s = np.sin(th)
            return np.where(np.abs(s) > 1e-12, np.sin((j + 1) * th) / np.where(s == 0, 1, s), j + 1.0)
        return f

    for a in range(5):
        for b in range(5):
            v = integrate(rule, lambda g: chi(a)(g) * chi(b)(g))
            assert abs(v - (a == b)) < 1e-10


def test_odd_polynomials_vanish():
    rule = su2_product_rule(9)
    assert abs(integrate(rule, lambda g: g[:, 0, 0] ** 3 * np.conj(g[:, 0, 1]))) < 1e-14
    assert abs(integrate(rule, lambda g: g[:, 0, 1])) < 1e-14


def test_mc_error_bar(rng):
    rule = mc_rule(3, 50000, seed=5)
    val, s = integrate_with_error(rule, lambda g: np.abs(g[:, 0, 0]) ** 2)
    assert not rule.exact
    assert abs(val - 1 / 3) < 5 * s
    assert 0 < s < 0.01


def test_torus_rule_exact():
    rule = torus_rule(3, 6)
    assert rule.meta.get("torus")
    val = integrate(rule, lambda g: np.abs(np.trace(g, axis1=1, axis2=2)) ** 2)
    assert abs(val - 3) < 1e-12


def test_convolution_of_constants():
    rule = su2_product_rule(4)
    val = convolve_at(rule, lambda g: np.ones(len(g)), lambda g: np.ones(len(g)), np.eye(2))
    assert abs(val - 1) < 1e-14


def test_weights_sum_to_one():
    for D in (0, 1, 5, 20):
        r = su2_product_rule(D)
        assert abs(r.weights.sum() - 1) < 1e-13
        assert r.max_degree >= D
