import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagq.group import (SubgroupSpec, coset_angle, dagger, haar_sample, su2_euler_array, su2_from_ab,
                         subgroup_sample, torus_element, unitarity_residual)


@given(st.integers(1, 5), st.booleans(), st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_haar_samples_are_unitary(n, special, seed):
    g = haar_sample(n, seed, 16, special=special)
    assert g.shape == (16, n, n)
    assert unitarity_residual(g).max() < 1e-12
    if special:
        assert np.abs(np.linalg.det(g) - 1).max() < 1e-12


def test_haar_moments(rng):
    # |g11|^2 is Beta(1, n-1): mean 1/n, second moment 2/(n(n+1))
    for n in (2, 3, 4):
        g = haar_sample(n, rng, 200000)
        x = np.abs(g[:, 0, 0]) ** 2
        assert abs(x.mean() - 1 / n) < 5 * x.std() / np.sqrt(len(x))
        assert abs((x ** 2).mean() - 2 / (n * (n + 1))) < 0.005
        # trace moments: E|tr g|^2 = 1 for U(n)
        t = np.abs(np.trace(g, axis1=1, axis2=2)) ** 2
        assert abs(t.mean() - 1) < 0.02


def test_seeded_reproducibility():
    a = haar_sample(3, 7, 5)
    b = haar_sample(3, 7, 5)
    assert np.array_equal(a, b)


def test_subgroup_sample_is_block_diagonal(rng):
    spec = SubgroupSpec.levi((1, 2))
    ls = subgroup_sample(spec, rng, 10)
    assert np.abs(ls[:, 0, 1:]).max() == 0 and np.abs(ls[:, 1:, 0]).max() == 0
    assert unitarity_residual(ls).max() < 1e-12


def test_coset_angle_is_right_invariant(rng):
    g = haar_sample(3, rng, 50)
    ls = subgroup_sample(SubgroupSpec.levi((1, 2)), rng, 50)
    assert np.allclose(coset_angle(g, (1, 2)), coset_angle(g @ ls, (1, 2)), atol=1e-10)
    assert np.allclose(coset_angle(np.eye(3)[None], (1, 2)), 0)


def test_su2_parametrisations(rng):
    g = su2_euler_array(rng.uniform(0, 2 * np.pi, 20), rng.uniform(0, np.pi, 20), rng.uniform(0, 4 * np.pi, 20))
    assert unitarity_residual(g).max() < 1e-12
    assert np.allclose(np.linalg.det(g), 1)
    a = np.array([0.6 + 0j])
    b = np.array([0.8j])
    h = su2_from_ab(a, b)
    assert np.allclose(np.linalg.det(h), 1)
    assert np.isclose(h[0, 0, 0], 0.6)


def test_torus_and_dagger():
    t = torus_element([0.3, -0.3])
    assert np.allclose(t @ dagger(t), np.eye(2))
    assert np.isclose(np.linalg.det(t), 1)
