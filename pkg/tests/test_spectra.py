import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import product_rule, su2_rep
from flagq import toeplitz as tz
from flagq.errors import DomainError, PreconditionError
from flagq.spectra import counting_fraction, has_atom, level_measure, spectrum
from flagq.toeplitz import assemble_toeplitz


def test_spectrum_sorted_and_labelled():
    k = 6
    s = spectrum(assemble_toeplitz(su2_rep(k), tz.abs2_g11(), product_rule(2 * k + 2)))
    assert s.dim == k + 1 and s.symbol_id == "|g11|^2"
    assert np.all(np.diff(s.eigenvalues) >= 0)
    assert s.hermiticity_residual < 1e-12


def test_refuses_non_hermitian():
    with pytest.raises(PreconditionError):
        spectrum(np.array([[0, 1], [0, 0]], dtype=complex))


@given(st.integers(2, 60), st.floats(0.01, 0.99))
@settings(max_examples=30, deadline=None)
def test_counting_fraction_closed_form(k, tau):
    # eigenvalues i / (k + 2), i = 1..k+1; ties with tau are excluded
    assume(min(abs(tau - i / (k + 2)) for i in range(1, k + 2)) > 1e-9)
    s = spectrum(assemble_toeplitz(su2_rep(k), tz.abs2_g11(), product_rule(2 * k + 2)))
    expect = sum(1 for i in range(1, k + 2) if i / (k + 2) > tau) / (k + 1)
    assert counting_fraction(s, tau) == expect


@pytest.mark.parametrize("tau", [0.2, 0.5, 0.8])
def test_level_measure_of_abs2_g11(tau):
    # |g11|^2 is uniform on [0, 1]
    p, s = level_measure(tz.abs2_g11(), tau, 2, N=200000, seed=3, special=True, return_sigma=True)
    assert abs(p - (1 - tau)) < 5 * s


def test_level_measure_constant_symbol():
    assert level_measure(tz.const_symbol(0.5, 2), 0.7, N=1000) == 0.0
    assert level_measure(tz.const_symbol(0.5, 2), 0.3, N=1000) == 1.0


def test_level_measure_rejects_complex_symbol():
    f = tz.Symbol(lambda g: g[:, 0, 0], "g11", 2, None, None, 1, False)
    with pytest.raises(DomainError):
        level_measure(f, 0.1, N=100)


def test_atoms():
    assert has_atom(tz.const_symbol(0.5, 2), 0.5)
    assert not has_atom(tz.const_symbol(0.5, 2), 0.7)
    assert not has_atom(tz.abs2_g11(), 0.5, special=True)
