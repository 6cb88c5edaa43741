"""Spectra of self-adjoint Toeplitz operators, counting functions and symbol level measures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .group import as_rng, haar_sample
from .toeplitz import Symbol, ToeplitzOperator

HERMITICITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    weight_label: str
    eigenvalues: np.ndarray  # ascending
    symbol_id: str
    hermiticity_residual: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def spectrum(A, tol: float = HERMITICITY_TOL) -> SpectralSummary:
    """Sorted eigenvalues of ``(A + A^*)/2``; refuses when ``|A - A^*|`` exceeds ``tol``."""
    if isinstance(A, ToeplitzOperator):
        M, label, sid = A.matrix, A.rep.weight.label(), A.symbol_id
    else:
        M, label, sid = np.asarray(A), "", ""
    resid = float(np.abs(M - M.conj().T).max())
    if resid > tol:
        raise PreconditionError(f"operator is not self-adjoint (residual {resid:.2e})")
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
    ev.setflags(write=False)
    return SpectralSummary(label, ev, sid, resid)


def counting_fraction(s: SpectralSummary, tau: float) -> float:
    """``#{eigenvalues > tau} / d``."""
    return float(np.count_nonzero(s.eigenvalues > tau)) / s.dim


def level_measure(f: Symbol, tau: float, n: int | None = None, N: int = 100000, seed=0, *,
                  special: bool = False, sampler=None, return_sigma: bool = False):
    """Haar MC estimate of ``mu(f > tau)`` with its binomial standard error.

    Right-L-invariant symbols give the measure on ``G/L`` directly.
    """
    n = n or f.n
    g = np.asarray(sampler(N)) if sampler is not None else haar_sample(n, as_rng(seed), N, special=special)
    vals = np.asarray(f.func(g))
    if np.abs(vals.imag).max() > 1e-12:
        raise DomainError(f"symbol {f.id} is not real")
    p = float(np.mean(vals.real > tau))
    sigma = float(np.sqrt(max(p * (1 - p), 0.0) / N))
    return (p, sigma) if return_sigma else p


def has_atom(f: Symbol, tau: float, n: int | None = None, N: int = 20000, seed=0, *,
             special: bool = False, window: float | None = None) -> bool:
    """True when the empirical law of ``f`` jumps by more than ``2/sqrt(N)`` at ``tau``.

    The jump is measured as the fraction of samples within ``window`` of
    ``tau`` (default: ``1e-9`` relative to the sample range).
    """
    n = n or f.n
    vals = np.asarray(f.func(haar_sample(n, as_rng(seed), N, special=special))).real
    span = float(vals.max() - vals.min()) or 1.0
    window = 1e-9 * span if window is None else window
    return float(np.mean(np.abs(vals - tau) <= window)) > 2.0 / np.sqrt(N)
