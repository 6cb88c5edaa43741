"""Integration against Haar measure.

Integrands are vectorized callables: they receive a stack of group elements
of shape ``(N, n, n)`` and return ``N`` values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .group import as_rng, dagger, haar_sample, su2_from_ab

GroupFunction = Callable[[np.ndarray], np.ndarray]

# evaluation chunk, bounded so that symbol/representation work arrays stay small
CHUNK = 1 << 15


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Weighted nodes on a unitary group.

    ``kind`` is ``"product-exact"`` (SU(2), exact up to ``max_degree``) or
    ``"monte-carlo"`` (``seed`` recorded, statistical error reported by
    :func:`integrate_with_error`).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    max_degree: int | None = None
    seed: int | None = None
    special: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise DomainError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise DomainError("quadrature weights must be positive")
        if abs(np.sum(self.weights) - 1.0) > 1e-12:
            raise DomainError("quadrature weights must sum to 1")

    @property
    def n(self) -> int:
        return self.nodes.shape[-1]

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def exact(self) -> bool:
        return self.kind == "product-exact"

    def describe(self) -> str:
        if self.exact:
            return f"su2-product(maxDegree={self.max_degree}, N={self.size})"
        return f"mc(n={self.n}, N={self.size}, seed={self.seed})"


def su2_product_rule(max_degree: int) -> QuadratureRule:
    """Product rule on SU(2) exact for polynomials of degree <= ``max_degree``.

    Writing ``g = [[a, -b*], [b, a*]]`` with ``a = sqrt(t) e^{i alpha}``,
    ``b = sqrt(1-t) e^{i beta}``, Haar measure is ``dt d alpha d beta / (2 pi)^2``
    on ``[0,1] x [0, 2pi)^2``; ``t = cos^2(theta/2)`` so the ``t`` direction is
    Gauss-Legendre in ``cos(theta)``.  Uniform phase grids with ``D+1`` points
    kill every monomial ``a^p a*^q b^r b*^s`` with ``p != q`` or ``r != s``; the
    survivors ``t^p (1-t)^r`` have degree ``<= D/2`` in ``t``.
    """
    if max_degree < 0:
        raise DomainError("max_degree must be >= 0")
    m = (max_degree // 2) // 2 + 1
    M = max_degree + 1
    x, wx = leggauss(m)
    t = (x + 1) / 2
    wt = wx / 2
    phases = 2 * np.pi * np.arange(M) / M
    T, A, B = np.meshgrid(t, phases, phases, indexing="ij")
    a = np.sqrt(T) * np.exp(1j * A)
    b = np.sqrt(1 - T) * np.exp(1j * B)
    nodes = su2_from_ab(a.ravel(), b.ravel())
    weights = np.repeat(wt, M * M) / (M * M)
    weights = weights / weights.sum()
    return QuadratureRule(nodes, weights, "product-exact", max_degree=max_degree, special=True,
                          meta={"gauss_points": m, "phase_points": M})


def mc_rule(n: int, N: int, seed=0, special: bool = False) -> QuadratureRule:
    """Monte Carlo rule: ``N`` Haar samples with weights ``1/N``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    nodes = haar_sample(n, as_rng(seed), N, special=special)
    seed_val = seed if isinstance(seed, (int, np.integer)) else None
    return QuadratureRule(nodes, np.full(N, 1.0 / N), "monte-carlo", seed=seed_val, special=special)


def torus_rule(n: int, degree: int, special: bool = False) -> QuadratureRule:
    """Uniform product grid on the maximal torus, exact for characters of degree <= ``degree``."""
    M = degree + 1
    free = n - 1 if special else n
    grids = np.meshgrid(*([2 * np.pi * np.arange(M) / M] * free), indexing="ij")
    ang = np.stack([g.ravel() for g in grids], axis=-1) if free else np.zeros((1, 0))
    if special:
        ang = np.concatenate([ang, -ang.sum(axis=-1, keepdims=True)], axis=-1)
    nodes = np.zeros((len(ang), n, n), dtype=complex)
    idx = np.arange(n)
    nodes[:, idx, idx] = np.exp(1j * ang)
    weights = np.full(len(ang), 1.0 / len(ang))
    return QuadratureRule(nodes, weights, "product-exact", max_degree=degree, special=special,
                          meta={"torus": True})


def evaluate(f: GroupFunction, nodes: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on a node stack chunk by chunk."""
    out = []
    for s in range(0, len(nodes), CHUNK):
        v = np.asarray(f(nodes[s:s + CHUNK]))
        out.append(np.broadcast_to(v, (len(nodes[s:s + CHUNK]),)))
    vals = np.concatenate(out) if out else np.zeros(0)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand is not finite at some quadrature node")
    return vals


def integrate(rule: QuadratureRule, f: GroupFunction) -> complex:
    """``sum_i w_i f(g_i)``; numpy's pairwise summation keeps the reduction order-stable."""
    vals = evaluate(f, rule.nodes)
    return complex(np.sum(rule.weights * vals))


def integrate_with_error(rule: QuadratureRule, f: GroupFunction) -> tuple[complex, float]:
    """Integral plus its error estimate: 0 for exact rules, the MC standard error otherwise."""
    vals = evaluate(f, rule.nodes)
    value = complex(np.sum(rule.weights * vals))
    if rule.exact:
        return value, 0.0
    N = rule.size
    sigma = float(np.sqrt(np.sum(np.abs(vals - value) ** 2) / (N * max(N - 1, 1))))
    return value, sigma


def convolve_at(rule: QuadratureRule, f: GroupFunction, g: GroupFunction, x) -> complex:
    """``(f * g)(x) = int f(y) g(y^{-1} x) dy`` evaluated with ``rule``."""
    x = np.asarray(x)
    return integrate(rule, lambda ys: np.asarray(f(ys)) * np.asarray(g(dagger(ys) @ x)))
