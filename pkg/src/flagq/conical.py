"""Conical functions, Berezin kernels and the multi-point kernels ``h_k``.

``Delta^lambda(g)`` is the product of leading (top-left) minors of ``g``
raised to the weight coefficients, times ``det(g)^c``.  Top-left minors go
with the highest-weight vectors ``e_1 ^ ... ^ e_i``; bottom-right minors
belong to the opposite Borel and differ by a Weyl relabeling, which leaves
every ``|Delta|``-level statement unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .group import as_rng, coset_angle, dagger, haar_sample, su2_euler_array
from .quadrature import QuadratureRule, evaluate
from .weights import Weight, parabolic_blocks, support, weyl_dimension

UNDERFLOW = 1e-300


def _weight(lam) -> Weight:
    return lam if isinstance(lam, Weight) else Weight(tuple(lam))


def leading_minors(g: np.ndarray, upto: int) -> np.ndarray:
    """``det g[:i, :i]`` for ``i = 1..upto``, stacked on the last axis."""
    g = np.asarray(g)
    return np.stack([np.linalg.det(g[..., :i, :i]) for i in range(1, upto + 1)], axis=-1)


def conical_eval(lam, g) -> np.ndarray | complex:
    """``Delta^lambda(g) = prod_i det(g[:i,:i])^{lambda_i} * det(g)^c``.

    Works for any invertible matrix (the function extends holomorphically).
    Powers go through the complex logarithm; a factor whose minor is below
    ``1e-300 * scale`` makes the whole product an exact zero.
    """
    lam = _weight(lam)
    g = np.asarray(g, dtype=complex)
    n = g.shape[-1]
    if n != lam.n:
        raise DomainError(f"weight for U({lam.n}) applied to {n}x{n} matrices")
    scale = max(1.0, float(np.abs(g).max()) if g.size else 1.0)
    logval = np.zeros(g.shape[:-2], dtype=complex)
    zero = np.zeros(g.shape[:-2], dtype=bool)
    powers = [(i + 1, c) for i, c in enumerate(lam.coeffs) if c > 0]
    if lam.central:
        powers.append((n, lam.central))
    for i, c in powers:
        m = np.linalg.det(g[..., :i, :i])
        tiny = np.abs(m) <= UNDERFLOW * scale ** i
        zero |= tiny
        safe = np.where(tiny, 1.0, m)
        logval = logval + c * np.log(safe)
    out = np.where(zero, 0.0, np.exp(logval))
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ConicalFunction:
    """``Delta^lambda`` as a vectorized group function."""

    weight: Weight

    @property
    def n(self) -> int:
        return self.weight.n

    def __call__(self, g):
        return conical_eval(self.weight, g)


def berezin_kernel_eval(lam, g, d: int | None = None) -> np.ndarray | float:
    """``d_lambda |Delta^lambda(g)|^2``."""
    lam = _weight(lam)
    d = weyl_dimension(lam) if d is None else d
    return d * np.abs(conical_eval(lam, g)) ** 2


@dataclass(frozen=True)
class BerezinKernel:
    weight: Weight

    @property
    def dim(self) -> int:
        return weyl_dimension(self.weight)

    def __call__(self, g):
        return berezin_kernel_eval(self.weight, g, self.dim)


def stabilizer_classify(lam, g, tol: float = 1e-10):
    """``"in_L"`` if ``1 - |Delta^lambda(g)| <= tol``, ``"boundary"`` within ``10 tol``, else ``"outside_L"``."""
    gap = 1.0 - np.abs(conical_eval(lam, g))
    out = np.where(gap <= tol, "in_L", np.where(gap <= 10 * tol, "boundary", "outside_L"))
    return str(out) if out.ndim == 0 else out


def levi_blocks(lam, n: int | None = None) -> list[int]:
    """Block sizes of the stabilizer ``L`` of ``|Delta^lambda|``."""
    lam = _weight(lam)
    return parabolic_blocks(support(lam), n or lam.n)


def h_k_eval(lam, k: int, ys, d: int | None = None) -> np.ndarray:
    """``d^k Delta(y_1) Delta(y_1^{-1} y_2) ... Delta(y_k^{-1})``.

    ``ys`` has shape ``(..., k, n, n)``.  For ``k = 1`` this is the Berezin
    kernel, since ``Delta(y^{-1}) = conj(Delta(y))`` on unitaries.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    lam = _weight(lam)
    ys = np.asarray(ys)
    if ys.shape[-3] != k:
        raise DomainError(f"expected {k} points, got {ys.shape[-3]}")
    d = weyl_dimension(lam) if d is None else d
    val = conical_eval(lam, ys[..., 0, :, :])
    for i in range(1, k):
        val = val * conical_eval(lam, dagger(ys[..., i - 1, :, :]) @ ys[..., i, :, :])
    val = val * conical_eval(lam, dagger(ys[..., k - 1, :, :]))
    return float(d) ** k * val


# --------------------------------------------------------------------------
# concentration of h_k

def su2_coset_rep(p, gamma) -> np.ndarray:
    """Representative of the coset ``gT`` in SU(2) with ``|g_11|^2 = p`` and ``arg(g_21/g_11) = gamma``."""
    p, gamma = np.broadcast_arrays(np.asarray(p, float), np.asarray(gamma, float))
    a = np.sqrt(p)
    b = np.sqrt(1 - p) * np.exp(1j * gamma)
    g = np.empty(p.shape + (2, 2), dtype=complex)
    g[..., 0, 0] = a
    g[..., 0, 1] = -np.conj(b)
    g[..., 1, 0] = b
    g[..., 1, 1] = a
    return g


def _su2_exterior_grid(k: int, theta0: float, resolution: int) -> np.ndarray:
    """Coset representatives ``(N, k, 2, 2)`` with every polar angle in ``[theta0, pi]``.

    ``|h_k|`` is right-T-invariant in each point and invariant under a common
    left torus translation, so the first azimuth is fixed at 0.
    """
    thetas = np.linspace(theta0, np.pi, resolution)
    if k == 1:
        return su2_euler_array(0.0, thetas, 0.0)[:, None]
    phis = 2 * np.pi * np.arange(resolution) / resolution
    axes = [thetas] * k + [phis] * (k - 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    th = np.stack([m.ravel() for m in mesh[:k]], axis=-1)
    ph = np.concatenate([np.zeros((th.shape[0], 1))] + [m.ravel()[:, None] for m in mesh[k:]], axis=-1)
    return su2_euler_array(ph, th, 0.0)


def sup_outside_neighborhood(lam, k: int, theta0: float,
                             sampler: Callable[[int], np.ndarray] | None = None, *,
                             count: int = 20000, seed=0, resolution: int | None = None,
                             chunk: int = 1 << 14) -> float:
    """Empirical ``sup |h_k|`` over point tuples lying outside the ``theta0``-ball of ``eL``.

    On SU(2) with ``k <= 2`` and no sampler the points come from a
    deterministic Euler grid that includes the boundary ``theta = theta0``.
    Otherwise ``sampler(count)`` (default: Haar) provides candidates of
    shape ``(count, k, n, n)`` and those with some point inside the ball
    are dropped.
    """
    lam = _weight(lam)
    n = lam.n
    blocks = levi_blocks(lam)
    d = weyl_dimension(lam)
    if sampler is None and n == 2 and k <= 2:
        res = resolution or (4097 if k == 1 else 96)
        ys = _su2_exterior_grid(k, theta0, res)
    else:
        if sampler is None:
            rng = as_rng(seed)
            ys = haar_sample(n, rng, count * k).reshape(count, k, n, n)
        else:
            ys = np.asarray(sampler(count))
        keep = np.all(coset_angle(ys, blocks) >= theta0, axis=-1)
        ys = ys[keep]
        if len(ys) == 0:
            raise DomainError("no sample falls outside the exclusion ball")
    best = 0.0
    for s in range(0, len(ys), chunk):
        best = max(best, float(np.abs(h_k_eval(lam, k, ys[s:s + chunk], d)).max()))
    return best


def hk_integral(lam, k: int, rule: QuadratureRule) -> complex:
    """``int h_k`` over ``G^k`` by iterating the kernel ``Delta(y_a^{-1} y_b)`` on the rule's nodes.

    With an exact rule of degree ``>= 2 lambda_1`` on SU(2) the result is exact.
    """
    lam = _weight(lam)
    d = weyl_dimension(lam)
    y, w = rule.nodes, rule.weights
    first = evaluate(lambda g: conical_eval(lam, g), y)
    last = np.conj(first)  # Delta(y^{-1}) = conj Delta(y)
    vec = w * last
    for _ in range(k - 1):
        new = np.empty(len(y), dtype=complex)
        for s in range(0, len(y), 256):
            blk = conical_eval(lam, dagger(y[s:s + 256])[:, None] @ y[None, :])
            new[s:s + 256] = blk @ vec
        vec = w * new
    return complex(float(d) ** k * np.sum(first * vec))


def hk_l1_norm(lam, k: int, *, resolution: int = 64, count: int = 200000, seed=0,
               return_sigma: bool = False):
    """Estimate ``||h_k||_1`` over ``G^k``.

    SU(2), ``k = 2``: ``|h_2|`` depends only on the two cosets up to a common
    torus rotation, i.e. on ``(p_1, p_2, gamma_2)`` with ``p = |g_11|^2``
    uniform and ``gamma`` a uniform phase.  Gauss-Legendre in ``p`` (clustered
    towards ``p = 1`` where the kernel lives) and a uniform phase grid.
    Everything else: Monte Carlo with the standard error.
    """
    lam = _weight(lam)
    n = lam.n
    d = weyl_dimension(lam)
    if n == 2 and k == 1:
        # h_1 = d |Delta|^2 >= 0 is a polynomial of degree 2 lambda_1
        from .quadrature import integrate, su2_product_rule
        rule = su2_product_rule(2 * lam.coeffs[0])
        val = integrate(rule, lambda g: berezin_kernel_eval(lam, g, d)).real
        return (val, 0.0) if return_sigma else val
    if n == 2 and k == 2:
        x, wx = leggauss(resolution)
        # p = 1 - s^2 with s in [0,1] packs nodes near p = 1 (dp = 2 s ds)
        s = (x + 1) / 2
        ws = wx / 2
        p = 1 - s ** 2
        wp = ws * 2 * s
        M = 2 * resolution
        gam = 2 * np.pi * np.arange(M) / M
        P1, P2, G2 = np.meshgrid(p, p, gam, indexing="ij")
        W = (wp[:, None, None] * wp[None, :, None]) * np.full(M, 1.0 / M)[None, None, :]
        ys = np.stack([su2_coset_rep(P1, 0.0), su2_coset_rep(P2, G2)], axis=-3)
        vals = np.abs(h_k_eval(lam, 2, ys.reshape(-1, 2, 2, 2), d))
        val = float(np.sum(W.ravel() * vals))
        return (val, 0.0) if return_sigma else val
    rng = as_rng(seed)
    tot, tot2 = 0.0, 0.0
    for s in range(0, count, 1 << 14):
        m = min(1 << 14, count - s)
        ys = haar_sample(n, rng, m * k).reshape(m, k, n, n)
        v = np.abs(h_k_eval(lam, k, ys, d))
        tot += float(v.sum())
        tot2 += float((v ** 2).sum())
    mean = tot / count
    sigma = float(np.sqrt(max(tot2 / count - mean ** 2, 0.0) / max(count - 1, 1)))
    return (mean, sigma) if return_sigma else mean
