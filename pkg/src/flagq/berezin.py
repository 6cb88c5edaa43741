"""Berezin transform, isotypic data of ``H_lambda (x) conj(H_lambda)`` and trace identities.

Tensors ``X`` in ``H (x) conj(H)`` are stored as ``d x d`` matrices via
``v (x) conj(w) -> v w^*``; the group then acts by ``X -> R(g) X R(g)^*``.
All isotypic computations are character inner products evaluated with a
quadrature rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conical import conical_eval, levi_blocks
from .errors import DomainError, PreconditionError, PrecisionError
from .group import SubgroupSpec, as_rng, dagger, subgroup_sample
from .quadrature import CHUNK, QuadratureRule, evaluate, torus_rule
from .representations import HighestWeightRep, build_irrep, character, weight_multiplicities
from .toeplitz import (Symbol, ToeplitzOperator, assemble_toeplitz, check_adequacy,
                       matrix_coefficient_symbol, rep_degree)
from .weights import Weight

ROUND_TOL = 1e-4
MC_SIGMAS = 5.0


# --------------------------------------------------------------------------
# Berezin transform

def berezin_of_operator(rep: HighestWeightRep, S, x) -> np.ndarray | complex:
    """``<S sigma(x) v, sigma(x) v>``; vectorized over stacks of ``x``."""
    S = S.matrix if isinstance(S, ToeplitzOperator) else np.asarray(S)
    if S.shape != (rep.dim, rep.dim):
        raise DomainError(f"operator shape {S.shape} does not match d={rep.dim}")
    c = rep.coherent(x)
    return np.einsum("...i,ij,...j->...", c.conj(), S, c)


def berezin_of_symbol(rep: HighestWeightRep, f: Symbol, x, rule: QuadratureRule) -> np.ndarray | complex:
    """``(B f)(x) = d int f(y) |Delta(y^{-1} x)|^2 dy`` at one point or a stack of points."""
    check_adequacy(rep, f, rule)
    x = np.asarray(x)
    single = x.ndim == 2
    xs = x[None] if single else x
    d = rep.dim
    lam = rep.weight
    fv = evaluate(f.func, rule.nodes)
    ydag = dagger(rule.nodes)
    out = np.empty(len(xs), dtype=complex)
    for i, xi in enumerate(xs):
        kern = np.empty(rule.size)
        for s in range(0, rule.size, CHUNK):
            kern[s:s + CHUNK] = np.abs(conical_eval(lam, ydag[s:s + CHUNK] @ xi)) ** 2
        out[i] = d * np.sum(rule.weights * fv * kern)
    return out[0] if single else out


def berezin_sup_error(rep: HighestWeightRep, f: Symbol, points, rule: QuadratureRule) -> tuple[float, float]:
    """Sup and mean of ``|B f - f|`` over test points."""
    err = np.abs(berezin_of_symbol(rep, f, points, rule) - f(points))
    return float(err.max()), float(err.mean())


# --------------------------------------------------------------------------
# multiplicities and invariant vectors

def _character_fn(pi):
    if isinstance(pi, HighestWeightRep):
        return lambda g: character(pi, g)
    return pi


def _round_count(value: complex, sigma: float, what: str) -> int:
    tol = max(ROUND_TOL, MC_SIGMAS * sigma)
    k = int(round(value.real))
    if abs(value - k) > tol or k < 0:
        raise PrecisionError(f"{what} = {value:.6g} (sigma {sigma:.2g}) is not within {tol:.2g} "
                             f"of a non-negative integer")
    return k


def multiplicity_estimate(sigma_rep: HighestWeightRep, pi, rule: QuadratureRule) -> tuple[complex, float]:
    """``int |chi_sigma|^2 conj(chi_pi)`` and its standard error (0 for exact rules)."""
    if rule.exact and isinstance(pi, HighestWeightRep):
        need = 2 * rep_degree(sigma_rep) + rep_degree(pi)
        if rule.max_degree < need:
            raise PreconditionError(f"rule degree {rule.max_degree} < required {need}")
    chi_pi = _character_fn(pi)
    vals = evaluate(lambda g: np.abs(character(sigma_rep, g)) ** 2 * np.conj(chi_pi(g)), rule.nodes)
    value = complex(np.sum(rule.weights * vals))
    if rule.exact:
        return value, 0.0
    N = rule.size
    return value, float(np.sqrt(np.sum(np.abs(vals - value) ** 2) / (N * max(N - 1, 1))))


def multiplicity(sigma_rep: HighestWeightRep, pi, rule: QuadratureRule) -> int:
    """``m(pi, sigma (x) conj(sigma))``, rounded; MC rules round within ``5 sigma``."""
    value, s = multiplicity_estimate(sigma_rep, pi, rule)
    return _round_count(value, s, "multiplicity")


def invariant_dimension_estimate(pi, blocks: Sequence[int], rule=None, *, special: bool = False,
                                 count: int = 20000, seed=0) -> tuple[complex, float]:
    """``int_L chi_pi(l) dl`` with its standard error.

    ``L = T`` uses the exact uniform torus grid; other block groups use
    ``count`` Haar samples of ``L`` unless a rule or sampler is given.
    """
    spec = SubgroupSpec.levi(blocks, special=special)
    chi = _character_fn(pi)
    exact = False
    if isinstance(rule, QuadratureRule):
        nodes, weights, exact = rule.nodes, rule.weights, rule.exact
    elif callable(rule):
        nodes = np.asarray(rule(count))
        weights = np.full(len(nodes), 1.0 / len(nodes))
    elif spec.kind == "torus":
        deg = sum(pi.weight.coeffs) + abs(pi.weight.central) if isinstance(pi, HighestWeightRep) else 64
        tr = torus_rule(spec.n, max(deg, 1), special=special)
        nodes, weights, exact = tr.nodes, tr.weights, True
    else:
        nodes = subgroup_sample(spec, as_rng(seed), count)
        weights = np.full(count, 1.0 / count)
    vals = evaluate(chi, nodes)
    value = complex(np.sum(weights * vals))
    if exact:
        return value, 0.0
    N = len(nodes)
    return value, float(np.sqrt(np.sum(np.abs(vals - value) ** 2) / (N * max(N - 1, 1))))


def invariant_dimension(pi, blocks: Sequence[int], rule=None, **kw) -> int:
    """``dim H_pi^L``."""
    value, s = invariant_dimension_estimate(pi, blocks, rule, **kw)
    return _round_count(value, s, "invariant dimension")


def invariant_vectors(pi: HighestWeightRep, blocks: Sequence[int], *, special: bool = False,
                      generators: int = 3, seed=0, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of ``H_pi^L`` as the common fixed space of a few random elements of ``L``.

    A handful of Haar-random elements of a compact connected group generate a
    dense subgroup, so their common fixed vectors are the invariants.
    """
    spec = SubgroupSpec.levi(blocks, special=special)
    ls = subgroup_sample(spec, as_rng(seed), generators)
    R = pi(ls)
    stack = np.concatenate(list(R - np.eye(pi.dim)), axis=0)
    _, s, vh = np.linalg.svd(stack)
    s_full = np.zeros(pi.dim)
    s_full[:len(s)] = s
    null = s_full <= tol * max(1.0, s_full.max())
    return vh[null].conj().T


# --------------------------------------------------------------------------
# isotypic projections

def _rep_stack(rep: HighestWeightRep, rule: QuadratureRule) -> np.ndarray:
    return rep(rule.nodes)


def isotypic_project(rep: HighestWeightRep, pi, X, rule: QuadratureRule, *,
                     R: np.ndarray | None = None, return_residual: bool = False):
    """``d_pi int conj(chi_pi(g)) R(g) X R(g)^* dg``.

    The idempotence residual ``|P(P X) - P X|`` is returned on request.
    """
    X = np.asarray(X, dtype=complex)
    R = _rep_stack(rep, rule) if R is None else R
    chi = np.asarray(_character_fn(pi)(rule.nodes))
    d_pi = pi.dim if isinstance(pi, HighestWeightRep) else int(round(chi[0].real))
    coef = d_pi * rule.weights * np.conj(chi)

    def P(Y):
        return np.einsum("m,mij,jk,mlk->il", coef, R, Y, R.conj())

    PX = P(X)
    if return_residual:
        return PX, float(np.abs(P(PX) - PX).max())
    return PX


@dataclass(frozen=True, eq=False)
class IsotypicData:
    """One isotypic component of ``H_lambda (x) conj(H_lambda)``.

    ``projected`` is ``(v_lambda (x) conj(v_lambda))^pi`` as a ``d x d``
    matrix and ``norm2`` its squared Hilbert-Schmidt norm.
    """

    pi: Weight
    dim_pi: int
    multiplicity: int
    projected: np.ndarray
    norm2: float
    idempotence_residual: float = 0.0

    @property
    def label(self) -> str:
        return self.pi.label()


def tensor_candidates(rep: HighestWeightRep, special: bool | None = None) -> list[Weight]:
    """Dominant weights among differences of weights of ``sigma``: the possible constituents of ``sigma (x) conj(sigma)``."""
    special = rep.special if special is None else special
    wts = [np.array(w) for w in weight_multiplicities(rep)]
    out = set()
    for a in wts:
        for b in wts:
            e = a - b
            if np.all(np.diff(e) <= 0):
                w = Weight.from_epsilon(e)
                out.add(Weight(w.coeffs, 0) if special else w)
    return sorted(out, key=lambda w: (sum(w.coeffs), w.coeffs, w.central))


def decompose(rep: HighestWeightRep, rule: QuadratureRule, candidates: Sequence[Weight] | None = None,
              *, special: bool | None = None, seed=0) -> list[IsotypicData]:
    """All constituents of ``sigma (x) conj(sigma)`` with their multiplicities and projected highest tensor."""
    special = rep.special if special is None else special
    cands = tensor_candidates(rep, special) if candidates is None else list(candidates)
    R = _rep_stack(rep, rule)
    chi_s = np.trace(R, axis1=1, axis2=2)
    out = []
    for w in cands:
        pi = build_irrep(w, rep.n, special=special, seed=seed)
        chi_p = character(pi, rule.nodes)
        vals = np.abs(chi_s) ** 2 * np.conj(chi_p)
        value = complex(np.sum(rule.weights * vals))
        sigma = 0.0
        if not rule.exact:
            N = rule.size
            sigma = float(np.sqrt(np.sum(np.abs(vals - value) ** 2) / (N * max(N - 1, 1))))
        m = _round_count(value, sigma, f"multiplicity of {w.label()}")
        if m == 0:
            continue
        coef = pi.dim * rule.weights * np.conj(chi_p)
        r = R[:, :, 0]  # R X R^* = r r^* for X = e_0 e_0^*
        PX = (coef[:, None] * r).T @ r.conj()
        PPX = np.tensordot(coef, R @ PX @ np.conj(np.swapaxes(R, 1, 2)), axes=1)
        out.append(IsotypicData(w, pi.dim, m, PX, float(np.linalg.norm(PX) ** 2),
                                float(np.abs(PPX - PX).max())))
    return out


def highest_tensor_norm2(rep: HighestWeightRep, pi: HighestWeightRep, rule: QuadratureRule) -> float:
    """``||(v (x) conj v)^pi||^2 = d_pi int conj(chi_pi) |Delta|^2`` (no tensor-space work)."""
    lam = rep.weight
    vals = evaluate(lambda g: np.conj(character(pi, g)) * np.abs(conical_eval(lam, g)) ** 2, rule.nodes)
    return float(pi.dim * np.sum(rule.weights * vals).real)


def berezin_eigenvalue(rep: HighestWeightRep, pi, rule: QuadratureRule) -> float:
    """``b_pi = (d_lambda / d_pi) ||(v (x) conj v)^pi||^2`` for a constituent of multiplicity one."""
    if not isinstance(pi, HighestWeightRep):
        pi = build_irrep(pi, rep.n, special=rep.special)
    m = multiplicity(rep, pi, rule)
    if m != 1:
        raise PreconditionError(f"multiplicity of {pi.weight.label()} is {m}; "
                                "per-copy Berezin eigenvalues need a splitting convention")
    return rep.dim / pi.dim * highest_tensor_norm2(rep, pi, rule)


def rescaled_isotypic_gram(rep: HighestWeightRep, pi: HighestWeightRep, rule: QuadratureRule, *,
                           special: bool | None = None, seed=0) -> np.ndarray:
    """``(d_lambda / d_pi) B^lambda_pi`` on ``H_pi^L`` in an orthonormal basis of invariants.

    Entry ``(j, k)`` is ``d_pi <B f_k, f_j>_{L^2} / |u|^2`` with
    ``f_k = pi_{u, v_k}``.  In the multiplicity-free case this is the
    ``1 x 1`` matrix ``[b_pi]``; its eigenvalues are the rescaled norms whose
    approach to 1 the experiment tracks.
    """
    special = rep.special if special is None else special
    V = invariant_vectors(pi, levi_blocks(rep.weight), special=special, seed=seed)
    if V.shape[1] == 0:
        return np.zeros((0, 0))
    u = np.zeros(pi.dim, dtype=complex)
    u[0] = 1.0
    syms = [matrix_coefficient_symbol(pi, u, V[:, k]) for k in range(V.shape[1])]
    fvals = np.stack([evaluate(s.func, rule.nodes) for s in syms])
    coh = np.concatenate([rep.coherent(rule.nodes[s:s + CHUNK]) for s in range(0, rule.size, CHUNK)])
    M = np.empty((len(syms), len(syms)), dtype=complex)
    for k, s in enumerate(syms):
        T = assemble_toeplitz(rep, s, rule).matrix
        Bf = np.einsum("ni,ij,nj->n", coh.conj(), T, coh)
        M[:, k] = pi.dim * (fvals.conj() * (rule.weights * Bf)).sum(axis=1)
    return M


def hs_pairing_check(rep: HighestWeightRep, f: Symbol, g: Symbol, rule: QuadratureRule,
                     return_sigma: bool = False):
    """``|Tr(T_f T_conj(g)) - d <B f, g>_{L^2}|``."""
    Tf = assemble_toeplitz(rep, f, rule)
    Tg = assemble_toeplitz(rep, g.conj(), rule)
    lhs = complex(np.trace(Tf.matrix @ Tg.matrix))
    gv = evaluate(g.func, rule.nodes)
    Bf = np.concatenate([berezin_of_operator(rep, Tf, rule.nodes[s:s + CHUNK])
                         for s in range(0, rule.size, CHUNK)])
    vals = Bf * np.conj(gv)
    rhs = rep.dim * complex(np.sum(rule.weights * vals))
    res = abs(lhs - rhs)
    if not return_sigma:
        return res
    if rule.exact:
        return res, 0.0
    N = rule.size
    mean = rhs / rep.dim
    s_rhs = rep.dim * float(np.sqrt(np.sum(np.abs(vals - mean) ** 2) / (N * max(N - 1, 1))))
    s_lhs = np.linalg.norm(Tf.matrix) * Tg.sigma + np.linalg.norm(Tg.matrix) * Tf.sigma
    return res, float(np.hypot(s_rhs, s_lhs))


def embed_tensor_as_symbol(rep: HighestWeightRep, v, w) -> Symbol:
    """``C(v (x) conj w)(g) = d <sigma(g) v_lambda, v> conj(<sigma(g) v_lambda, w>)``."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    d = rep.dim

    def f(g):
        c = rep.coherent(g)
        return d * (c @ v.conj()) * np.conj(c @ w.conj())

    return Symbol(f, "C(v(x)conj w)", rep.n, tuple(levi_blocks(rep.weight)), None,
                  2 * rep_degree(rep), False)
