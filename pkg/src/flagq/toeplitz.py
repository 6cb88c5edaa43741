"""Symbols and Toeplitz operators on ``H_lambda``.

A Toeplitz operator is assembled directly on the representation space as

    T_f = d_lambda * sum_i w_i f(y_i) (sigma(y_i) v_lambda)(sigma(y_i) v_lambda)^*

so the Bergman space of sections over ``G/L`` is never built.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .group import SubgroupSpec, as_rng, dagger, haar_sample, subgroup_sample
from .quadrature import CHUNK, QuadratureRule, torus_rule
from .representations import HighestWeightRep, weight_vectors

SPOT_CHECK_PAIRS = 20
SPOT_CHECK_TOL = 1e-8
SPOT_CHECK_SEED = 20240601


def rep_degree(rep: HighestWeightRep) -> int:
    """Polynomial degree of the matrix entries of ``rep`` in the entries of ``g`` and ``conj(g)``."""
    lam = rep.weight
    return sum((i + 1) * c for i, c in enumerate(lam.coeffs)) + rep.n * abs(lam.central)


@dataclass(frozen=True, eq=False)
class Symbol:
    """Scalar function on U(n) (or SU(n)), vectorized over stacks ``(N, n, n)``.

    ``right_blocks``: declared right invariance under the block group with
    these sizes (``None`` = nothing declared).  ``left``: declared left
    invariance.  ``degree``: total polynomial degree in ``g, conj(g)``, or
    ``None`` for non-polynomial symbols (no exactness claim is then made).
    """

    func: Callable[[np.ndarray], np.ndarray]
    id: str
    n: int
    right_blocks: tuple[int, ...] | None = None
    left: SubgroupSpec | None = None
    degree: int | None = None
    real: bool = False
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.right_blocks is not None:
            object.__setattr__(self, "right_blocks", tuple(int(b) for b in self.right_blocks))
            if sum(self.right_blocks) != self.n:
                raise DomainError(f"blocks {self.right_blocks} do not partition n={self.n}")
            if self.check:
                res = right_invariance_residual(self, self.right_blocks)
                if res > SPOT_CHECK_TOL:
                    raise DomainError(f"symbol {self.id} is not right-invariant under "
                                      f"L{list(self.right_blocks)} (residual {res:.2e})")

    def __call__(self, g):
        g = np.asarray(g)
        if g.ndim == 2:
            return complex(np.asarray(self.func(g[None]))[0])
        return np.asarray(self.func(g))

    def conj(self) -> "Symbol":
        f = self.func
        return replace(self, func=lambda g: np.conj(f(g)), id=f"conj({self.id})", check=False)

    def scaled(self, c: complex) -> "Symbol":
        f = self.func
        return replace(self, func=lambda g: c * f(g), id=f"{c}*{self.id}", real=self.real and np.isreal(c),
                       check=False)

    def __add__(self, other: "Symbol") -> "Symbol":
        f, h = self.func, other.func
        return Symbol(lambda g: f(g) + h(g), f"({self.id}+{other.id})", self.n,
                      self.right_blocks if self.right_blocks == other.right_blocks else None,
                      self.left if self.left == other.left else None,
                      _deg_max(self.degree, other.degree), self.real and other.real, check=False)

    def __mul__(self, other: "Symbol") -> "Symbol":
        f, h = self.func, other.func
        deg = None if self.degree is None or other.degree is None else self.degree + other.degree
        return Symbol(lambda g: f(g) * h(g), f"{self.id}*{other.id}", self.n,
                      self.right_blocks if self.right_blocks == other.right_blocks else None,
                      self.left if self.left == other.left else None,
                      deg, self.real and other.real, check=False)

    def left_translate(self, x) -> "Symbol":
        """``(L(x) f)(g) = f(x^{-1} g)``."""
        xinv = dagger(np.asarray(x))
        f = self.func
        return Symbol(lambda g: f(xinv @ g), f"L(x){self.id}", self.n, self.right_blocks, None,
                      self.degree, self.real, check=False)


def _deg_max(a, b):
    return None if a is None or b is None else max(a, b)


def right_invariance_residual(f: Symbol, blocks: Sequence[int], pairs: int = SPOT_CHECK_PAIRS,
                              seed=SPOT_CHECK_SEED) -> float:
    rng = as_rng(seed)
    g = haar_sample(f.n, rng, pairs)
    l = subgroup_sample(SubgroupSpec.levi(blocks), rng, pairs)
    return float(np.abs(np.asarray(f.func(g @ l)) - np.asarray(f.func(g))).max())


def left_invariance_residual(f: Symbol, H: SubgroupSpec, pairs: int = SPOT_CHECK_PAIRS,
                             seed=SPOT_CHECK_SEED) -> float:
    rng = as_rng(seed)
    g = haar_sample(f.n, rng, pairs)
    h = subgroup_sample(H, rng, pairs)
    return float(np.abs(np.asarray(f.func(h @ g)) - np.asarray(f.func(g))).max())


# --------------------------------------------------------------------------
# built-in symbols

def const_symbol(c: float, n: int) -> Symbol:
    return Symbol(lambda g: np.full(len(g), c, dtype=complex), f"const({c})", n, (n,),
                  SubgroupSpec("full", n), 0, bool(np.isreal(c)))


def abs2_g11(n: int = 2) -> Symbol:
    return Symbol(lambda g: np.abs(g[:, 0, 0]) ** 2 + 0j, "|g11|^2", n, (1, n - 1),
                  SubgroupSpec.levi((1, n - 1)), 2, True)


def abs4_g11(n: int = 2) -> Symbol:
    return Symbol(lambda g: np.abs(g[:, 0, 0]) ** 4 + 0j, "|g11|^4", n, (1, n - 1),
                  SubgroupSpec.levi((1, n - 1)), 4, True)


def re_g12(n: int = 2) -> Symbol:
    return Symbol(lambda g: g[:, 0, 1].real + 0j, "Re g12", n, None, None, 1, True)


def im_g12(n: int = 2) -> Symbol:
    return Symbol(lambda g: g[:, 0, 1].imag + 0j, "Im g12", n, None, None, 1, True)


def re_g11(n: int = 2) -> Symbol:
    return Symbol(lambda g: g[:, 0, 0].real + 0j, "Re g11", n, None, None, 1, True)


def abs2_g11_plus_g12(n: int = 2) -> Symbol:
    return Symbol(lambda g: np.abs(g[:, 0, 0] + g[:, 0, 1]) ** 2 + 0j, "|g11+g12|^2", n, None, None, 2, True)


def re_g11_sq(n: int = 2) -> Symbol:
    return Symbol(lambda g: g[:, 0, 0].real ** 2 + 0j, "(Re g11)^2", n, None, None, 2, True)


def re_g12_g21(n: int = 2) -> Symbol:
    return Symbol(lambda g: (g[:, 0, 1] * g[:, 1, 0]).real + 0j, "Re(g12 g21)", n, None, None, 2, True)


def im_g12_sq(n: int = 2) -> Symbol:
    return Symbol(lambda g: g[:, 0, 1].imag ** 2 + 0j, "(Im g12)^2", n, None, None, 2, True)


def hopf_x(n: int = 2) -> Symbol:
    """``2 Re(g11 conj(g21))``: first coordinate of the image of ``g e_1`` on the sphere."""
    return Symbol(lambda g: 2 * (g[:, 0, 0] * np.conj(g[:, 1, 0])).real + 0j, "hopf_x", n,
                  (1, n - 1), None, 2, True)


def hopf_y(n: int = 2) -> Symbol:
    return Symbol(lambda g: 2 * (g[:, 0, 0] * np.conj(g[:, 1, 0])).imag + 0j, "hopf_y", n,
                  (1, n - 1), None, 2, True)


def hopf_z(n: int = 2) -> Symbol:
    return Symbol(lambda g: np.abs(g[:, 0, 0]) ** 2 - np.abs(g[:, 1, 0]) ** 2 + 0j, "hopf_z", n,
                  (1, n - 1), SubgroupSpec("torus", n), 2, True)


def sigmoid_abs2_g11(n: int = 2, center: float = 0.5, steepness: float = 10.0) -> Symbol:
    def f(g):
        return 1.0 / (1.0 + np.exp(-steepness * (np.abs(g[:, 0, 0]) ** 2 - center))) + 0j
    return Symbol(f, f"sigmoid({steepness}*(|g11|^2-{center}))", n, (1, n - 1),
                  SubgroupSpec.levi((1, n - 1)), None, True)


def minor_power_symbol(mu: Sequence[int]) -> Symbol:
    """``prod_i |det g[:i,:i]|^{2 mu_i}``, right-invariant under the Levi group of ``supp mu``."""
    from .conical import levi_blocks, conical_eval
    from .weights import Weight

    w = Weight(tuple(mu))
    blocks = tuple(levi_blocks(w))
    deg = 2 * sum((i + 1) * c for i, c in enumerate(w.coeffs))
    return Symbol(lambda g: np.abs(conical_eval(w, g)) ** 2 + 0j, f"|Delta^{w.label()}|^2", w.n,
                  blocks, SubgroupSpec.levi(blocks), deg, True)


BUILTIN_SYMBOLS: dict[str, Callable[..., Symbol]] = {
    "const": const_symbol,
    "abs2_g11": abs2_g11,
    "abs4_g11": abs4_g11,
    "re_g12": re_g12,
    "im_g12": im_g12,
    "re_g11": re_g11,
    "abs2_g11_plus_g12": abs2_g11_plus_g12,
    "re_g11_sq": re_g11_sq,
    "re_g12_g21": re_g12_g21,
    "im_g12_sq": im_g12_sq,
    "hopf_x": hopf_x,
    "hopf_y": hopf_y,
    "hopf_z": hopf_z,
    "sigmoid_abs2_g11": sigmoid_abs2_g11,
    "minor_power": minor_power_symbol,
}


def matrix_coefficient_symbol(aux_rep: HighestWeightRep, u, v0, id: str | None = None) -> Symbol:
    """``g -> <aux(g) v0, u> = u^* aux(g) v0``."""
    u = np.asarray(u, dtype=complex)
    v0 = np.asarray(v0, dtype=complex)

    def f(g):
        return aux_rep(g) @ v0 @ u.conj()

    return Symbol(f, id or f"pi{aux_rep.weight.label()}_(u,v0)", aux_rep.n, None, None,
                  rep_degree(aux_rep), False, check=False)


def zero_weight_vector(rep: HighestWeightRep) -> np.ndarray:
    """A unit vector of weight zero (SU(n) sense: all epsilon-coordinates equal)."""
    for wt, vecs in weight_vectors(rep).items():
        if len(set(wt)) == 1:
            return vecs[:, 0]
    raise DomainError(f"{rep.weight.label()} has no zero weight")


# --------------------------------------------------------------------------
# operators

@dataclass(frozen=True, eq=False)
class ToeplitzOperator:
    """``T_f`` in the orthonormal basis of a built representation.

    ``sigma`` is the Monte Carlo standard error of the matrix in Frobenius
    norm (0 for exact rules); ``exact`` records whether the rule integrates
    the assembly integrand exactly.
    """

    rep: HighestWeightRep
    matrix: np.ndarray
    symbol_id: str
    rule: str
    sigma: float = 0.0
    exact: bool = True

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def op_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def trace_norm(self) -> float:
        return float(np.linalg.svd(self.matrix, compute_uv=False).sum())

    def adjoint(self) -> np.ndarray:
        return self.matrix.conj().T

    def __matmul__(self, other):
        return self.matrix @ (other.matrix if isinstance(other, ToeplitzOperator) else np.asarray(other))


def check_adequacy(rep: HighestWeightRep, f: Symbol, rule: QuadratureRule) -> bool:
    """Validate the rule for assembling ``T_f`` on ``rep``; return whether the result is exact."""
    if f.n != rep.n:
        raise DomainError(f"symbol {f.id} lives on U({f.n}), representation on U({rep.n})")
    if rule.n != rep.n:
        raise PreconditionError(f"rule lives on U({rule.n}), representation on U({rep.n})")
    if rule.meta.get("torus"):
        raise PreconditionError("a torus rule does not integrate over the whole group")
    if not rule.exact:
        return False
    if f.degree is None:
        return False
    need = 2 * rep_degree(rep) + f.degree
    if rule.max_degree < need:
        raise PreconditionError(f"rule degree {rule.max_degree} < required {need} "
                                f"for {rep.weight.label()} and symbol {f.id}")
    return True


def assemble_toeplitz(rep: HighestWeightRep, f: Symbol, rule: QuadratureRule) -> ToeplitzOperator:
    """``d sum_i w_i f(y_i) (R(y_i) v)(R(y_i) v)^*`` over the rule's nodes."""
    exact = check_adequacy(rep, f, rule)
    d = rep.dim
    M = np.zeros((d, d), dtype=complex)
    second = 0.0
    for s in range(0, rule.size, CHUNK):
        y = rule.nodes[s:s + CHUNK]
        fv = np.asarray(f.func(y), dtype=complex)
        if not np.all(np.isfinite(fv)):
            raise FloatingPointError(f"symbol {f.id} is not finite at some node")
        c = rep.coherent(y)
        w = rule.weights[s:s + CHUNK]
        M += c.T @ ((w * fv)[:, None] * c.conj())
        second += float(np.sum(w * np.abs(fv) ** 2))
    M *= d
    sigma = 0.0
    if not rule.exact:
        # ||d f c c^*||_F = d |f| since |c| = 1
        var = max(d * d * second - float(np.linalg.norm(M) ** 2), 0.0)
        sigma = float(np.sqrt(var / max(rule.size - 1, 1)))
    return ToeplitzOperator(rep, M, f.id, rule.describe(), sigma, exact)


def _group_average_nodes(spec: SubgroupSpec, degree: int | None, rule, count: int, seed):
    if rule is not None:
        if isinstance(rule, QuadratureRule):
            return rule.nodes, rule.weights
        nodes = np.asarray(rule(count))
        return nodes, np.full(len(nodes), 1.0 / len(nodes))
    if spec.kind == "torus":
        tr = torus_rule(spec.n, max(degree if degree is not None else 64, 1), special=spec.special_det)
        return tr.nodes, tr.weights
    nodes = subgroup_sample(spec, seed, count)
    return nodes, np.full(count, 1.0 / count)


def average_symbol_L(f: Symbol, blocks: Sequence[int], rule=None, *, special: bool = False,
                     count: int = 4096, seed=0) -> Symbol:
    """``f^#(x) = int_L f(x l) dl``.

    For ``L = T`` the default is a uniform torus grid that is exact for
    polynomial symbols of the declared degree; otherwise ``count`` Haar
    samples of ``L`` (fixed once, so the averaged symbol is deterministic).
    ``special`` restricts ``L`` to determinant one, as needed for SU(n).
    """
    spec = SubgroupSpec.levi(blocks, special=special)
    nodes, weights = _group_average_nodes(spec, f.degree, rule, count, seed)
    func = f.func

    def avg(g):
        out = np.zeros(len(g), dtype=complex)
        for l, w in zip(nodes, weights):
            out += w * np.asarray(func(g @ l))
        return out

    return Symbol(avg, f"avgL{list(blocks)}({f.id})", f.n, tuple(blocks), f.left, f.degree, f.real,
                  check=not special)


def average_symbol_H(f: Symbol, H: SubgroupSpec, rule=None, *, count: int = 4096, seed=0) -> Symbol:
    """``f^H(x) = int_H f(h x) dh``."""
    nodes, weights = _group_average_nodes(H, f.degree, rule, count, seed)
    func = f.func

    def avg(g):
        out = np.zeros(len(g), dtype=complex)
        for h, w in zip(nodes, weights):
            out += w * np.asarray(func(h @ g))
        return out

    return Symbol(avg, f"avgH[{H.kind}]({f.id})", f.n, f.right_blocks, H, f.degree, f.real, check=False)


def average_operator_H(rep: HighestWeightRep, T: np.ndarray, H: SubgroupSpec, rule=None, *,
                       degree: int | None = None, count: int = 4096, seed=0) -> np.ndarray:
    """``int_H sigma(h) T sigma(h)^{-1} dh``."""
    nodes, weights = _group_average_nodes(H, degree if degree is not None else 2 * rep_degree(rep),
                                          rule, count, seed)
    T = T.matrix if isinstance(T, ToeplitzOperator) else np.asarray(T)
    R = rep(nodes)
    return np.einsum("m,mij,jk,mlk->il", weights, R, T, R.conj())


def equivariance_residual(rep: HighestWeightRep, f: Symbol, x, rule: QuadratureRule,
                          return_sigma: bool = False):
    """``|| T_{L(x) f} - R(x) T_f R(x)^{-1} ||_op``."""
    x = np.asarray(x)
    A = assemble_toeplitz(rep, f.left_translate(x), rule)
    B = assemble_toeplitz(rep, f, rule)
    R = rep(x)
    res = float(np.linalg.norm(A.matrix - R @ B.matrix @ R.conj().T, 2))
    if return_sigma:
        return res, float(np.hypot(A.sigma, B.sigma))
    return res


def commutator_norm(A, B) -> float:
    a = A.matrix if isinstance(A, ToeplitzOperator) else np.asarray(A)
    b = B.matrix if isinstance(B, ToeplitzOperator) else np.asarray(B)
    if a.shape != b.shape:
        raise DomainError(f"shape mismatch {a.shape} vs {b.shape}")
    if isinstance(A, ToeplitzOperator) and isinstance(B, ToeplitzOperator) \
            and A.rep.weight != B.rep.weight:
        raise DomainError("operators act on different representations")
    return float(np.linalg.norm(a @ b - b @ a, 2))


def quantization_rank(rep: HighestWeightRep, symbols: Sequence[Symbol], rule: QuadratureRule,
                      tol: float = 1e-8) -> int:
    """Rank of ``span{T_f}`` inside the ``d^2``-dimensional operator space."""
    for f in symbols:
        if f.right_blocks is None:
            raise PreconditionError(f"symbol {f.id} carries no right-L invariance")
    if not symbols:
        return 0
    V = np.stack([assemble_toeplitz(rep, f, rule).matrix.ravel() for f in symbols])
    s = np.linalg.svd(V, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))
