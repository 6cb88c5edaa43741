"""Concrete irreducible representations of U(n) and SU(n).

Fundamental representations are exterior powers of the defining
representation.  The irreducible representation with highest weight
``lambda = sum_i lambda_i omega_i + c det`` is realized inside the ambient
space ``(x)_i Sym^{lambda_i}(Lambda^i C^n)`` as the cyclic span of the
highest tensor ``(x)_i (e_1 ^ ... ^ e_i)^{lambda_i}``; the determinant twist
is applied as a scalar factor.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import ConstructionError, DomainError, ResourceError
from .group import as_rng, haar_sample, unitarity_residual
from .weights import Weight, weyl_dimension

DEFAULT_DIM_CAP = 512
RANK_TOL = 1e-8
CERTIFY_TOL = 1e-9


# --------------------------------------------------------------------------
# exterior powers

@lru_cache(maxsize=None)
def _combos(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), k))


def exterior_power(g: np.ndarray, k: int) -> np.ndarray:
    """``Lambda^k g`` in the basis of sorted index sets, for a stack of matrices."""
    g = np.asarray(g)
    n = g.shape[-1]
    combos = np.array(_combos(n, k), dtype=int).reshape(-1, k)
    if k == 0:
        return np.ones(g.shape[:-2] + (1, 1), dtype=complex)
    rows = combos[:, None, :, None]
    cols = combos[None, :, None, :]
    sub = g[..., rows, cols]  # (..., C, C, k, k)
    return np.linalg.det(sub)


def exterior_first_column(g: np.ndarray, k: int) -> np.ndarray:
    """``Lambda^k g (e_1 ^ ... ^ e_k)``: the k x k minors in the first k columns."""
    g = np.asarray(g)
    n = g.shape[-1]
    combos = np.array(_combos(n, k), dtype=int).reshape(-1, k)
    sub = g[..., combos[:, :, None], np.arange(k)[None, None, :]]
    return np.linalg.det(sub)


@dataclass(frozen=True)
class FundamentalRep:
    """``Lambda^k`` of the defining representation of U(n)."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def dim(self) -> int:
        return math.comb(self.n, self.k)

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return _combos(self.n, self.k)

    def __call__(self, g) -> np.ndarray:
        return exterior_power(np.asarray(g), self.k)


def fundamental_rep(n: int, k: int) -> FundamentalRep:
    return FundamentalRep(n, k)


# --------------------------------------------------------------------------
# symmetric powers

class SymTables:
    """Monomial bookkeeping for ``Sym^k(C^m)`` with an orthonormal monomial basis.

    Monomials are ordered lexicographically from ``x_0^k`` downwards, so the
    highest-weight monomial has index 0.
    """

    def __init__(self, m: int, k: int):
        self.m, self.k = m, k
        self.levels = [self._monomials(d) for d in range(k + 1)]
        self.index = [{b: i for i, b in enumerate(lv)} for lv in self.levels]
        self.exps = np.array(self.levels[k], dtype=int).reshape(-1, m)
        lf = np.array([sum(math.lgamma(e + 1) for e in b) for b in self.levels[k]])
        self.log_fact = lf  # log(beta!)
        self.log_sqrt_multinomial = 0.5 * (math.lgamma(k + 1) - lf)
        # recursion tables: degree d columns built from degree d-1 parents
        self.steps = []
        for d in range(1, k + 1):
            groups = []
            for j in range(m):
                cols, parents = [], []
                for c, g in enumerate(self.levels[d]):
                    first = next(i for i, e in enumerate(g) if e > 0)
                    if first == j:
                        cols.append(c)
                        p = list(g)
                        p[j] -= 1
                        parents.append(self.index[d - 1][tuple(p)])
                if cols:
                    gj = np.array([self.levels[d][c][j] for c in cols], dtype=float)
                    groups.append((j, np.array(cols), np.array(parents), 1.0 / np.sqrt(gj)))
            shifts = []
            for i in range(m):
                tgt, src, fac = [], [], []
                for c, b in enumerate(self.levels[d]):
                    if b[i] > 0:
                        p = list(b)
                        p[i] -= 1
                        tgt.append(c)
                        src.append(self.index[d - 1][tuple(p)])
                        fac.append(math.sqrt(b[i]))
                shifts.append((i, np.array(tgt, dtype=int), np.array(src, dtype=int),
                               np.array(fac)))
            self.steps.append((groups, shifts))

    def _monomials(self, d: int) -> list[tuple[int, ...]]:
        out = []

        def rec(prefix, left, slots):
            if slots == 1:
                out.append(prefix + (left,))
                return
            for e in range(left, -1, -1):
                rec(prefix + (e,), left - e, slots - 1)

        rec((), d, self.m)
        return out

    @property
    def dim(self) -> int:
        return len(self.levels[self.k])


@lru_cache(maxsize=64)
def sym_tables(m: int, k: int) -> SymTables:
    return SymTables(m, k)


# above this degree the product recursion loses digits (errors grow roughly
# geometrically with k); unitary inputs then go through the Lie algebra
SYM_RECURSION_MAX = 32


@lru_cache(maxsize=64)
def _sym_generators(m: int, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sparse data of the derived action of ``E_ij`` on ``Sym^k``: (i, j, entries)."""
    tab = sym_tables(m, k)
    idx = tab.index[k]
    rows, cols, ii, jj, vals = [], [], [], [], []
    for c, g in enumerate(tab.levels[k]):
        for j in range(m):
            if g[j] == 0:
                continue
            for i in range(m):
                b = list(g)
                b[j] -= 1
                b[i] += 1
                val = math.sqrt(g[j] * b[i]) if i != j else g[j]
                rows.append(idx[tuple(b)])
                cols.append(c)
                ii.append(i)
                jj.append(j)
                vals.append(val)
    return (np.array(rows), np.array(cols), np.array(ii), np.array(jj), np.array(vals))


def _sym_power_unitary(A: np.ndarray, k: int) -> np.ndarray:
    """``Sym^k(A)`` for unitary ``A`` as ``exp`` of the derived action of ``log A``."""
    N, m = A.shape[0], A.shape[-1]
    T, Z = zip(*(scipy.linalg.schur(a, output="complex") for a in A))
    theta = np.angle(np.diagonal(np.array(T), axis1=1, axis2=2))
    Z = np.array(Z)
    H = (Z * theta[:, None, :]) @ np.conj(np.swapaxes(Z, 1, 2))  # A = exp(iH)
    H = (H + np.conj(np.swapaxes(H, 1, 2))) / 2
    rows, cols, ii, jj, vals = _sym_generators(m, k)
    dim = sym_tables(m, k).dim
    dH = np.zeros((N, dim, dim), dtype=complex)
    np.add.at(dH, (slice(None), rows, cols), H[:, ii, jj] * vals)
    mu, V = np.linalg.eigh(dH)
    return (V * np.exp(1j * mu)[:, None, :]) @ np.conj(np.swapaxes(V, 1, 2))


def sym_power(A: np.ndarray, k: int) -> np.ndarray:
    """``Sym^k(A)`` for a stack ``(N, m, m)`` in the orthonormal monomial basis."""
    A = np.asarray(A, dtype=complex)
    N, m = A.shape[0], A.shape[-1]
    tab = sym_tables(m, k)
    if k > SYM_RECURSION_MAX and m > 1 and np.all(unitarity_residual(A) < 1e-10):
        return _sym_power_unitary(A, k)
    # Degree-by-degree recursion kept in the orthonormal basis.  Multiplying
    # by the linear form (A x)_j sends beta - e_i to beta with weight
    # A_ij sqrt(beta_i / gamma_j); every entry stays O(1), no factorials.
    P = np.ones((N, 1, 1), dtype=complex)
    for d, (groups, shifts) in enumerate(tab.steps, start=1):
        size = len(tab.levels[d])
        Q = np.zeros((N, size, size), dtype=complex)
        for j, cols, parents, inv_g in groups:
            c = P[:, :, parents] * inv_g
            acc = np.zeros((N, size, len(cols)), dtype=complex)
            for i, tgt, src, fac in shifts:
                acc[:, tgt, :] += A[:, i, j][:, None, None] * (fac[:, None] * c[:, src, :])
            Q[:, :, cols] = acc
        P = Q
    return P


def sym_coherent(w: np.ndarray, k: int) -> np.ndarray:
    """``w^{(x)k}`` in the orthonormal monomial basis: ``sqrt(k!/beta!) w^beta``."""
    w = np.asarray(w, dtype=complex)
    tab = sym_tables(w.shape[-1], k)
    coef = np.exp(tab.log_sqrt_multinomial)
    powers = np.ones(w.shape[:-1] + (tab.dim,), dtype=complex)
    for i in range(w.shape[-1]):
        powers = powers * w[..., i:i + 1] ** tab.exps[:, i]
    return powers * coef


def _batched_kron(mats: list[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        N = out.shape[0]
        out = np.einsum("nij,nkl->nikjl", out, m).reshape(N, out.shape[1] * m.shape[1], -1)
    return out


def _batched_kron_vec(vecs: list[np.ndarray]) -> np.ndarray:
    out = vecs[0]
    for v in vecs[1:]:
        out = (out[..., :, None] * v[..., None, :]).reshape(out.shape[:-1] + (-1,))
    return out


# --------------------------------------------------------------------------
# highest-weight representations

@dataclass(frozen=True, eq=False)
class HighestWeightRep:
    """Orthonormal realization of the irreducible representation ``sigma^lambda``.

    ``basis`` has orthonormal columns in the ambient space; column 0 is the
    highest-weight vector, so ``v_lambda`` has coordinates ``e_0``.
    """

    weight: Weight
    n: int
    dim: int
    factors: tuple[tuple[int, int], ...]
    basis: np.ndarray
    ambient_weights: np.ndarray = field(repr=False)
    certification: dict = field(default_factory=dict, repr=False)

    @property
    def special(self) -> bool:
        return self.certification.get("special", False)

    @property
    def highest_weight_vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def _twist(self, g: np.ndarray) -> np.ndarray | float:
        c = self.weight.central
        if c == 0:
            return 1.0
        return np.linalg.det(g) ** c

    def ambient(self, g: np.ndarray) -> np.ndarray:
        """Ambient action (no determinant twist) on a stack ``(N, n, n)``."""
        if not self.factors:
            return np.ones((g.shape[0], 1, 1), dtype=complex)
        mats = [sym_power(exterior_power(g, i), lam) for i, lam in self.factors]
        return _batched_kron(mats)

    def ambient_coherent(self, g: np.ndarray) -> np.ndarray:
        """Ambient image of the highest tensor, shape ``(N, ambient_dim)``."""
        if not self.factors:
            return np.ones((g.shape[0], 1), dtype=complex)
        vecs = [sym_coherent(exterior_first_column(g, i), lam) for i, lam in self.factors]
        return _batched_kron_vec(vecs)

    def __call__(self, g) -> np.ndarray:
        """Representation matrices; accepts one matrix or a stack."""
        g = np.asarray(g)
        single = g.ndim == 2
        gs = g[None] if single else g
        out = []
        B = self.basis
        step = max(1, (1 << 22) // (self.ambient_dim ** 2))
        for s in range(0, len(gs), step):
            chunk = gs[s:s + step]
            amb = self.ambient(chunk)
            R = B.conj().T @ amb @ B
            tw = self._twist(chunk)
            out.append(R * (tw[:, None, None] if np.ndim(tw) else tw))
        R = np.concatenate(out)
        return R[0] if single else R

    def coherent(self, g) -> np.ndarray:
        """``sigma(g) v_lambda`` in rep coordinates; shape ``(N, dim)`` (or ``(dim,)``)."""
        g = np.asarray(g)
        single = g.ndim == 2
        gs = g[None] if single else g
        v = self.ambient_coherent(gs) @ self.basis.conj()
        tw = self._twist(gs)
        v = v * (tw[:, None] if np.ndim(tw) else tw)
        return v[0] if single else v

    def conical(self, g) -> np.ndarray:
        """``<v_lambda, sigma(g) v_lambda>`` computed through the representation."""
        v = self.coherent(g)
        return v[..., 0]


def _ambient_weights(n: int, factors) -> np.ndarray:
    per = []
    for i, lam in factors:
        combos = _combos(n, i)
        ew = np.zeros((len(combos), n), dtype=int)
        for r, c in enumerate(combos):
            ew[r, list(c)] = 1
        tab = sym_tables(len(combos), lam)
        per.append(tab.exps @ ew)
    if not per:
        return np.zeros((1, n), dtype=int)
    out = per[0]
    for w in per[1:]:
        out = (out[:, None, :] + w[None, :, :]).reshape(-1, n)
    return out


def build_irrep(lam, n: int | None = None, *, special: bool = False, seed=0,
                dim_cap: int = DEFAULT_DIM_CAP, certify_samples: int = 20) -> HighestWeightRep:
    """Build ``sigma^lambda`` as the cyclic span of the highest tensor.

    Haar translates of the highest tensor are added in batches and
    orthonormalized by column-pivoted QR (rank tolerance ``1e-8`` times the
    largest singular value) until the rank stops growing.  The span is then
    certified: its dimension must equal the Weyl dimension and it must be
    invariant under ``certify_samples`` fresh group elements.
    """
    if not isinstance(lam, Weight):
        lam = Weight(tuple(lam))
    n = n or lam.n
    if n != lam.n:
        raise DomainError(f"weight of rank {lam.rank} does not match n={n}")
    if special and lam.central != 0:
        raise DomainError("SU(n) weights carry no central charge")
    d_expected = weyl_dimension(lam)
    if d_expected > dim_cap:
        raise ResourceError(f"dimension {d_expected} exceeds cap {dim_cap}")

    factors = tuple((i + 1, c) for i, c in enumerate(lam.coeffs) if c > 0)
    amb_w = _ambient_weights(n, factors)
    A = len(amb_w)
    rng = as_rng(seed)
    v = np.zeros(A, dtype=complex)
    v[0] = 1.0

    shell = HighestWeightRep(lam, n, 1, factors, v[:, None], amb_w)
    batch = max(d_expected, 8)
    cols = np.zeros((A, 0), dtype=complex)
    rank, Q = 0, np.zeros((A, 0), dtype=complex)
    for _ in range(64):
        gs = haar_sample(n, rng, batch)
        new = shell.ambient_coherent(gs).T
        new = new - np.outer(v, v.conj() @ new)
        cols = np.concatenate([cols, new], axis=1)
        full_scale = np.linalg.norm(np.concatenate([v[:, None], cols], axis=1), 2)
        q, r, _ = scipy.linalg.qr(cols, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r))
        new_rank = int(np.sum(diag > RANK_TOL * full_scale))
        if new_rank == rank and rank > 0 or new_rank == 0 and A == 1:
            break
        rank, Q = new_rank, q[:, :new_rank]
        if rank + 1 >= A:
            break
    basis = np.concatenate([v[:, None], Q], axis=1)
    # re-orthonormalize against v to machine precision
    basis[:, 1:] -= np.outer(v, v.conj() @ basis[:, 1:])
    basis[:, 1:], _ = np.linalg.qr(basis[:, 1:]) if basis.shape[1] > 1 else (basis[:, 1:], None)
    d = basis.shape[1]

    rep = HighestWeightRep(lam, n, d, factors, basis, amb_w, {"special": special})
    hs = haar_sample(n, rng, certify_samples, special=special)
    amb = rep.ambient(hs) @ basis
    resid = float(np.abs(amb - basis @ (basis.conj().T @ amb)).max()) if A > 1 else 0.0
    if d != d_expected or resid > CERTIFY_TOL:
        raise ConstructionError(
            f"cyclic span for {lam.label()} has dim {d} (expected {d_expected}), "
            f"invariance residual {resid:.3e}")
    rep.certification.update({"invariance_residual": resid, "rank_tol": RANK_TOL,
                              "generators": int(cols.shape[1])})
    return rep


def character(rep: HighestWeightRep, g) -> np.ndarray:
    """Trace of ``sigma(g)``; vectorized over stacks, never holding more than a chunk of matrices."""
    g = np.asarray(g)
    single = g.ndim == 2
    gs = g[None] if single else g
    P = rep.basis @ rep.basis.conj().T  # projector onto H_lambda in the ambient space
    step = max(1, (1 << 22) // (rep.ambient_dim ** 2))
    out = np.empty(len(gs), dtype=complex)
    for s in range(0, len(gs), step):
        chunk = gs[s:s + step]
        tr = np.einsum("nab,ba->n", rep.ambient(chunk), P)
        tw = rep._twist(chunk)
        out[s:s + step] = tr * tw
    return out[0] if single else out


def weight_operators(rep: HighestWeightRep) -> np.ndarray:
    """Images ``H_j`` of the torus generators ``E_jj``, shape ``(n, d, d)``."""
    B = rep.basis
    W = rep.ambient_weights.astype(float) + rep.weight.central
    return np.einsum("aj,ai,ak->jik", W, B.conj(), B)


def weight_vectors(rep: HighestWeightRep, tol: float = 1e-8) -> dict[tuple[int, ...], np.ndarray]:
    """Orthonormal weight vectors grouped by epsilon-weight (columns of each array)."""
    H = weight_operators(rep)
    n = H.shape[0]
    for j in range(n):
        for l in range(j + 1, n):
            c = np.abs(H[j] @ H[l] - H[l] @ H[j]).max()
            if c > tol:
                raise ConstructionError(f"torus images fail to commute (residual {c:.2e})")
    coeffs = np.sqrt(np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37][:n], dtype=float))
    if n > len(coeffs):
        coeffs = np.sqrt(np.arange(2, n + 2) + 0.5)
    Hc = np.tensordot(coeffs, H, axes=1)
    Hc = (Hc + Hc.conj().T) / 2
    _, vecs = np.linalg.eigh(Hc)
    groups: dict[tuple[int, ...], list[np.ndarray]] = {}
    for k in range(vecs.shape[1]):
        u = vecs[:, k]
        wt = np.real(np.einsum("i,jik,k->j", u.conj(), H, u))
        key = tuple(int(round(x)) for x in wt)
        if np.abs(wt - np.array(key)).max() > 1e-6:
            raise ConstructionError(f"non-integral weight {wt}")
        groups.setdefault(key, []).append(u)
    return {k: np.stack(v, axis=1) for k, v in groups.items()}


def weight_multiplicities(rep: HighestWeightRep) -> Counter:
    """Epsilon-weight -> multiplicity, by simultaneous diagonalization of the torus images."""
    return Counter({k: v.shape[1] for k, v in weight_vectors(rep).items()})


def to_dynkin(eps) -> tuple[int, ...]:
    """Pairings ``<mu, alpha_i^vee>`` of an epsilon-weight with the simple coroots."""
    return tuple(int(eps[i] - eps[i + 1]) for i in range(len(eps) - 1))
