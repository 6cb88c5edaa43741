"""Unitary group elements, Haar sampling and subgroup samplers.

Samplers return stacked arrays of shape ``(count, n, n)``; a single element
can be wrapped in :class:`UnitaryElement` when certification is wanted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

UNITARY_TOL = 1e-10


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def unitarity_residual(g: np.ndarray) -> np.ndarray:
    """``max |g^* g - I|`` per matrix (works on stacks)."""
    g = np.asarray(g)
    n = g.shape[-1]
    gram = np.conj(np.swapaxes(g, -1, -2)) @ g
    return np.abs(gram - np.eye(n)).max(axis=(-1, -2))


@dataclass(frozen=True, eq=False)
class UnitaryElement:
    """An ``n x n`` unitary matrix, certified at construction."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        res = float(unitarity_residual(m))
        if res > UNITARY_TOL:
            raise DomainError(f"matrix is not unitary (residual {res:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other):
        return UnitaryElement(self.entries @ np.asarray(other))

    def inv(self) -> "UnitaryElement":
        return UnitaryElement(self.entries.conj().T)


def dagger(g: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(g), -1, -2))


def haar_sample(n: int, seed=None, count: int = 1, special: bool = False) -> np.ndarray:
    """Haar-distributed unitaries as an array ``(count, n, n)``.

    QR of a complex Ginibre matrix, with the phases of ``diag(R)`` pushed into
    ``Q``.  Without that phase fix the result is not Haar distributed.
    For ``special=True`` each sample is divided by the principal n-th root of
    its determinant.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = as_rng(seed)
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    if special:
        q = q * np.exp(-1j * np.angle(np.linalg.det(q)) / n)[:, None, None]
    return q


@dataclass(frozen=True)
class SubgroupSpec:
    """Closed subgroup of U(n).

    kind: ``"full"``, ``"special"`` (SU(n)), ``"torus"`` (diagonal), or
    ``"block"`` (block-diagonal with the given ``blocks``).  ``special_det``
    intersects torus / block groups with SU(n).
    """

    kind: str
    n: int
    blocks: tuple[int, ...] | None = None
    special_det: bool = False

    def __post_init__(self):
        if self.kind not in ("full", "special", "torus", "block"):
            raise DomainError(f"unknown subgroup kind {self.kind!r}")
        if self.kind == "block":
            if not self.blocks or any(b < 1 for b in self.blocks) or sum(self.blocks) != self.n:
                raise DomainError(f"block sizes {self.blocks} do not partition n={self.n}")
            object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))

    @classmethod
    def levi(cls, blocks: Sequence[int], special: bool = False) -> "SubgroupSpec":
        blocks = tuple(blocks)
        if all(b == 1 for b in blocks):
            return cls("torus", len(blocks), special_det=special)
        return cls("block", sum(blocks), blocks, special_det=special)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        if self.kind == "torus":
            return (1,) * self.n
        if self.kind == "block":
            return self.blocks
        return (self.n,)


def subgroup_sample(spec: SubgroupSpec, seed=None, count: int = 1) -> np.ndarray:
    """Haar samples of the subgroup, embedded in U(n)."""
    rng = as_rng(seed)
    n = spec.n
    if spec.kind in ("full", "special"):
        return haar_sample(n, rng, count, special=spec.kind == "special")
    out = np.zeros((count, n, n), dtype=complex)
    start = 0
    for b in spec.block_sizes:
        out[:, start:start + b, start:start + b] = haar_sample(b, rng, count)
        start += b
    if spec.special_det:
        # principal root on the last block, as for SU(n)
        det = np.linalg.det(out)
        b = spec.block_sizes[-1]
        out[:, n - b:, n - b:] *= np.exp(-1j * np.angle(det) / b)[:, None, None]
    return out


def su2_from_euler(phi: float, theta: float, psi: float) -> UnitaryElement:
    """ZYZ Euler angles: ``Rz(phi) Ry(theta) Rz(psi)`` in SU(2)."""
    return UnitaryElement(su2_euler_array(phi, theta, psi))


def su2_euler_array(phi, theta, psi) -> np.ndarray:
    """Vectorized ZYZ Euler parametrization, shape ``(..., 2, 2)``."""
    phi, theta, psi = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (phi, theta, psi)))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    g = np.empty(phi.shape + (2, 2), dtype=complex)
    g[..., 0, 0] = np.exp(-0.5j * (phi + psi)) * c
    g[..., 0, 1] = -np.exp(-0.5j * (phi - psi)) * s
    g[..., 1, 0] = np.exp(0.5j * (phi - psi)) * s
    g[..., 1, 1] = np.exp(0.5j * (phi + psi)) * c
    return g


def su2_from_ab(a, b) -> np.ndarray:
    """``[[a, -conj(b)], [b, conj(a)]]`` for ``|a|^2 + |b|^2 = 1``."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    g = np.empty(a.shape + (2, 2), dtype=complex)
    g[..., 0, 0] = a
    g[..., 0, 1] = -np.conj(b)
    g[..., 1, 0] = b
    g[..., 1, 1] = np.conj(a)
    return g


def torus_element(angles) -> np.ndarray:
    """Diagonal unitary ``diag(exp(i * angles))``; stacks over leading axes."""
    angles = np.asarray(angles, dtype=float)
    out = np.zeros(angles.shape + (angles.shape[-1],), dtype=complex)
    idx = np.arange(angles.shape[-1])
    out[..., idx, idx] = np.exp(1j * angles)
    return out


def coset_angle(g: np.ndarray, blocks: Sequence[int]) -> np.ndarray:
    """Distance of ``gL`` from the base point ``eL`` in ``U(n)/L``.

    Twice the largest principal angle between ``g(span(e_1..e_i))`` and
    ``span(e_1..e_i)`` over the block boundaries ``i``.  For SU(2)/T this is
    the polar Euler angle, i.e. the round-sphere distance.
    """
    g = np.asarray(g)
    worst = np.zeros(g.shape[:-2])
    i = 0
    for b in list(blocks)[:-1]:
        i += b
        s = np.linalg.svd(g[..., :i, :i], compute_uv=False)
        worst = np.maximum(worst, np.arccos(np.clip(s.min(axis=-1), 0.0, 1.0)))
    return 2.0 * worst
