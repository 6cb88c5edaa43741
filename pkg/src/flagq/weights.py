"""Type-A root and weight combinatorics.

Weights of U(n) are stored as fundamental-weight coefficients plus a central
charge; conversion to the epsilon basis of the diagonal torus is exact
(integers / ``Fraction``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class RootDataA:
    """Root data of U(n) / SU(n) in the epsilon basis.

    The semisimple rank is ``r = n - 1``. Simple roots are
    ``alpha_i = e_i - e_{i+1}`` and fundamental weights
    ``omega_i = e_1 + ... + e_i`` (for SU(n) these are defined modulo the
    all-ones vector, which pairs trivially with every root).
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")

    @property
    def rank(self) -> int:
        return self.n - 1

    @cached_property
    def simple_roots(self) -> np.ndarray:
        a = np.zeros((self.rank, self.n), dtype=int)
        for i in range(self.rank):
            a[i, i], a[i, i + 1] = 1, -1
        return a

    @cached_property
    def positive_roots(self) -> np.ndarray:
        roots = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                v = np.zeros(self.n, dtype=int)
                v[i], v[j] = 1, -1
                roots.append(v)
        return np.array(roots, dtype=int).reshape(-1, self.n)

    @cached_property
    def fundamental_weights(self) -> np.ndarray:
        w = np.zeros((self.rank, self.n), dtype=int)
        for i in range(self.rank):
            w[i, : i + 1] = 1
        return w

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        # half-sum of positive roots: ((n-1)/2, (n-3)/2, ..., -(n-1)/2)
        return tuple(Fraction(self.n - 1 - 2 * i, 2) for i in range(self.n))

    def coroot_pairing(self, weight_eps: Sequence, root: Sequence) -> Fraction:
        """``<mu, alpha^vee>`` for the trace form (all roots have length^2 = 2)."""
        return sum((Fraction(a) * int(b) for a, b in zip(weight_eps, root)), Fraction(0))


@dataclass(frozen=True)
class Weight:
    """Dominant integral weight ``sum_i coeffs[i] * omega_{i+1} + central * det``."""

    coeffs: tuple[int, ...]
    central: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "central", int(self.central))
        if any(c < 0 for c in self.coeffs):
            raise DomainError(f"weight {self.coeffs} is not dominant")

    @property
    def n(self) -> int:
        return len(self.coeffs) + 1

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def epsilon(self) -> tuple[int, ...]:
        """Coordinates in the epsilon basis of the diagonal torus."""
        r = self.rank
        return tuple(sum(self.coeffs[i:]) + self.central for i in range(r)) + (self.central,)

    @classmethod
    def from_epsilon(cls, eps: Sequence[int]) -> "Weight":
        eps = [int(x) for x in eps]
        return cls(tuple(eps[i] - eps[i + 1] for i in range(len(eps) - 1)), eps[-1])

    def __add__(self, other: "Weight") -> "Weight":
        if self.rank != other.rank:
            raise DomainError("weights of different rank")
        return Weight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.central + other.central)

    def flip(self) -> "Weight":
        """Highest weight of the contragredient, up to central charge."""
        return Weight(tuple(reversed(self.coeffs)), self.central)

    def dual(self) -> "Weight":
        """Exact highest weight of the contragredient representation."""
        eps = self.epsilon()
        return Weight.from_epsilon([-x for x in reversed(eps)])

    def label(self) -> str:
        s = "(" + ",".join(str(c) for c in self.coeffs) + ")"
        return s if self.central == 0 else f"{s}{self.central:+d}det"


def _as_weight(lam) -> Weight:
    if isinstance(lam, Weight):
        return lam
    return Weight(tuple(lam))


def weyl_dimension(lam, data: RootDataA | None = None) -> int:
    """Dimension of the irreducible representation with highest weight ``lam``.

    Computed from the Weyl dimension formula in exact rational arithmetic.
    """
    if not isinstance(lam, Weight):
        lam = tuple(lam)
        if any(int(c) < 0 for c in lam):
            raise DomainError(f"weight {lam} is not dominant")
        lam = Weight(lam)
    data = data or RootDataA(lam.n)
    if data.n != lam.n:
        raise DomainError(f"weight has rank {lam.rank}, root data has n={data.n}")
    eps = lam.epsilon()
    shifted = [Fraction(x) + p for x, p in zip(eps, data.rho)]
    num, den = Fraction(1), Fraction(1)
    for alpha in data.positive_roots:
        num *= data.coroot_pairing(shifted, alpha)
        den *= data.coroot_pairing(data.rho, alpha)
    q = num / den
    if q.denominator != 1 or q <= 0:
        raise ArithmeticError(f"Weyl dimension not a positive integer: {q}")
    return int(q)


def support(lam) -> frozenset[int]:
    """1-based indices ``i`` with ``lam_i != 0``."""
    coeffs = lam.coeffs if isinstance(lam, Weight) else tuple(lam)
    return frozenset(i + 1 for i, c in enumerate(coeffs) if c != 0)


def parabolic_blocks(boundaries: Iterable[int], n: int) -> list[int]:
    """Block sizes of the Levi group ``L`` for a weight supported on ``boundaries``.

    ``L`` consists of block-diagonal unitaries whose block boundaries sit after
    the indices in ``boundaries`` (the simple roots not in ``S``).  An empty
    set gives the whole group, ``{1..n-1}`` gives the maximal torus.
    """
    cuts = sorted(set(int(b) for b in boundaries))
    if any(b < 1 or b > n - 1 for b in cuts):
        raise DomainError(f"boundaries {cuts} out of range for n={n}")
    edges = [0] + cuts + [n]
    return [b - a for a, b in zip(edges[:-1], edges[1:])]


# --------------------------------------------------------------------------
# weight families and the growth hypotheses

@dataclass(frozen=True)
class CoeffLaw:
    """One coefficient of a weight family.

    ``kind="power"``:  ``round(a * n**p + b)``
    ``kind="logpower"``: ``round(a * log(n)**p + b)``
    """

    a: float
    p: float = 1.0
    b: float = 0.0
    kind: str = "power"

    def __post_init__(self):
        if self.kind not in ("power", "logpower"):
            raise DomainError(f"unsupported coefficient law {self.kind!r}")

    def __call__(self, n: int) -> int:
        x = n ** self.p if self.kind == "power" else math.log(n) ** self.p
        return max(0, int(round(self.a * x + self.b)))

    @property
    def unbounded(self) -> bool:
        return self.a > 0 and self.p > 0

    @property
    def superlogarithmic(self) -> bool:
        if not self.unbounded:
            return False
        return self.kind == "power" or self.p > 1

    @property
    def degree(self) -> float:
        """Polynomial growth exponent (0 for bounded / log-type laws)."""
        if self.kind == "power" and self.unbounded:
            return float(self.p)
        return 0.0


@dataclass(frozen=True)
class WeightFamily:
    """Closed-form sequence ``n -> lambda_n`` with a fixed support.

    ``laws`` maps 1-based fundamental-weight indices to coefficient laws;
    indices not listed are identically zero.
    """

    n_group: int
    laws: dict[int, CoeffLaw] = field(default_factory=dict)
    central: int = 0

    def __post_init__(self):
        r = self.n_group - 1
        for i in self.laws:
            if not 1 <= i <= r:
                raise DomainError(f"index {i} out of range for U({self.n_group})")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, law in self.laws.items() if law.a != 0 or law.b != 0)

    def __call__(self, n: int) -> Weight:
        coeffs = [0] * (self.n_group - 1)
        for i, law in self.laws.items():
            coeffs[i - 1] = law(n)
        return Weight(tuple(coeffs), self.central)

    @classmethod
    def from_dict(cls, d: dict) -> "WeightFamily":
        laws = {int(k): CoeffLaw(**v) for k, v in d["laws"].items()}
        return cls(int(d["n"]), laws, int(d.get("central", 0)))


@dataclass(frozen=True)
class GrowthReport:
    superlog_ok: bool
    poly_ok: bool
    C: float
    D: float
    support_constant: bool


def growth_check(fam: WeightFamily, horizon: int) -> GrowthReport:
    """Decide the superlogarithmic-min / polynomial-max growth hypotheses.

    The decision is analytic (from the coefficient laws).  The witnesses are
    measured over ``2..horizon``: ``C = min_i lambda_i(horizon) / log(horizon)``
    and ``D`` is the smallest exponent with ``max_i lambda_i(n) <= n**D`` on the
    upper half of the range.
    """
    if horizon < 10:
        raise DomainError("horizon must be >= 10")
    supp = sorted(fam.support)
    if not supp:
        raise DomainError("weight family has empty support")
    laws = [fam.laws[i] for i in supp]
    superlog = all(law.superlogarithmic for law in laws)
    poly = True  # closed-form laws grow at most polynomially

    lams = [fam(k) for k in range(1, horizon + 1)]
    constant_support = all(support(l) == frozenset(supp) for l in lams[1:])
    mins = np.array([min(l.coeffs[i - 1] for i in supp) for l in lams], dtype=float)
    maxs = np.array([max(l.coeffs[i - 1] for i in supp) for l in lams], dtype=float)
    C = float(mins[-1] / math.log(horizon))
    ns = np.arange(1, horizon + 1, dtype=float)
    upper = ns >= max(2, horizon // 2)
    with np.errstate(divide="ignore"):
        ratio = np.log(np.maximum(maxs[upper], 1.0)) / np.log(ns[upper])
    D = max(float(ratio.max()), max(law.degree for law in laws))
    return GrowthReport(superlog, poly, C, D, constant_support)
