"""Chain energies via walk counting on ordered point pairs.

A pair state ``(a, a')`` steps to ``(b, b')`` when |a-b|^2 == |a'-b'|^2, so
the number of n-step walks from the all-ones vector is the number of pairs
of (n+1)-point chains with equal signatures.  The relation is applied one
distance bucket at a time: for squared distance d with 0/1 bucket matrix
M_d (``M_d[b, a] = 1`` iff |a-b|^2 = d) one step is ``sum_d M_d V M_d^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._parallel import chunk, pmap
from .census import (
    DEFAULT_ASSIGNMENT_BUDGET,
    ChainMode,
    DistanceIndex,
    GraphSpec,
    chain_mass,
    delta_n_census,
    graph_multiplicities,
)
from .configs import PointConfig
from .errors import SizeGuard
from .geometry import squared_distance

DEFAULT_STATE_BUDGET = 4_000_000
DEFAULT_BRUTE_BUDGET = 10**8
_INT64_SAFE = 2**62


def _apply_blocks(blocks, vec: np.ndarray) -> np.ndarray:
    out = np.zeros_like(vec)
    for rows, m in blocks:
        out[np.ix_(rows, rows)] += (m @ vec) @ m.T
    return out


class TransferOperator:
    """Symmetric 0/1 relation on ordered pairs of points, stored as distance buckets."""

    def __init__(self, config: PointConfig, mode: ChainMode = ChainMode.REPEATS,
                 *, dtype=np.int64, state_budget: int = DEFAULT_STATE_BUDGET):
        self.mode = ChainMode.parse(mode)
        self.size = len(config)
        if self.size * self.size > state_budget:
            raise SizeGuard(f"{self.size}^2 pair states exceed budget {state_budget}")
        self.dtype = dtype
        index = DistanceIndex(config)
        labels = index.labels
        self.blocks = []
        for lab in range(len(index.values)):
            if lab == 0 and self.mode is ChainMode.PROPER:
                continue
            mask = labels == lab
            rows = np.nonzero(mask.any(axis=1))[0]
            self.blocks.append((rows, mask[rows].astype(np.int64).astype(dtype)))

    def entry(self, s: tuple[int, int], u: tuple[int, int]) -> int:
        """T[(a,a'),(b,b')] computed from the buckets (for inspection and tests)."""
        (a, a2), (b, b2) = s, u
        for rows, m in self.blocks:
            r = dict(zip(rows.tolist(), range(len(rows))))
            if b in r and b2 in r and m[r[b], a] and m[r[b2], a2]:
                return 1
        return 0

    def ones(self) -> np.ndarray:
        return np.ones((self.size, self.size), dtype=self.dtype)

    def apply(self, vec: np.ndarray, workers: int = 1) -> np.ndarray:
        if workers <= 1 or len(self.blocks) <= 1:
            return _apply_blocks(self.blocks, vec)
        parts = pmap(_apply_blocks, [(part, vec) for part in chunk(self.blocks, workers)], workers)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total


def _dtype_for(size: int, n: int):
    # every intermediate entry is bounded by the total walk count <= |P|^(2(n+1))
    return np.int64 if size ** (2 * (n + 1)) < _INT64_SAFE else object


def energy_series(config: PointConfig, n_max: int, mode: ChainMode = ChainMode.REPEATS,
                  *, workers: int = 1) -> list[int]:
    """[E_0, E_1, ..., E_{n_max}] from repeated application of the transfer operator."""
    mode = ChainMode.parse(mode)
    op = TransferOperator(config, mode, dtype=_dtype_for(len(config), n_max))
    vec = op.ones()
    out = [int(vec.sum())]
    for _ in range(n_max):
        vec = op.apply(vec, workers)
        out.append(int(vec.sum()))
    return out


def energy_chain(config: PointConfig, n: int, mode: ChainMode = ChainMode.REPEATS, *, workers: int = 1) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return energy_series(config, n, mode, workers=workers)[n]


def energy_bruteforce(config: PointConfig, n: int, mode: ChainMode = ChainMode.REPEATS,
                      *, budget: int = DEFAULT_BRUTE_BUDGET) -> int:
    """Count pairs of chains with equal consecutive distances by direct enumeration.

    Both chains are grown one point at a time and every completed pair is
    counted individually; partial pairs whose last steps disagree are not
    extended.
    """
    mode = ChainMode.parse(mode)
    size = len(config)
    if size ** (2 * (n + 1)) > budget:
        raise SizeGuard(f"{size}^{2 * (n + 1)} chain pairs exceed budget {budget}")
    pts = config.points
    dist = [[squared_distance(p, q) for q in pts] for p in pts]
    proper = mode is ChainMode.PROPER

    def extend(a: int, b: int, depth: int) -> int:
        if depth == n:
            return 1
        total = 0
        for a2 in range(size):
            if proper and a2 == a:
                continue
            da = dist[a][a2]
            for b2 in range(size):
                if proper and b2 == b:
                    continue
                if dist[b][b2] == da:
                    total += extend(a2, b2, depth + 1)
        return total

    return sum(extend(a, b, 0) for a in range(size) for b in range(size))


def energy_graph(config: PointConfig, graph: GraphSpec, mode: ChainMode = ChainMode.REPEATS,
                 *, workers: int = 1, budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> int:
    """Sum of squared multiplicities of the edge-distance vectors of ``graph``."""
    table = graph_multiplicities(config, graph, mode, workers=workers, budget=budget)
    return sum(c * c for c in table.values())


@dataclass(frozen=True)
class EnergyReport:
    n: int
    mode: ChainMode
    energy: int
    distinct: int
    left: int   # (total chain mass)^2
    right: int  # |Delta_n| * E_n
    holds: bool
    equality: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.left, self.right)

    def to_dict(self) -> dict:
        r = self.ratio
        return {
            "n": str(self.n),
            "mode": self.mode.value,
            "energy": str(self.energy),
            "distinct": str(self.distinct),
            "left": str(self.left),
            "right": str(self.right),
            "ratio": f"{r.numerator}/{r.denominator}",
            "holds": self.holds,
            "equality": self.equality,
        }


def check_cauchy_schwarz(config: PointConfig, n: int, mode: ChainMode = ChainMode.REPEATS,
                         *, workers: int = 1) -> EnergyReport:
    """Compare (sum nu)^2 with |Delta_n| * sum nu^2 using exact values."""
    mode = ChainMode.parse(mode)
    distinct, _ = delta_n_census(config, n, mode, workers=workers)
    e = energy_chain(config, n, mode, workers=workers)
    left = chain_mass(len(config), n, mode) ** 2
    right = distinct * e
    return EnergyReport(n, mode, e, distinct, left, right, left <= right, left == right)


@dataclass(frozen=True)
class MomentCheck:
    """One exact moment inequality E_n^2 <= E_lo * E_hi.

    ``lo``/``hi`` follow the pattern that is provable for the symmetric
    operator (odd n: n-1, n+1; even n: n-2, n+2).  The ``alt_*`` fields hold
    the opposite parity pattern, recorded for inspection only.
    """

    n: int
    square: int
    lo: int
    hi: int
    product: int
    holds: bool
    alt_lo: int
    alt_hi: int
    alt_product: Optional[int]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "square": str(self.square),
            "lo": self.lo,
            "hi": self.hi,
            "product": str(self.product),
            "holds": self.holds,
            "ratio": float(Fraction(self.square, self.product)) if self.product else None,
            "alt_lo": self.alt_lo,
            "alt_hi": self.alt_hi,
            "alt_product": None if self.alt_product is None else str(self.alt_product),
        }


def check_moment_inequalities(config: PointConfig, n_max: int, mode: ChainMode = ChainMode.REPEATS,
                              *, workers: int = 1) -> list[MomentCheck]:
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    series = energy_series(config, n_max + 2, mode, workers=workers)
    out = []
    for n in range(3, n_max + 1):
        step, alt = (1, 2) if n % 2 else (2, 1)
        lo, hi = n - step, n + step
        a_lo, a_hi = n - alt, n + alt
        product = series[lo] * series[hi]
        alt_product = series[a_lo] * series[a_hi] if a_lo >= 0 else None
        sq = series[n] ** 2
        out.append(MomentCheck(n, sq, lo, hi, product, sq <= product, a_lo, a_hi, alt_product))
    return out
