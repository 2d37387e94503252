"""The fixed small configurations used by the oracle-equivalence checks."""

from __future__ import annotations

from .configs import PointConfig, gen_lattice, gen_random, gen_star_circles

RANDOM_CORPUS = ((3, 11), (4, 12), (5, 13), (6, 14), (7, 15))  # (size, seed)
RANDOM_BOUND = 10


def standard_corpus() -> list[PointConfig]:
    """Lattices 2 and 3, a two-circle star, and five seeded random sets of 3..7 points."""
    corpus = [gen_lattice(2), gen_lattice(3), gen_star_circles(2, [1, 2])]
    corpus.extend(gen_random(n, seed, RANDOM_BOUND) for n, seed in RANDOM_CORPUS)
    return corpus


def corpus_upto(max_points: int) -> list[PointConfig]:
    return [c for c in standard_corpus() if len(c) <= max_points]
