"""Distinct distance chains, their multiplicities, and graph-distance sets.

Signatures are tuples of squared distances read left to right along the
chain; chains are ordered tuples of points and are never identified with
their reversals.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from ._parallel import chunk, pmap
from .configs import PointConfig
from .errors import SizeGuard
from .geometry import squared_distance

DEFAULT_STATE_BUDGET = 20_000_000
DEFAULT_ASSIGNMENT_BUDGET = 10_000_000

Signature = tuple[Fraction, ...]


class ChainMode(enum.Enum):
    REPEATS = "repeats"
    PROPER = "proper"

    @classmethod
    def parse(cls, value) -> "ChainMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class MultiplicityTable:
    n: int
    mode: ChainMode
    counts: dict  # Signature -> int, sorted by signature

    def __len__(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return sum(self.counts.values())

    def energy(self) -> int:
        return sum(c * c for c in self.counts.values())


def chain_mass(size: int, n: int, mode: ChainMode) -> int:
    """Number of (n+1)-point chains: |P|^(n+1), or |P|(|P|-1)^n without repeated steps."""
    if mode is ChainMode.REPEATS:
        return size ** (n + 1)
    return size * (size - 1) ** n


class DistanceIndex:
    """Distinct squared distances of a configuration, each given an integer label.

    ``labels[i, j]`` is the label of squared_distance(P[i], P[j]); label 0 is
    always the zero distance and labels increase with the distance.
    """

    def __init__(self, config: PointConfig):
        pts = config.points
        size = len(pts)
        raw = [[squared_distance(p, q) for q in pts] for p in pts]
        self.values: list[Fraction] = sorted({d for row in raw for d in row})
        lookup = {v: k for k, v in enumerate(self.values)}
        self.labels = np.array([[lookup[d] for d in row] for row in raw], dtype=np.int64).reshape(size, size)
        self.size = size

    def buckets(self, i: int) -> dict[int, list[int]]:
        """For point i: label -> indices of points at that squared distance (ascending)."""
        out: dict[int, list[int]] = {}
        for j, lab in enumerate(self.labels[i].tolist()):
            out.setdefault(lab, []).append(j)
        return out


def _chain_dp(labels: list[list[int]], starts: Sequence[int], n: int, proper: bool, budget: int) -> Counter:
    size = len(labels)
    buckets = []
    for i in range(size):
        b: dict[int, list[int]] = {}
        for j, lab in enumerate(labels[i]):
            if proper and lab == 0:
                continue
            b.setdefault(lab, []).append(j)
        buckets.append(sorted(b.items()))
    widest = max((len(b) for b in buckets), default=0)
    states: dict[tuple, int] = {((), p): 1 for p in starts}
    for _ in range(n):
        if len(states) * max(widest, 1) > budget:
            raise SizeGuard(f"chain frontier would exceed {budget} states")
        nxt: dict[tuple, int] = {}
        for (prefix, end), count in states.items():
            for lab, targets in buckets[end]:
                sig = prefix + (lab,)
                for q in targets:
                    key = (sig, q)
                    nxt[key] = nxt.get(key, 0) + count
        states = nxt
    table: Counter = Counter()
    for (sig, _), count in states.items():
        table[sig] += count
    return table


def delta_n_census(
    config: PointConfig,
    n: int,
    mode: ChainMode = ChainMode.REPEATS,
    *,
    workers: int = 1,
    budget: int = DEFAULT_STATE_BUDGET,
) -> tuple[int, MultiplicityTable]:
    """Return ``(|Delta_n(P)|, nu)`` by frontier dynamic programming.

    States are (signature prefix, current endpoint); with ``workers > 1``
    the starting points are split across processes and the partial tables
    are merged by exact addition.
    """
    mode = ChainMode.parse(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(config) < 1 or (mode is ChainMode.PROPER and len(config) < 2):
        raise ValueError("configuration too small for this mode")
    index = DistanceIndex(config)
    labels = index.labels.tolist()
    proper = mode is ChainMode.PROPER
    jobs = [(labels, part, n, proper, budget) for part in chunk(range(len(config)), workers)]
    merged: Counter = Counter()
    for partial in pmap(_chain_dp, jobs, workers):
        merged.update(partial)
    counts = {tuple(index.values[k] for k in sig): merged[sig] for sig in sorted(merged)}
    return len(counts), MultiplicityTable(n, mode, counts)


def census_bruteforce(config: PointConfig, n: int, mode: ChainMode = ChainMode.REPEATS) -> MultiplicityTable:
    """Enumerate every (n+1)-tuple of points directly; the oracle for delta_n_census."""
    mode = ChainMode.parse(mode)
    counts: Counter = Counter()
    for chain in itertools.product(config.points, repeat=n + 1):
        if mode is ChainMode.PROPER and any(a == b for a, b in zip(chain, chain[1:])):
            continue
        counts[tuple(squared_distance(a, b) for a, b in zip(chain, chain[1:]))] += 1
    return MultiplicityTable(n, mode, {k: counts[k] for k in sorted(counts)})


# --- graphs ---

@dataclass(frozen=True)
class GraphSpec:
    """A simple connected graph on vertices 0..m-1 with sorted edge list."""

    m: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("graph needs at least 2 vertices")
        norm = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ValueError(f"edge {e} out of range for m={self.m}")
            edge = (min(i, j), max(i, j))
            if edge in norm:
                raise ValueError(f"duplicate edge {edge}")
            norm.add(edge)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if not _connected(self.m, self.edges):
            raise ValueError("graph is not connected")

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(a) for a in adj]

    def to_dict(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, doc: dict) -> "GraphSpec":
        return cls(int(doc["m"]), tuple(tuple(e) for e in doc["edges"]))


def _connected(m: int, edges: Iterable[tuple[int, int]]) -> bool:
    adj: list[set[int]] = [set() for _ in range(m)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for u in adj[v] - seen:
            seen.add(u)
            stack.append(u)
    return len(seen) == m


def path_graph(vertices: int) -> GraphSpec:
    return GraphSpec(vertices, tuple((i, i + 1) for i in range(vertices - 1)))


def star_graph(leaves: int) -> GraphSpec:
    return GraphSpec(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def cycle_graph(vertices: int) -> GraphSpec:
    return GraphSpec(vertices, tuple((i, (i + 1) % vertices) for i in range(vertices)))


def complete_graph(vertices: int) -> GraphSpec:
    return GraphSpec(vertices, tuple(itertools.combinations(range(vertices), 2)))


def connected_graphs(m: int) -> list[GraphSpec]:
    """All labelled simple connected graphs on m vertices."""
    pairs = list(itertools.combinations(range(m), 2))
    out = []
    for mask in range(1, 1 << len(pairs)):
        edges = tuple(p for k, p in enumerate(pairs) if mask >> k & 1)
        if _connected(m, edges):
            out.append(GraphSpec(m, edges))
    return out


def _graph_chunk(labels: np.ndarray, edges, m: int, first_values: Sequence[int], proper: bool) -> Counter:
    size = labels.shape[0]
    rest = np.indices((size,) * (m - 1)).reshape(m - 1, -1).T if m > 1 else np.zeros((1, 0), dtype=np.int64)
    counts: Counter = Counter()
    for v0 in first_values:
        assign = np.hstack([np.full((rest.shape[0], 1), v0, dtype=np.int64), rest])
        if proper:
            keep = np.ones(assign.shape[0], dtype=bool)
            for i, j in edges:
                keep &= assign[:, i] != assign[:, j]
            assign = assign[keep]
        if assign.shape[0] == 0:
            continue
        vecs = np.stack([labels[assign[:, i], assign[:, j]] for i, j in edges], axis=1)
        uniq, cnt = np.unique(vecs, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), cnt.tolist()):
            counts[tuple(row)] += c
    return counts


def graph_multiplicities(
    config: PointConfig,
    graph: GraphSpec,
    mode: ChainMode = ChainMode.REPEATS,
    *,
    workers: int = 1,
    budget: int = DEFAULT_ASSIGNMENT_BUDGET,
) -> dict:
    """Edge-indexed squared-distance vector -> number of vertex assignments realizing it.

    REPEATS allows any map V(G) -> P; PROPER requires adjacent vertices to
    land on distinct points.
    """
    mode = ChainMode.parse(mode)
    size = len(config)
    if size ** graph.m > budget:
        raise SizeGuard(f"{size}^{graph.m} assignments exceed budget {budget}")
    index = DistanceIndex(config)
    jobs = [(index.labels, graph.edges, graph.m, part, mode is ChainMode.PROPER)
            for part in chunk(range(size), workers)]
    merged: Counter = Counter()
    for partial in pmap(_graph_chunk, jobs, workers):
        merged.update(partial)
    return {tuple(index.values[k] for k in key): merged[key] for key in sorted(merged)}


def delta_graph_census(
    config: PointConfig,
    graph: GraphSpec,
    mode: ChainMode = ChainMode.REPEATS,
    *,
    workers: int = 1,
    budget: int = DEFAULT_ASSIGNMENT_BUDGET,
) -> int:
    return len(graph_multiplicities(config, graph, mode, workers=workers, budget=budget))


def spanning_tree(graph: GraphSpec) -> GraphSpec:
    """Breadth-first tree from vertex 0, scanning neighbours in increasing order."""
    adj = graph.neighbours()
    seen = [False] * graph.m
    seen[0] = True
    queue, tree = [0], []
    for v in queue:
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                tree.append((v, u))
                queue.append(u)
    return GraphSpec(graph.m, tuple(tree))


def hamiltonian_path(graph: GraphSpec, max_vertices: int = 20) -> Optional[list[int]]:
    """A Hamiltonian path as a vertex order, or None.

    Bitmask DP over reachable endpoints.  The path is read back from its
    smallest possible endpoint, greedily taking the smallest admissible
    neighbour, and returned starting there (paths are reversible).
    """
    m = graph.m
    if m > max_vertices:
        raise SizeGuard(f"hamiltonian_path supports at most {max_vertices} vertices")
    adj = [0] * m
    for i, j in graph.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    full = (1 << m) - 1
    ends = [0] * (1 << m)
    for v in range(m):
        ends[1 << v] = 1 << v
    for mask in range(1, full + 1):
        e = ends[mask]
        if not e:
            continue
        for v in range(m):
            if e >> v & 1:
                free = adj[v] & ~mask
                while free:
                    low = free & -free
                    ends[mask | low] |= low
                    free ^= low
    if not ends[full]:
        return None
    order = []
    mask = full
    candidates = ends[full]
    while mask:
        v = (candidates & -candidates).bit_length() - 1
        order.append(v)
        mask ^= 1 << v
        candidates = ends[mask] & adj[v] if mask else 0
    return order
