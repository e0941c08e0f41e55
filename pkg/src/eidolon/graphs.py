"""Graph and coloring primitives: random instances, planted k-partite instances,
coloring validation, and the shared text file formats."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable


class DensityInfeasibleError(ValueError):
    """Requested density cannot be met: the adjusted edge probability would exceed 1."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 with a canonical sorted edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be >= 1, got {self.n}")
        prev = None
        for u, v in self.edges:
            if not (0 <= u < v <= self.n - 1):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if prev is not None and (u, v) <= prev:
                raise ValueError(f"edge list not strictly increasing at ({u},{v})")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from arbitrary edge input, normalizing endpoint order,
        dropping duplicates, and sorting lexicographically."""
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            canon.add((u, v))
        return cls(n=n, edges=tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class Coloring:
    """Assignment of one of k colors (0-based) to each vertex."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        for v, c in enumerate(self.colors):
            if not (0 <= c < self.k):
                raise ValueError(f"color {c} of vertex {v} outside 0..{self.k - 1}")

    @property
    def n(self) -> int:
        return len(self.colors)

    def classes_used(self) -> int:
        return len(set(self.colors))


@dataclass(frozen=True)
class PartitionSpec:
    """Sizes of the k color classes a planted instance is built from."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError(f"partition sizes must be positive, got {self.sizes}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @classmethod
    def balanced(cls, n: int, k: int) -> "PartitionSpec":
        """Split n vertices into k classes of size floor(n/k) or ceil(n/k);
        the first n mod k classes get the larger size."""
        if not (1 <= k <= n):
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
        base, extra = divmod(n, k)
        return cls(tuple(base + 1 if i < extra else base for i in range(k)))

    def forbidden_edges(self) -> int:
        """Number of intra-class vertex pairs (edges the construction never places)."""
        return sum(s * (s - 1) // 2 for s in self.sizes)


def generate_er(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi G(n, p): each of the C(n,2) pairs is included independently
    with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"edge probability must be in [0,1], got {p}")
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n=n, edges=tuple(edges))


def adjusted_edge_probability(n: int, spec: PartitionSpec, s: float) -> float:
    """Cross-class edge probability that makes a k-partite instance on the given
    partition match the expected edge count s*C(n,2) of a density-s random graph.

    With S intra-class pairs forbidden, only C(n,2) - S pairs are available, so
    the probability is inflated to s*C(n,2) / (C(n,2) - S).
    """
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"target density must be in [0,1], got {s}")
    if spec.n != n:
        raise ValueError(f"partition covers {spec.n} vertices, expected {n}")
    total = n * (n - 1) // 2
    allowed = total - spec.forbidden_edges()
    if allowed <= 0:
        raise DensityInfeasibleError(f"no cross-class pairs available for sizes {spec.sizes}")
    p_adj = s * total / allowed
    if p_adj > 1.0:
        raise DensityInfeasibleError(
            f"density {s} needs edge probability {p_adj:.4f} > 1 on sizes {spec.sizes}"
        )
    return p_adj


def generate_planted(spec: PartitionSpec, s: float, rng: random.Random) -> tuple[Graph, Coloring]:
    """k-partite instance with a planted coloring: consecutive vertex blocks get
    colors 0..k-1 and only cross-block pairs may become edges, each independently
    with the adjusted probability. The returned coloring is valid by construction."""
    n = spec.n
    p_adj = adjusted_edge_probability(n, spec, s)
    starts = []
    acc = 0
    for size in spec.sizes:
        starts.append(acc)
        acc += size
    colors = []
    for j, size in enumerate(spec.sizes):
        colors.extend([j] * size)
    edges = []
    for i in range(spec.k):
        for j in range(i + 1, spec.k):
            for u in range(starts[i], starts[i] + spec.sizes[i]):
                for v in range(starts[j], starts[j] + spec.sizes[j]):
                    if rng.random() < p_adj:
                        edges.append((u, v) if u < v else (v, u))
    g = Graph(n=n, edges=tuple(sorted(edges)))
    return g, Coloring(colors=tuple(colors), k=spec.k)


def is_valid_coloring(g: Graph, c: Coloring) -> tuple[bool, list[tuple[int, int]]]:
    """Check a coloring against a graph; returns (valid, monochromatic edges)."""
    if c.n != g.n:
        raise ValueError(f"coloring covers {c.n} vertices, graph has {g.n}")
    conflicts = [(u, v) for u, v in g.edges if c.colors[u] == c.colors[v]]
    return not conflicts, conflicts


# --- text file formats shared with external attackers ---

def write_graph_file(path: str | Path, g: Graph, k: int) -> None:
    """Write `n m k` then one `u v` line per edge in canonical order."""
    lines = [f"{g.n} {g.m} {k}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph_file(path: str | Path) -> tuple[Graph, int]:
    text = Path(path).read_text(encoding="utf-8")
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ValueError(f"{path}: empty graph file")
    head = rows[0].split()
    if len(head) != 3:
        raise ValueError(f"{path}: header must be 'n m k', got {rows[0]!r}")
    n, m, k = (int(x) for x in head)
    if len(rows) - 1 != m:
        raise ValueError(f"{path}: header says m={m} but file has {len(rows) - 1} edge lines")
    edges = []
    for ln in rows[1:]:
        u, v = (int(x) for x in ln.split())
        edges.append((u, v))
    return Graph(n=n, edges=tuple(edges)), k


def write_coloring_file(path: str | Path, c: Coloring) -> None:
    Path(path).write_text("\n".join(str(x) for x in c.colors) + "\n", encoding="utf-8")


def read_coloring_file(path: str | Path, k: int) -> Coloring:
    rows = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    return Coloring(colors=tuple(int(x) for x in rows), k=k)
