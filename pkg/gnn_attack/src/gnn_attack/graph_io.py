"""Text-format graph and coloring I/O shared with the signature toolkit.

Graph files: line 1 is `n m k`, then m lines `u v` with 0-based endpoints.
Coloring files: one integer per line, line i holding the color of vertex i.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u},{v}) for n={self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def read_graph_file(path: str | Path) -> tuple[Graph, int]:
    """Returns (graph, k) where k is the color-count header field."""
    lines = Path(path).read_text().split("\n")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"graph header must be 'n m k', got {lines[0]!r}")
    n, m, k = (int(x) for x in header)
    edges = []
    for line in lines[1 : m + 1]:
        u, v = (int(x) for x in line.split())
        edges.append((u, v))
    if len(edges) != m:
        raise ValueError(f"expected {m} edges, found {len(edges)}")
    return Graph(n=n, edges=tuple(edges)), k


def write_coloring_file(path: str | Path, colors: list[int]) -> None:
    Path(path).write_text("".join(f"{c}\n" for c in colors))


def count_conflicts(g: Graph, colors: list[int]) -> int:
    if len(colors) != g.n:
        raise ValueError(f"coloring length {len(colors)} does not match n={g.n}")
    return sum(1 for u, v in g.edges if colors[u] == colors[v])
