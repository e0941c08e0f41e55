"""Independent brute-force oracles the tests check the real implementations
against. Deliberately naive: these share no code with the package."""

from __future__ import annotations

import itertools
from collections import deque

from eidolon.graphs import Graph


def brute_force_k_colorable(g: Graph, k: int) -> tuple[int, ...] | None:
    """Exhaustive search over assignments; vertex 0 pinned to color 0 purely
    to cut the search space (any coloring can be relabeled)."""
    if g.n == 0:
        return ()
    if k < 1:
        return None
    for rest in itertools.product(range(k), repeat=g.n - 1):
        assignment = (0,) + rest
        if all(assignment[u] != assignment[v] for u, v in g.edges):
            return assignment
    return None


def brute_force_chromatic(g: Graph) -> int:
    for k in range(1, g.n + 1):
        if brute_force_k_colorable(g, k) is not None:
            return k
    return max(g.n, 1)


def bfs_two_coloring(g: Graph) -> tuple[int, ...] | None:
    """Standard BFS bipartition; None if an odd cycle exists."""
    colors = [-1] * g.n
    for start in range(g.n):
        if colors[start] != -1:
            continue
        colors[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if colors[w] == -1:
                    colors[w] = 1 - colors[v]
                    queue.append(w)
                elif colors[w] == colors[v]:
                    return None
    return tuple(colors)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
