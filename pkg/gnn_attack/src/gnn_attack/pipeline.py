"""End-to-end coloring attack: DSatur warm start, supervised pretraining,
Potts-loss training, and greedy conflict repair."""

from __future__ import annotations

import torch
from torch import nn

from .graph_io import Graph, count_conflicts
from .model import GnnConfig, GraphSageColorer, SoftAssignment, potts_loss


def dsatur(g: Graph) -> list[int]:
    """Saturation-degree greedy coloring; ties by uncolored degree then lowest
    index, matching the signature toolkit's pinned order."""
    colors = [-1] * g.n
    adjacency = g.adjacency
    neighbor_colors: list[set[int]] = [set() for _ in range(g.n)]
    uncolored_degree = [len(adjacency[v]) for v in range(g.n)]
    for _ in range(g.n):
        best, best_key = -1, None
        for v in range(g.n):
            if colors[v] != -1:
                continue
            key = (len(neighbor_colors[v]), uncolored_degree[v], -v)
            if best_key is None or key > best_key:
                best_key, best = key, v
        c = 0
        while c in neighbor_colors[best]:
            c += 1
        colors[best] = c
        for w in adjacency[best]:
            neighbor_colors[w].add(c)
            uncolored_degree[w] -= 1
    return colors


def reduce_to_k(g: Graph, labels: list[int], k: int) -> list[int]:
    """Replace every color index >= k by the least-conflicted of the first k
    colors for that vertex, judged against the current neighbor labels."""
    reduced = list(labels)
    adjacency = g.adjacency
    for v in range(g.n):
        if reduced[v] < k:
            continue
        conflict_count = [
            sum(1 for w in adjacency[v] if reduced[w] == c) for c in range(k)
        ]
        reduced[v] = conflict_count.index(min(conflict_count))
    return reduced


def pretrain(g: Graph, dsatur_labels: list[int], config: GnnConfig) -> GraphSageColorer:
    """Supervised warm start: train the network to reproduce the (k-reduced)
    DSatur labelling with cross-entropy."""
    torch.manual_seed(config.seed)
    model = GraphSageColorer(g, config)
    targets = torch.tensor(reduce_to_k(g, dsatur_labels, config.k), dtype=torch.long)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.pretrain_learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    model.train()
    for _ in range(config.pretrain_epochs):
        optimizer.zero_grad()
        loss = loss_fn(model.logits(), targets)
        loss.backward()
        optimizer.step()
    return model


def train(
    g: Graph, config: GnnConfig, model: GraphSageColorer | None = None
) -> SoftAssignment:
    """Minimize the degree-weighted Potts loss; starts from a fresh network
    unless a (pretrained) model is passed in."""
    torch.manual_seed(config.seed + 1)
    if model is None:
        model = GraphSageColorer(g, config)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    model.train()
    for _ in range(config.epochs):
        optimizer.zero_grad()
        loss = potts_loss(model(), g, weighted=True)
        loss.backward()
        optimizer.step()
    model.eval()
    with torch.no_grad():
        return SoftAssignment(model())


def postprocess(g: Graph, assignment: SoftAssignment) -> tuple[list[int], int]:
    """Hard-assign argmax colors, then greedily relabel conflicted vertices
    with the smallest non-conflicting color, growing the palette only when
    every existing color is blocked. Returns (colors, colors_used)."""
    colors = assignment.argmax_labels()
    adjacency = g.adjacency
    for v in range(g.n):
        if all(colors[w] != colors[v] for w in adjacency[v]):
            continue
        blocked = {colors[w] for w in adjacency[v]}
        c = 0
        while c in blocked:
            c += 1
        colors[v] = c
    assert count_conflicts(g, colors) == 0
    return colors, len(set(colors))


def attack(g: Graph, config: GnnConfig) -> tuple[list[int], int]:
    """Full pipeline: DSatur labels, pretrain, Potts training, repair."""
    model = pretrain(g, dsatur(g), config)
    assignment = train(g, config, model)
    return postprocess(g, assignment)
