"""GraphSAGE coloring network and the Potts conflict losses.

The network maps fixed random per-vertex features through one mean-aggregator
hidden layer to a softmax distribution over the k target colors. Training
minimizes the degree-weighted Potts loss, which down-weights conflicts at
low-degree vertices because they are cheap to repair afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from .graph_io import Graph


@dataclass(frozen=True)
class GnnConfig:
    k: int
    seed: int = 0
    d0: int = 45
    d1: int = 40
    learning_rate: float = 0.0091
    dropout: float = 0.6
    epochs: int = 20_000
    pretrain_epochs: int = 70
    pretrain_learning_rate: float = 0.08

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"target color count must be >= 2, got {self.k}")
        for name in ("d0", "d1", "learning_rate", "epochs",
                     "pretrain_epochs", "pretrain_learning_rate"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")


@dataclass(frozen=True)
class SoftAssignment:
    """Row-stochastic (n, k) color distribution."""

    probs: torch.Tensor

    def __post_init__(self):
        if self.probs.dim() != 2:
            raise ValueError("assignment must be a 2-d tensor")
        if (self.probs < -1e-6).any():
            raise ValueError("assignment has negative entries")
        rows = self.probs.sum(dim=1)
        if (rows - 1.0).abs().max().item() > 1e-6:
            raise ValueError("assignment rows must sum to 1")

    @property
    def n(self) -> int:
        return self.probs.shape[0]

    @property
    def k(self) -> int:
        return self.probs.shape[1]

    def argmax_labels(self) -> list[int]:
        return self.probs.argmax(dim=1).tolist()

    @staticmethod
    def from_labels(labels: list[int], k: int) -> "SoftAssignment":
        probs = torch.zeros(len(labels), k)
        probs[range(len(labels)), labels] = 1.0
        return SoftAssignment(probs)


def _edge_index(g: Graph) -> tuple[torch.Tensor, torch.Tensor]:
    us = torch.tensor([u for u, _ in g.edges], dtype=torch.long)
    vs = torch.tensor([v for _, v in g.edges], dtype=torch.long)
    return us, vs


def potts_loss(
    assignment: SoftAssignment | torch.Tensor, g: Graph, weighted: bool = False
) -> torch.Tensor:
    """Quadratic conflict mass of a soft assignment.

    weighted=False: sum_k p_k^T A p_k. A one-hot assignment scores exactly
    twice the conflict count (the form counts both ordered endpoint pairs).
    weighted=True: sum_k p_k^T (I - D^{-1}) A p_k with D the degree diagonal;
    isolated vertices contribute nothing in either mode.
    """
    probs = assignment.probs if isinstance(assignment, SoftAssignment) else assignment
    if probs.shape[0] != g.n:
        raise ValueError(f"assignment has {probs.shape[0]} rows for n={g.n}")
    if g.m == 0:
        return probs.sum() * 0.0
    us, vs = _edge_index(g)
    agreement = (probs[us] * probs[vs]).sum(dim=1)
    if not weighted:
        return 2.0 * agreement.sum()
    deg = torch.tensor([g.degree(v) for v in range(g.n)], dtype=probs.dtype)
    # ordered pair (u, v) carries weight 1 - 1/deg(u); both orders summed
    w = (1.0 - 1.0 / deg[us]) + (1.0 - 1.0 / deg[vs])
    return (w * agreement).sum()


def neighbor_mean_operator(g: Graph) -> torch.Tensor:
    """D^{-1} A used by the mean aggregator; isolated vertices get an all-zero
    row. Dense, sized for desk-scale instances."""
    op = torch.zeros(g.n, g.n)
    adjacency = g.adjacency
    for v in range(g.n):
        for w in adjacency[v]:
            op[v, w] = 1.0 / len(adjacency[v])
    return op


class GraphSageColorer(nn.Module):
    """One hidden mean-aggregator layer over fixed random input features,
    then a softmax head of width k."""

    def __init__(self, g: Graph, config: GnnConfig):
        super().__init__()
        generator = torch.Generator().manual_seed(config.seed)
        features = torch.randn(g.n, config.d0, generator=generator)
        self.register_buffer("features", features)
        self.register_buffer("mean_op", neighbor_mean_operator(g))
        self.lin_self = nn.Linear(config.d0, config.d1)
        self.lin_neigh = nn.Linear(config.d0, config.d1, bias=False)
        self.dropout = nn.Dropout(config.dropout)
        self.head = nn.Linear(config.d1, config.k)
        # parameter init from the same seeded stream
        with torch.no_grad():
            for p in self.parameters():
                p.copy_(torch.randn(p.shape, generator=generator) * 0.1)

    def logits(self) -> torch.Tensor:
        hidden = torch.relu(
            self.lin_self(self.features) + self.lin_neigh(self.mean_op @ self.features)
        )
        return self.head(self.dropout(hidden))

    def forward(self) -> torch.Tensor:
        return torch.softmax(self.logits(), dim=1)
