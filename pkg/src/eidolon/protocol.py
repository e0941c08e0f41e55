"""One round of the interactive commit-challenge-response identification
protocol for graph coloring, plus an empirical soundness simulator.

The prover masks the coloring with a fresh random permutation each round,
commits to every vertex's permuted color, and opens only the two endpoints of
the challenged edge. No transport layer here: rounds are pure state
transitions driven in-process.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .commitment import CommitmentParams, DEFAULT_PARAMS, Opening, commit, verify_opening
from .graphs import Coloring, Graph, is_valid_coloring

REJECT_BAD_EDGE = "bad-edge"
REJECT_BAD_OPENING = "bad-opening"
REJECT_COLOR_RANGE = "color-range"
REJECT_MONOCHROMATIC = "monochromatic"


@dataclass
class RoundState:
    """Prover-side secrets for a single round; consumed after one response."""

    graph: Graph
    permutation: tuple[int, ...]
    randomness: tuple[bytes, ...]
    permuted_colors: tuple[int, ...]
    consumed: bool = False


@dataclass(frozen=True)
class RoundCommitmentSet:
    digests: tuple[bytes, ...]


@dataclass(frozen=True)
class RoundResponse:
    opening_u: Opening
    opening_v: Opening


def prove_round(
    g: Graph,
    coloring: Coloring,
    rng: random.Random,
    params: CommitmentParams = DEFAULT_PARAMS,
) -> tuple[RoundState, RoundCommitmentSet]:
    """Commit phase: sample a fresh uniform permutation of the k colors and
    fresh per-vertex randomness, commit to every permuted color."""
    valid, conflicts = is_valid_coloring(g, coloring)
    if not valid:
        raise ValueError(f"prover coloring is invalid ({len(conflicts)} conflicting edges)")
    perm = list(range(coloring.k))
    rng.shuffle(perm)
    randomness = tuple(rng.randbytes(params.r_bytes) for _ in range(g.n))
    permuted = tuple(perm[c] for c in coloring.colors)
    digests = tuple(
        commit(permuted[v], randomness[v], params) for v in range(g.n)
    )
    state = RoundState(
        graph=g,
        permutation=tuple(perm),
        randomness=randomness,
        permuted_colors=permuted,
    )
    return state, RoundCommitmentSet(digests=digests)


def respond(state: RoundState, edge: tuple[int, int]) -> RoundResponse:
    """Response phase: open the commitments of the challenged edge's endpoints.
    A state may answer exactly one challenge."""
    if state.consumed:
        raise RuntimeError("round state already consumed; a round answers one challenge")
    u, v = edge
    if not state.graph.has_edge(u, v):
        raise ValueError(f"challenged pair ({u},{v}) is not an edge of the graph")
    state.consumed = True
    return RoundResponse(
        opening_u=Opening(state.permuted_colors[u], state.randomness[u]),
        opening_v=Opening(state.permuted_colors[v], state.randomness[v]),
    )


def verify_round(
    g: Graph,
    k: int,
    commitments: RoundCommitmentSet,
    edge: tuple[int, int],
    response: RoundResponse,
    params: CommitmentParams = DEFAULT_PARAMS,
) -> tuple[bool, str | None]:
    """Verifier checks for one round; returns (accept, reject reason)."""
    u, v = edge
    if not g.has_edge(u, v):
        return False, REJECT_BAD_EDGE
    if not verify_opening(commitments.digests[u], response.opening_u, params):
        return False, REJECT_BAD_OPENING
    if not verify_opening(commitments.digests[v], response.opening_v, params):
        return False, REJECT_BAD_OPENING
    a_u, a_v = response.opening_u.alpha, response.opening_v.alpha
    if not (0 <= a_u < k and 0 <= a_v < k):
        return False, REJECT_COLOR_RANGE
    if a_u == a_v:
        return False, REJECT_MONOCHROMATIC
    return True, None


def simulate_soundness(
    g: Graph,
    bad_coloring: Coloring,
    rounds: int,
    trials: int,
    rng: random.Random,
) -> float:
    """Empirical escape rate of a cheating prover who commits honestly to a
    fixed conflicted coloring while the verifier challenges uniform edges.

    A round accepts iff the challenged edge is not monochromatic (honest
    commitments always open correctly), so a trial escapes iff none of its
    `rounds` uniform challenges hits a conflicting edge. The simulation
    samples challenges directly with that acceptance rule, which has exactly
    the distribution of running the full commit/open machinery.
    """
    valid, conflicts = is_valid_coloring(g, bad_coloring)
    if valid:
        raise ValueError("coloring is actually valid; a cheating prover needs >= 1 conflict")
    if rounds < 1 or trials < 1:
        raise ValueError(f"rounds and trials must be >= 1, got {rounds}, {trials}")
    bad = np.zeros(g.m, dtype=bool)
    conflict_set = set(conflicts)
    for idx, e in enumerate(g.edges):
        if e in conflict_set:
            bad[idx] = True
    np_rng = np.random.default_rng(rng.getrandbits(64))
    escaped = 0
    remaining = trials
    chunk_rows = max(1, 4_000_000 // rounds)
    while remaining > 0:
        rows = min(chunk_rows, remaining)
        picks = np_rng.integers(0, g.m, size=(rows, rounds))
        escaped += int(np.sum(~bad[picks].any(axis=1)))
        remaining -= rows
    return escaped / trials
