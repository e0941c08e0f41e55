"""Deterministic challenge-edge derivation from the Fiat-Shamir digest.

Each challenge index gets its own hash stream, and rejection sampling removes
modulo bias, so the derived edges are exactly uniform over the edge list and
stable under changes of the round count.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import LAMBDA_BITS, be_int, core_hash
from .graphs import Graph

EDGE_DERIVE_TAG = b"EdgeDerive-v1"


@dataclass(frozen=True)
class ChallengeSet:
    """Derived challenge edges (with replacement) plus per-index rejection
    diagnostics."""

    edges: tuple[tuple[int, int], ...]
    rejection_counts: tuple[int, ...]


def hash_to_edges(
    h: bytes, t: int, g: Graph, width_bits: int = LAMBDA_BITS
) -> ChallengeSet:
    """Derive t edge challenges from digest h.

    For each index i, hash blocks B = CoreHash("EdgeDerive-v1" || h || <i>_32
    || <j>_32) are drawn for j = 0, 1, ... until the big-endian value x falls
    below floor(2^w / m) * m; then edges[x mod m] is the challenge. Duplicate
    edges are allowed (sampling with replacement).

    `width_bits` narrows x to the top bits of the block; anything below the
    full digest width exists purely so tests can force the rejection branch.
    """
    m = g.m
    if m < 1:
        raise ValueError("cannot derive challenges from an empty edge set")
    if t < 1:
        raise ValueError(f"round count must be >= 1, got {t}")
    if not (1 <= width_bits <= LAMBDA_BITS):
        raise ValueError(f"width_bits must be in 1..{LAMBDA_BITS}, got {width_bits}")
    limit = ((1 << width_bits) // m) * m
    shift = LAMBDA_BITS - width_bits
    chosen = []
    rejections = []
    for i in range(t):
        j = 0
        while True:
            block = core_hash(EDGE_DERIVE_TAG + h + be_int(i, 32) + be_int(j, 32))
            x = int.from_bytes(block, "big") >> shift
            if x < limit:
                break
            j += 1
        chosen.append(g.edges[x % m])
        rejections.append(j)
    return ChallengeSet(edges=tuple(chosen), rejection_counts=tuple(rejections))
