"""Hash-instantiated commitment to a single color value.

The scheme needs a statistically hiding, computationally binding commitment;
a domain-separated hash stands in for it here (hiding holds only heuristically
for a hash, which is fine for benchmarking and can be swapped behind this
module boundary).
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import be_int, core_hash

COMMIT_TAG = b"Commit-v1"


@dataclass(frozen=True)
class CommitmentParams:
    """Randomness and digest lengths, in bits (both multiples of 8)."""

    r_bits: int = 128
    s_bits: int = 256

    def __post_init__(self):
        for name in ("r_bits", "s_bits"):
            val = getattr(self, name)
            if val <= 0 or val % 8 != 0:
                raise ValueError(f"{name} must be a positive multiple of 8, got {val}")

    @property
    def r_bytes(self) -> int:
        return self.r_bits // 8

    @property
    def s_bytes(self) -> int:
        return self.s_bits // 8


DEFAULT_PARAMS = CommitmentParams()


@dataclass(frozen=True)
class Opening:
    """The pair revealed to open a commitment: the color and its randomness."""

    alpha: int
    randomness: bytes


def commit(alpha: int, randomness: bytes, params: CommitmentParams = DEFAULT_PARAMS) -> bytes:
    """Commit to a color value with fresh randomness.

    Digest layout: CoreHash("Commit-v1" || <alpha>_32 || randomness).
    """
    if alpha < 0:
        raise ValueError(f"color value must be nonnegative, got {alpha}")
    if len(randomness) != params.r_bytes:
        raise ValueError(
            f"randomness must be {params.r_bytes} bytes, got {len(randomness)}"
        )
    return core_hash(COMMIT_TAG + be_int(alpha, 32) + randomness)


def verify_opening(
    digest: bytes, opening: Opening, params: CommitmentParams = DEFAULT_PARAMS
) -> bool:
    """True iff the opening recomputes the digest exactly. Malformed lengths
    simply fail verification rather than raising."""
    if len(opening.randomness) != params.r_bytes or opening.alpha < 0:
        return False
    return commit(opening.alpha, opening.randomness, params) == digest
