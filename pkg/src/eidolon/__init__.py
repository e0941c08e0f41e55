"""Eidolon: a graph-coloring based signature scheme with planted hard
instances, Merkle-compressed Fiat-Shamir signing, and a coloring-attack
harness."""

from .graphs import (
    Coloring,
    Graph,
    PartitionSpec,
    adjusted_edge_probability,
    generate_er,
    generate_planted,
    is_valid_coloring,
)
from .sigscheme import (
    PublicKey,
    SecretKey,
    keygen,
    sign_merkle,
    sign_plain,
    signature_size_bits,
    verify_merkle,
    verify_plain,
)

__all__ = [
    "Coloring",
    "Graph",
    "PartitionSpec",
    "PublicKey",
    "SecretKey",
    "adjusted_edge_probability",
    "generate_er",
    "generate_planted",
    "is_valid_coloring",
    "keygen",
    "sign_merkle",
    "sign_plain",
    "signature_size_bits",
    "verify_merkle",
    "verify_plain",
]
