"""Merkle-tree vector commitment over per-vertex commitment digests.

Leaves are padded to the next power of two so every authentication path has
exactly ceil(log2 n) siblings, which keeps the signature size formula exact.
Path directions are never stored: bit b of the leaf index says whether the
node is the left (0) or right (1) child at level b.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import core_hash, encode_vertex_bytes

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"
PAD_LEAF = core_hash(b"\x02" + b"pad")


def leaf_hash(v: int, n: int, commitment: bytes) -> bytes:
    """Leaf digest: CoreHash(0x00 || enc(v) padded to whole bytes || c_v)."""
    return core_hash(LEAF_PREFIX + encode_vertex_bytes(v, n) + commitment)


def node_hash(left: bytes, right: bytes) -> bytes:
    return core_hash(NODE_PREFIX + left + right)


def tree_depth(n: int) -> int:
    """Number of sibling hashes on any path: ceil(log2 n)."""
    if n < 2:
        raise ValueError(f"need at least 2 leaves, got {n}")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class MerkleTree:
    leaf_count: int
    levels: tuple[tuple[bytes, ...], ...]  # levels[0] = padded leaves, last = (root,)

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class AuthPath:
    """Sibling hashes from the leaf level up to just below the root."""

    leaf_index: int
    siblings: tuple[bytes, ...]


@dataclass(frozen=True)
class SharedPath:
    """Joint opening of two leaves with the common path suffix stored once.

    `u_siblings` is u's full sibling list. For v, only the levels below the LCA
    are kept; siblings at and above the LCA equal u's, and when u and v are
    mutual leaf-siblings v's level-0 sibling (the leaf of u itself) is dropped
    too, since the verifier recomputes it from u's opening.
    """

    u: int
    v: int
    u_siblings: tuple[bytes, ...]
    v_siblings: tuple[bytes, ...]
    shared_count: int


def build_tree(commitments: list[bytes]) -> MerkleTree:
    n = len(commitments)
    depth = tree_depth(n)
    width = 1 << depth
    level = [leaf_hash(v, n, c) for v, c in enumerate(commitments)]
    level.extend([PAD_LEAF] * (width - n))
    levels = [tuple(level)]
    while len(level) > 1:
        level = [node_hash(level[i], level[i + 1]) for i in range(0, len(level), 2)]
        levels.append(tuple(level))
    return MerkleTree(leaf_count=n, levels=tuple(levels))


def open_path(tree: MerkleTree, v: int) -> AuthPath:
    if not (0 <= v < tree.leaf_count):
        raise IndexError(f"leaf index {v} out of range for {tree.leaf_count} leaves")
    siblings = []
    idx = v
    for level in range(tree.depth):
        siblings.append(tree.levels[level][idx ^ 1])
        idx >>= 1
    return AuthPath(leaf_index=v, siblings=tuple(siblings))


def verify_path(root: bytes, v: int, n: int, commitment: bytes, path: AuthPath) -> bool:
    """Recompute the leaf from (v, commitment), fold the siblings upward using
    v's bits for left/right order, and compare to the root. Malformed input
    verifies false rather than raising."""
    try:
        depth = tree_depth(n)
    except ValueError:
        return False
    if not (0 <= v < n) or len(path.siblings) != depth:
        return False
    node = leaf_hash(v, n, commitment)
    idx = v
    for sib in path.siblings:
        if len(sib) != 32:
            return False
        if idx & 1:
            node = node_hash(sib, node)
        else:
            node = node_hash(node, sib)
        idx >>= 1
    return node == root


def _lca_level(u: int, v: int) -> int:
    """Level of the lowest common ancestor of two leaf indices."""
    return (u ^ v).bit_length()


def shared_open(tree: MerkleTree, u: int, v: int) -> SharedPath:
    if u == v:
        raise ValueError(f"shared opening needs two distinct leaves, got {u} twice")
    pu = open_path(tree, u)
    pv = open_path(tree, v)
    depth = tree.depth
    lca = _lca_level(u, v)
    shared = depth - lca
    # below the LCA, keep v's own siblings; drop level 0 if u, v are mutual siblings
    lo = 1 if lca == 1 else 0
    return SharedPath(
        u=u,
        v=v,
        u_siblings=pu.siblings,
        v_siblings=pv.siblings[lo:lca],
        shared_count=shared,
    )


def expand_shared(
    shared: SharedPath, n: int, commitment_u: bytes
) -> tuple[AuthPath, AuthPath]:
    """Reconstruct the two full authentication paths from a shared opening.
    Needs u's commitment to rebuild v's level-0 sibling when u, v are mutual
    leaf-siblings."""
    depth = tree_depth(n)
    lca = _lca_level(shared.u, shared.v)
    v_sibs: list[bytes] = []
    if lca == 1:
        v_sibs.append(leaf_hash(shared.u, n, commitment_u))
    v_sibs.extend(shared.v_siblings)
    if len(v_sibs) != lca:
        raise ValueError(
            f"shared path for ({shared.u},{shared.v}) carries {len(v_sibs)} low "
            f"siblings, expected {lca}"
        )
    # at and above the LCA the two ancestors coincide, so the siblings are u's
    v_sibs.extend(shared.u_siblings[lca:])
    return (
        AuthPath(leaf_index=shared.u, siblings=shared.u_siblings),
        AuthPath(leaf_index=shared.v, siblings=tuple(v_sibs)),
    )


def stored_hash_count(n: int, u: int, v: int) -> int:
    """Number of sibling hashes a SharedPath for (u, v) actually stores."""
    depth = tree_depth(n)
    lca = _lca_level(u, v)
    return depth + lca - (1 if lca == 1 else 0)
