"""Key generation, Fiat-Shamir signing and verification (plain and
Merkle-compressed variants), permutation derivation, size accounting, and the
byte-exact file formats for keys and signatures."""

from __future__ import annotations

import hashlib
import hmac
import random
from dataclasses import dataclass

from .challenge import hash_to_edges
from .commitment import CommitmentParams, Opening, commit, verify_opening
from .encoding import be_int, core_hash, encode_context, encode_edges, vertex_bit_width
from .graphs import (
    Coloring,
    Graph,
    PartitionSpec,
    generate_planted,
)
from .merkle import (
    AuthPath,
    SharedPath,
    build_tree,
    expand_shared,
    open_path,
    shared_open,
    stored_hash_count,
    tree_depth,
    verify_path,
)

KEY_MAGIC = b"EIDK"
SIG_MAGIC = b"EIDS"
FORMAT_VERSION = 1

VARIANT_PLAIN = 0
VARIANT_MERKLE = 1
VARIANT_MERKLE_SHARED = 2
VARIANT_NAMES = {VARIANT_PLAIN: "plain", VARIANT_MERKLE: "merkle", VARIANT_MERKLE_SHARED: "merkle-shared"}

NONCE_BYTES = 16
MASTER_SEED_BYTES = 32
SIG_HEADER_BYTES = 16

REJECT_MALFORMED = "malformed"
REJECT_BAD_EDGE = "bad-edge"
REJECT_BAD_OPENING = "bad-opening"
REJECT_BAD_PATH = "bad-path"
REJECT_COLOR_RANGE = "color-range"
REJECT_MONOCHROMATIC = "monochromatic"


class MalformedInputError(ValueError):
    """Serialized input failed to parse; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class SchemeParams:
    lambda_bits: int = 256
    s_bits: int = 256
    r_bits: int = 128
    alpha_bits: int = 8

    @property
    def r_bytes(self) -> int:
        return self.r_bits // 8

    @property
    def s_bytes(self) -> int:
        return self.s_bits // 8

    def commitment_params(self) -> CommitmentParams:
        return CommitmentParams(r_bits=self.r_bits, s_bits=self.s_bits)


DEFAULT_SCHEME_PARAMS = SchemeParams()


@dataclass(frozen=True)
class PublicKey:
    graph: Graph
    k: int
    params: SchemeParams = DEFAULT_SCHEME_PARAMS

    def __post_init__(self):
        if self.graph.m < 1:
            raise ValueError("public graph must have at least one edge")
        if not (3 <= self.k <= 256):
            raise ValueError(f"color count must be in 3..256, got {self.k}")


@dataclass(frozen=True)
class SecretKey:
    coloring: Coloring
    master_seed: bytes

    def __post_init__(self):
        if len(self.master_seed) != MASTER_SEED_BYTES:
            raise ValueError(f"master seed must be {MASTER_SEED_BYTES} bytes")


@dataclass(frozen=True)
class SignaturePlain:
    t: int
    nonce: bytes
    commitments: tuple[tuple[bytes, ...], ...]  # per round: n digests
    openings: tuple[tuple[Opening, Opening], ...]


@dataclass(frozen=True)
class MerkleRound:
    opening_u: Opening
    opening_v: Opening
    path_u: AuthPath | None = None
    path_v: AuthPath | None = None
    shared: SharedPath | None = None


@dataclass(frozen=True)
class SignatureMerkle:
    t: int
    nonce: bytes
    roots: tuple[bytes, ...]
    rounds: tuple[MerkleRound, ...]
    shared_paths: bool = False


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str | None = None
    round_index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def keygen(
    n: int, k: int, p_density: float, rng: random.Random,
    params: SchemeParams = DEFAULT_SCHEME_PARAMS,
) -> tuple[PublicKey, SecretKey]:
    """Generate a planted instance as the key pair: the public graph with a
    balanced hidden k-partition, and the partition coloring as the secret.
    Redraws in the (tiny-parameter) case where no edge came out."""
    if not (3 <= k <= n):
        raise ValueError(f"need n >= k >= 3, got n={n}, k={k}")
    if k > 256:
        raise ValueError(f"color count must fit one byte on the wire, got k={k}")
    spec = PartitionSpec.balanced(n, k)
    while True:
        graph, coloring = generate_planted(spec, p_density, rng)
        if graph.m >= 1:
            break
    pk = PublicKey(graph=graph, k=k, params=params)
    sk = SecretKey(coloring=coloring, master_seed=rng.randbytes(MASTER_SEED_BYTES))
    return pk, sk


def derive_round_permutation(
    master_seed: bytes, nonce: bytes, i: int, k: int
) -> tuple[int, ...]:
    """Keyed-PRF permutation of the k colors for round i: each color gets a
    128-bit HMAC tag and the permutation sorts colors by tag (ties by color
    index). perm[c] is the masked value of color c."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    tags = []
    for c in range(k):
        tag = hmac.new(
            master_seed, nonce + be_int(i, 32) + be_int(c, 32), hashlib.sha256
        ).digest()[:16]
        tags.append((tag, c))
    order = sorted(tags)
    perm = [0] * k
    for rank, (_, c) in enumerate(order):
        perm[c] = rank
    return tuple(perm)


def _fiat_shamir_digest(
    pk: PublicKey, payloads: list[bytes], message: bytes, nonce: bytes
) -> bytes:
    # the per-signature nonce is appended after the message so it also binds
    # the challenge derivation
    return core_hash(encode_context(pk.graph, pk.k, payloads, message) + nonce)


def _round_commitments(
    pk: PublicKey, sk: SecretKey, nonce: bytes, i: int, rng: random.Random
) -> tuple[tuple[int, ...], tuple[bytes, ...], tuple[bytes, ...]]:
    """Permuted colors, per-vertex randomness, and commitments for round i."""
    cparams = pk.params.commitment_params()
    perm = derive_round_permutation(sk.master_seed, nonce, i, pk.k)
    permuted = tuple(perm[c] for c in sk.coloring.colors)
    randomness = tuple(rng.randbytes(cparams.r_bytes) for _ in range(pk.graph.n))
    digests = tuple(
        commit(permuted[v], randomness[v], cparams) for v in range(pk.graph.n)
    )
    return permuted, randomness, digests


def sign_plain(
    pk: PublicKey, sk: SecretKey, message: bytes, t: int, rng: random.Random
) -> SignaturePlain:
    """Fiat-Shamir signature carrying every round's full commitment list."""
    if t < 1:
        raise ValueError(f"round count must be >= 1, got {t}")
    nonce = rng.randbytes(NONCE_BYTES)
    rounds = [
        _round_commitments(pk, sk, nonce, i, rng) for i in range(t)
    ]
    payloads = [b"".join(digests) for _, _, digests in rounds]
    h = _fiat_shamir_digest(pk, payloads, message, nonce)
    challenges = hash_to_edges(h, t, pk.graph)
    openings = []
    for i, (u, v) in enumerate(challenges.edges):
        permuted, randomness, _ = rounds[i]
        openings.append(
            (Opening(permuted[u], randomness[u]), Opening(permuted[v], randomness[v]))
        )
    return SignaturePlain(
        t=t,
        nonce=nonce,
        commitments=tuple(digests for _, _, digests in rounds),
        openings=tuple(openings),
    )


def verify_plain(pk: PublicKey, message: bytes, sig: SignaturePlain) -> VerifyResult:
    g = pk.graph
    cparams = pk.params.commitment_params()
    if sig.t < 1 or len(sig.commitments) != sig.t or len(sig.openings) != sig.t:
        return VerifyResult(False, REJECT_MALFORMED)
    for digests in sig.commitments:
        if len(digests) != g.n or any(len(d) != cparams.s_bytes for d in digests):
            return VerifyResult(False, REJECT_MALFORMED)
    payloads = [b"".join(digests) for digests in sig.commitments]
    h = _fiat_shamir_digest(pk, payloads, message, sig.nonce)
    challenges = hash_to_edges(h, sig.t, g)
    for i, (u, v) in enumerate(challenges.edges):
        if not g.has_edge(u, v):
            return VerifyResult(False, REJECT_BAD_EDGE, i)
        op_u, op_v = sig.openings[i]
        if not verify_opening(sig.commitments[i][u], op_u, cparams):
            return VerifyResult(False, REJECT_BAD_OPENING, i)
        if not verify_opening(sig.commitments[i][v], op_v, cparams):
            return VerifyResult(False, REJECT_BAD_OPENING, i)
        if not (0 <= op_u.alpha < pk.k and 0 <= op_v.alpha < pk.k):
            return VerifyResult(False, REJECT_COLOR_RANGE, i)
        if op_u.alpha == op_v.alpha:
            return VerifyResult(False, REJECT_MONOCHROMATIC, i)
    return VerifyResult(True)


def sign_merkle(
    pk: PublicKey,
    sk: SecretKey,
    message: bytes,
    t: int,
    rng: random.Random,
    shared_paths: bool = False,
) -> SignatureMerkle:
    """Fiat-Shamir signature hashing one Merkle root per round instead of the
    full commitment list; openings carry authentication paths."""
    if t < 1:
        raise ValueError(f"round count must be >= 1, got {t}")
    nonce = rng.randbytes(NONCE_BYTES)
    rounds = [_round_commitments(pk, sk, nonce, i, rng) for i in range(t)]
    trees = [build_tree(list(digests)) for _, _, digests in rounds]
    roots = tuple(tree.root for tree in trees)
    h = _fiat_shamir_digest(pk, list(roots), message, nonce)
    challenges = hash_to_edges(h, t, pk.graph)
    sig_rounds = []
    for i, (u, v) in enumerate(challenges.edges):
        permuted, randomness, _ = rounds[i]
        op_u = Opening(permuted[u], randomness[u])
        op_v = Opening(permuted[v], randomness[v])
        if shared_paths:
            sig_rounds.append(
                MerkleRound(op_u, op_v, shared=shared_open(trees[i], u, v))
            )
        else:
            sig_rounds.append(
                MerkleRound(
                    op_u, op_v,
                    path_u=open_path(trees[i], u),
                    path_v=open_path(trees[i], v),
                )
            )
    return SignatureMerkle(
        t=t, nonce=nonce, roots=roots, rounds=tuple(sig_rounds),
        shared_paths=shared_paths,
    )


def verify_merkle(pk: PublicKey, message: bytes, sig: SignatureMerkle) -> VerifyResult:
    g = pk.graph
    cparams = pk.params.commitment_params()
    if sig.t < 1 or len(sig.roots) != sig.t or len(sig.rounds) != sig.t:
        return VerifyResult(False, REJECT_MALFORMED)
    h = _fiat_shamir_digest(pk, list(sig.roots), message, sig.nonce)
    challenges = hash_to_edges(h, sig.t, g)
    for i, (u, v) in enumerate(challenges.edges):
        if not g.has_edge(u, v):
            return VerifyResult(False, REJECT_BAD_EDGE, i)
        rnd = sig.rounds[i]
        c_u = commit(rnd.opening_u.alpha, rnd.opening_u.randomness, cparams) \
            if len(rnd.opening_u.randomness) == cparams.r_bytes else None
        c_v = commit(rnd.opening_v.alpha, rnd.opening_v.randomness, cparams) \
            if len(rnd.opening_v.randomness) == cparams.r_bytes else None
        if c_u is None or c_v is None:
            return VerifyResult(False, REJECT_BAD_OPENING, i)
        if rnd.shared is not None:
            if (rnd.shared.u, rnd.shared.v) != (u, v):
                return VerifyResult(False, REJECT_BAD_PATH, i)
            try:
                path_u, path_v = expand_shared(rnd.shared, g.n, c_u)
            except ValueError:
                return VerifyResult(False, REJECT_BAD_PATH, i)
        else:
            path_u, path_v = rnd.path_u, rnd.path_v
            if path_u is None or path_v is None:
                return VerifyResult(False, REJECT_MALFORMED, i)
        if not verify_path(sig.roots[i], u, g.n, c_u, path_u):
            return VerifyResult(False, REJECT_BAD_PATH, i)
        if not verify_path(sig.roots[i], v, g.n, c_v, path_v):
            return VerifyResult(False, REJECT_BAD_PATH, i)
        a_u, a_v = rnd.opening_u.alpha, rnd.opening_v.alpha
        if not (0 <= a_u < pk.k and 0 <= a_v < pk.k):
            return VerifyResult(False, REJECT_COLOR_RANGE, i)
        if a_u == a_v:
            return VerifyResult(False, REJECT_MONOCHROMATIC, i)
    return VerifyResult(True)


def signature_size_bits(
    n: int,
    t: int,
    variant: str,
    lambda_bits: int = 256,
    s_bits: int = 256,
    r_bits: int = 128,
    alpha_bits: int = 8,
    s_bar: float = 0.0,
) -> float:
    """Analytic signature body size in bits.

    plain:          t*n*s + 2t(|alpha| + |r|)
    merkle:         t*lambda + 2t(|alpha| + |r| + lambda*ceil(log2 n))
    merkle-shared:  t*lambda + 2t(|alpha| + |r|) + t*lambda*(2*ceil(log2 n) - s_bar)
    """
    depth = tree_depth(n)
    opening_bits = 2 * t * (alpha_bits + r_bits)
    if variant == "plain":
        size = t * n * s_bits + opening_bits
    elif variant == "merkle":
        size = t * lambda_bits + 2 * t * (alpha_bits + r_bits + lambda_bits * depth)
    elif variant == "merkle-shared":
        size = t * lambda_bits + opening_bits + t * lambda_bits * (2 * depth - s_bar)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return int(size) if float(size).is_integer() else size


# --- serialization -----------------------------------------------------------


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int, what: str) -> bytes:
        if self.pos + count > len(self.data):
            raise MalformedInputError(f"truncated input while reading {what}", self.pos)
        chunk = self.data[self.pos : self.pos + count]
        self.pos += count
        return chunk

    def take_int(self, width_bits: int, what: str) -> int:
        return int.from_bytes(self.take(width_bits // 8, what), "big")

    def expect_end(self):
        if self.pos != len(self.data):
            raise MalformedInputError(
                f"{len(self.data) - self.pos} trailing bytes after signature body", self.pos
            )


def serialize_public_key(pk: PublicKey) -> bytes:
    out = bytearray(KEY_MAGIC)
    out += bytes([FORMAT_VERSION, 0])
    out += be_int(pk.graph.n, 64)
    out += be_int(pk.k, 32)
    out += encode_edges(pk.graph)
    return bytes(out)


def deserialize_public_key(data: bytes, params: SchemeParams = DEFAULT_SCHEME_PARAMS) -> PublicKey:
    r = _Reader(data)
    if r.take(4, "magic") != KEY_MAGIC:
        raise MalformedInputError("bad key file magic", 0)
    version, kind = r.take(2, "version/kind")
    if version != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported key format version {version}", 4)
    if kind != 0:
        raise MalformedInputError("not a public key file", 5)
    n = r.take_int(64, "vertex count")
    k = r.take_int(32, "color count")
    m = r.take_int(64, "edge count")
    width = vertex_bit_width(n)
    packed = r.take((2 * width * m + 7) // 8, "edge list")
    r.expect_end()
    bits = int.from_bytes(packed, "big")
    total_bits = len(packed) * 8
    edges = []
    offset = 0
    for _ in range(m):
        u = (bits >> (total_bits - offset - width)) & ((1 << width) - 1)
        offset += width
        v = (bits >> (total_bits - offset - width)) & ((1 << width) - 1)
        offset += width
        edges.append((u, v))
    try:
        graph = Graph(n=n, edges=tuple(edges))
        return PublicKey(graph=graph, k=k, params=params)
    except ValueError as exc:
        raise MalformedInputError(f"inconsistent public key fields: {exc}", len(data)) from exc


def serialize_secret_key(sk: SecretKey) -> bytes:
    out = bytearray(KEY_MAGIC)
    out += bytes([FORMAT_VERSION, 1])
    out += be_int(sk.coloring.n, 64)
    out += be_int(sk.coloring.k, 32)
    out += bytes(sk.coloring.colors)
    out += sk.master_seed
    return bytes(out)


def deserialize_secret_key(data: bytes) -> SecretKey:
    r = _Reader(data)
    if r.take(4, "magic") != KEY_MAGIC:
        raise MalformedInputError("bad key file magic", 0)
    version, kind = r.take(2, "version/kind")
    if version != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported key format version {version}", 4)
    if kind != 1:
        raise MalformedInputError("not a secret key file", 5)
    n = r.take_int(64, "vertex count")
    k = r.take_int(32, "color count")
    colors = r.take(n, "coloring")
    seed = r.take(MASTER_SEED_BYTES, "master seed")
    r.expect_end()
    try:
        return SecretKey(coloring=Coloring(colors=tuple(colors), k=k), master_seed=seed)
    except ValueError as exc:
        raise MalformedInputError(f"inconsistent secret key fields: {exc}", len(data)) from exc


def _sig_header(variant: int, t: int, n: int) -> bytes:
    out = bytearray(SIG_MAGIC)
    out += bytes([FORMAT_VERSION, variant])
    out += be_int(t, 32)
    out += be_int(n, 32)
    out += b"\x00\x00"
    return bytes(out)


def serialize_signature(
    sig: SignaturePlain | SignatureMerkle, pk: PublicKey
) -> bytes:
    params = pk.params
    n = pk.graph.n
    out = bytearray()
    if isinstance(sig, SignaturePlain):
        out += _sig_header(VARIANT_PLAIN, sig.t, n)
        out += sig.nonce
        for i in range(sig.t):
            for d in sig.commitments[i]:
                out += d
            for op in sig.openings[i]:
                out += bytes([op.alpha]) + op.randomness
        return bytes(out)
    variant = VARIANT_MERKLE_SHARED if sig.shared_paths else VARIANT_MERKLE
    out += _sig_header(variant, sig.t, n)
    out += sig.nonce
    for root in sig.roots:
        out += root
    for rnd in sig.rounds:
        for op in (rnd.opening_u, rnd.opening_v):
            out += bytes([op.alpha]) + op.randomness
        if sig.shared_paths:
            for sib in rnd.shared.u_siblings:
                out += sib
            for sib in rnd.shared.v_siblings:
                out += sib
        else:
            for path in (rnd.path_u, rnd.path_v):
                for sib in path.siblings:
                    out += sib
    return bytes(out)


def deserialize_signature(
    data: bytes, pk: PublicKey, message: bytes | None = None
) -> SignaturePlain | SignatureMerkle:
    """Parse a signature file. The merkle-shared variant needs the message:
    its per-round path layout depends on the challenge edges, which are only
    recomputable from the roots and the message."""
    params = pk.params
    cparams = params.commitment_params()
    n = pk.graph.n
    depth = tree_depth(n)
    r = _Reader(data)
    if r.take(4, "magic") != SIG_MAGIC:
        raise MalformedInputError("bad signature magic", 0)
    version, variant = r.take(2, "version/variant")
    if version != FORMAT_VERSION:
        raise MalformedInputError(f"unsupported signature format version {version}", 4)
    if variant not in VARIANT_NAMES:
        raise MalformedInputError(f"unknown signature variant {variant}", 5)
    t = r.take_int(32, "round count")
    if t < 1:
        raise MalformedInputError("round count must be >= 1", 6)
    header_n = r.take_int(32, "vertex count")
    if header_n != n:
        raise MalformedInputError(
            f"signature was made for n={header_n}, public key has n={n}", 10
        )
    r.take(2, "reserved")
    nonce = r.take(NONCE_BYTES, "nonce")

    def read_opening(i: int) -> Opening:
        alpha = r.take(1, f"round {i} opening color")[0]
        rand = r.take(cparams.r_bytes, f"round {i} opening randomness")
        return Opening(alpha, rand)

    if variant == VARIANT_PLAIN:
        commitments = []
        openings = []
        for i in range(t):
            digests = tuple(
                bytes(r.take(cparams.s_bytes, f"round {i} commitment {v}"))
                for v in range(n)
            )
            commitments.append(digests)
            openings.append((read_opening(i), read_opening(i)))
        r.expect_end()
        return SignaturePlain(
            t=t, nonce=nonce, commitments=tuple(commitments), openings=tuple(openings)
        )

    roots = tuple(bytes(r.take(32, f"root {i}")) for i in range(t))
    rounds = []
    if variant == VARIANT_MERKLE:
        for i in range(t):
            op_u = read_opening(i)
            op_v = read_opening(i)
            path_u = AuthPath(
                leaf_index=-1,
                siblings=tuple(bytes(r.take(32, f"round {i} path-u sibling")) for _ in range(depth)),
            )
            path_v = AuthPath(
                leaf_index=-1,
                siblings=tuple(bytes(r.take(32, f"round {i} path-v sibling")) for _ in range(depth)),
            )
            rounds.append(MerkleRound(op_u, op_v, path_u=path_u, path_v=path_v))
        r.expect_end()
        sig = SignatureMerkle(
            t=t, nonce=nonce, roots=roots, rounds=tuple(rounds), shared_paths=False
        )
        # leaf indices in paths come from the challenges; fix them up if known
        return _attach_leaf_indices(sig, pk, message) if message is not None else sig

    if message is None:
        raise MalformedInputError(
            "merkle-shared signature needs the message to determine path layout", r.pos
        )
    h = _fiat_shamir_digest(pk, list(roots), message, nonce)
    challenges = hash_to_edges(h, t, pk.graph)
    for i, (u, v) in enumerate(challenges.edges):
        op_u = read_opening(i)
        op_v = read_opening(i)
        u_sibs = tuple(bytes(r.take(32, f"round {i} u-sibling")) for _ in range(depth))
        lca = (u ^ v).bit_length()
        v_count = lca - (1 if lca == 1 else 0)
        v_sibs = tuple(bytes(r.take(32, f"round {i} v-sibling")) for _ in range(v_count))
        rounds.append(
            MerkleRound(
                op_u, op_v,
                shared=SharedPath(
                    u=u, v=v, u_siblings=u_sibs, v_siblings=v_sibs,
                    shared_count=depth - lca,
                ),
            )
        )
    r.expect_end()
    return SignatureMerkle(
        t=t, nonce=nonce, roots=roots, rounds=tuple(rounds), shared_paths=True
    )


def _attach_leaf_indices(
    sig: SignatureMerkle, pk: PublicKey, message: bytes
) -> SignatureMerkle:
    h = _fiat_shamir_digest(pk, list(sig.roots), message, sig.nonce)
    challenges = hash_to_edges(h, sig.t, pk.graph)
    rounds = []
    for (u, v), rnd in zip(challenges.edges, sig.rounds):
        rounds.append(
            MerkleRound(
                rnd.opening_u,
                rnd.opening_v,
                path_u=AuthPath(leaf_index=u, siblings=rnd.path_u.siblings),
                path_v=AuthPath(leaf_index=v, siblings=rnd.path_v.siblings),
            )
        )
    return SignatureMerkle(
        t=sig.t, nonce=sig.nonce, roots=sig.roots, rounds=tuple(rounds),
        shared_paths=False,
    )


def serialized_body_bits(sig: SignaturePlain | SignatureMerkle, pk: PublicKey) -> int:
    """Bit size of the serialized signature body (everything after the fixed
    header and nonce)."""
    return (len(serialize_signature(sig, pk)) - SIG_HEADER_BYTES - NONCE_BYTES) * 8


def shared_savings(sig: SignatureMerkle, n: int) -> tuple[float, float]:
    """Average per-round shared-hash counts under the two accounting
    conventions: suffix-only (levels above the LCA), and including the
    mutual-leaf-sibling level when the two leaves share a parent."""
    if not sig.shared_paths:
        raise ValueError("signature does not use shared paths")
    depth = tree_depth(n)
    suffix = 0
    with_sibling = 0
    for rnd in sig.rounds:
        sp = rnd.shared
        suffix += sp.shared_count
        with_sibling += 2 * depth - stored_hash_count(n, sp.u, sp.v)
    return suffix / sig.t, with_sibling / sig.t
