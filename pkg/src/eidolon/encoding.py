"""Canonical bit-exact serialization with domain separation.

Every byte string that gets hashed by signer and verifier is produced here, so
both sides agree bit-for-bit: the context encoding for the Fiat-Shamir digest,
the edge-list encoding, and fixed-width big-endian vertex fields.
"""

from __future__ import annotations

import hashlib

from .graphs import Graph

#: Protocol-level domain separation tag, hashed as raw ASCII with no length prefix.
CONTEXT_TAG = b"FS-GkColor-v1"

#: Digest length of the core hash, in bits.
LAMBDA_BITS = 256


def core_hash(data: bytes) -> bytes:
    """The fixed 256-bit hash used everywhere (commitments, Merkle nodes, Fiat-Shamir)."""
    return hashlib.sha256(data).digest()


def be_int(value: int, width_bits: int) -> bytes:
    """Big-endian fixed-width integer field; width must be a multiple of 8."""
    if width_bits % 8 != 0:
        raise ValueError(f"byte-field width must be a multiple of 8, got {width_bits}")
    if value < 0 or value >= 1 << width_bits:
        raise OverflowError(f"value {value} does not fit in {width_bits} bits")
    return value.to_bytes(width_bits // 8, "big")


class BitWriter:
    """Accumulates big-endian bit fields, most significant bit first.
    Finalization pads with zero bits to a byte boundary."""

    def __init__(self):
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, width: int) -> None:
        if width < 1:
            raise ValueError(f"field width must be >= 1, got {width}")
        if value < 0 or value >= 1 << width:
            raise OverflowError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width

    def getvalue(self) -> bytes:
        pad = (-self._nbits) % 8
        return (self._acc << pad).to_bytes((self._nbits + pad) // 8, "big")


def vertex_bit_width(n: int) -> int:
    """Width of a vertex index field: ceil(log2 n) bits (n >= 2)."""
    if n < 2:
        raise ValueError(f"need n >= 2 for a vertex bit field, got n={n}")
    return max(1, (n - 1).bit_length())


def encode_vertex(v: int, n: int) -> tuple[int, int]:
    """Vertex index as a (value, width) big-endian bit field of width ceil(log2 n)."""
    width = vertex_bit_width(n)
    if not (0 <= v < n):
        raise ValueError(f"vertex {v} out of range for n={n}")
    return v, width


def encode_vertex_bytes(v: int, n: int) -> bytes:
    """Vertex index padded to whole bytes, for byte-oriented hash inputs."""
    value, width = encode_vertex(v, n)
    return value.to_bytes((width + 7) // 8, "big")


def encode_edges(g: Graph) -> bytes:
    """<m>_64 followed by the edge pairs enc(u)||enc(v) in canonical order,
    bit-packed contiguously and zero-padded to a byte boundary at the end."""
    out = bytearray(be_int(g.m, 64))
    if g.m:
        width = vertex_bit_width(g.n)
        w = BitWriter()
        for u, v in g.edges:
            w.write(u, width)
            w.write(v, width)
        out += w.getvalue()
    return bytes(out)


def encode_context(g: Graph, k: int, payloads: list[bytes], message: bytes) -> bytes:
    """Canonical context string both parties hash for challenge derivation:

        TAG || <n>_64 || <k>_32 || <m>_64 || Edges(E) || <t>_32
            || X_0 || ... || X_{t-1} || <|M| bytes>_64 || M
    """
    out = bytearray(CONTEXT_TAG)
    out += be_int(g.n, 64)
    out += be_int(k, 32)
    out += be_int(g.m, 64)
    out += encode_edges(g)
    out += be_int(len(payloads), 32)
    for x in payloads:
        out += x
    out += be_int(len(message), 64)
    out += message
    return bytes(out)
