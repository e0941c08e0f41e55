import random
from pathlib import Path

import pytest

from eidolon.encoding import (
    BitWriter,
    CONTEXT_TAG,
    be_int,
    encode_context,
    encode_edges,
    encode_vertex,
    encode_vertex_bytes,
    vertex_bit_width,
)
from eidolon.graphs import Graph, generate_er

VECTOR_DIR = Path(__file__).parent / "vectors"


def decode_context(data: bytes) -> tuple:
    """Test-only decoder: walks the declared field widths and reconstructs the
    header fields, edge list, payload block, and message."""
    pos = len(CONTEXT_TAG)
    assert data[:pos] == CONTEXT_TAG

    def take_int(width_bits):
        nonlocal pos
        val = int.from_bytes(data[pos : pos + width_bits // 8], "big")
        pos += width_bits // 8
        return val

    n = take_int(64)
    k = take_int(32)
    m_header = take_int(64)
    m_edges = take_int(64)
    width = vertex_bit_width(n)
    packed_len = (2 * width * m_edges + 7) // 8
    packed = data[pos : pos + packed_len]
    pos += packed_len
    bits = int.from_bytes(packed, "big")
    total = packed_len * 8
    edges = []
    off = 0
    for _ in range(m_edges):
        u = (bits >> (total - off - width)) & ((1 << width) - 1)
        off += width
        v = (bits >> (total - off - width)) & ((1 << width) - 1)
        off += width
        edges.append((u, v))
    t = take_int(32)
    # payloads are opaque; the caller supplies their lengths
    return n, k, m_header, m_edges, tuple(edges), t, pos


class TestBitWriter:
    def test_msb_first_packing(self):
        w = BitWriter()
        w.write(0b101, 3)
        w.write(0b01, 2)
        assert w.getvalue() == bytes([0b10101000])

    def test_width_overflow(self):
        w = BitWriter()
        with pytest.raises(OverflowError):
            w.write(4, 2)

    def test_identical_sequences_identical_bytes(self):
        a, b = BitWriter(), BitWriter()
        for writer in (a, b):
            writer.write(3, 4)
            writer.write(200, 9)
        assert a.getvalue() == b.getvalue()


class TestEncodeVertex:
    def test_examples(self):
        assert encode_vertex(0, 16) == (0, 4)
        assert encode_vertex(15, 16) == (15, 4)
        assert encode_vertex(12, 200) == (12, 8)  # ceil(log2 200) = 8

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            encode_vertex(16, 16)

    def test_byte_padded_form(self):
        assert encode_vertex_bytes(12, 200) == b"\x0c"
        assert encode_vertex_bytes(5, 1000) == b"\x00\x05"  # width 10 -> 2 bytes


class TestEncodeEdges:
    def test_empty_graph(self):
        assert encode_edges(Graph(4, ())) == bytes(8)

    def test_single_edge_width_two(self):
        # n=4: widths 2, pair (0,1) -> bits 00 01 padded to 0001_0000
        data = encode_edges(Graph(4, ((0, 1),)))
        assert data == be_int(1, 64) + bytes([0b00010000])

    def test_two_edges_width_four(self):
        data = encode_edges(Graph(16, ((0, 1), (0, 2))))
        assert data == be_int(2, 64) + bytes([0x01, 0x02])


class TestEncodeContext:
    def test_total_length_toy_parameters(self):
        # n=16, m=59, width 4 so 59 edges pack to exactly 59 bytes:
        # 13 tag + 8 n + 4 k + 8 m + (8 + 59) edges + 4 t + 8*32 payloads
        # + 8 |M| + 0 = 368 bytes
        all_pairs = [(u, v) for u in range(16) for v in range(u + 1, 16)]
        g = Graph(16, tuple(all_pairs[:59]))
        data = encode_context(g, 3, [bytes(32)] * 8, b"")
        assert len(data) == 368

    def test_distinct_graphs_distinct_encodings(self):
        g1 = Graph(8, ((0, 1), (2, 3)))
        g2 = Graph(8, ((0, 1), (2, 4)))
        assert encode_context(g1, 3, [], b"") != encode_context(g2, 3, [], b"")

    def test_deterministic(self):
        g = Graph(8, ((0, 1),))
        args = (g, 3, [b"\x01" * 32], b"msg")
        assert encode_context(*args) == encode_context(*args)

    def test_injectivity_on_random_corpus(self):
        rng = random.Random(123)
        seen = set()
        count = 10_000
        for i in range(count):
            n = rng.randrange(2, 12)
            g = generate_er(n, rng.random(), random.Random(rng.randrange(1 << 30)))
            k = rng.randrange(1, 8)
            payloads = [rng.randbytes(32) for _ in range(rng.randrange(0, 3))]
            # counter suffix keeps the random tuples pairwise distinct
            msg = rng.randbytes(rng.randrange(0, 8)) + i.to_bytes(2, "big")
            seen.add(encode_context(g, k, payloads, msg))
        assert len(seen) == count

    def test_decoder_reconstructs_fields(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randrange(2, 40)
            g = generate_er(n, 0.3, random.Random(rng.randrange(1 << 30)))
            k = rng.randrange(1, 10)
            payloads = [rng.randbytes(32) for _ in range(rng.randrange(0, 4))]
            msg = rng.randbytes(rng.randrange(0, 16))
            data = encode_context(g, k, payloads, msg)
            dn, dk, m_header, m_edges, edges, t, pos = decode_context(data)
            assert (dn, dk) == (n, k)
            assert m_header == m_edges == g.m
            assert edges == g.edges
            assert t == len(payloads)
            rest = data[pos:]
            payload_block = rest[: 32 * len(payloads)]
            assert payload_block == b"".join(payloads)
            msg_len = int.from_bytes(rest[32 * len(payloads) : 32 * len(payloads) + 8], "big")
            assert msg_len == len(msg)
            assert rest[32 * len(payloads) + 8 :] == msg

    @pytest.mark.parametrize(
        "name,builder",
        [
            ("ctx_small", lambda: (Graph(4, ((0, 1),)), 3, [], b"")),
            (
                "ctx_medium",
                lambda: (
                    Graph(16, ((0, 1), (0, 2), (3, 9))),
                    4,
                    [b"\xaa" * 32, b"\xbb" * 32],
                    b"hello world",
                ),
            ),
            (
                "ctx_large",
                lambda: (
                    Graph(200, tuple((i, i + 1) for i in range(0, 20, 2))),
                    5,
                    [bytes(range(32))],
                    bytes.fromhex("deadbeef"),
                ),
            ),
        ],
    )
    def test_golden_vectors(self, name, builder):
        expected = bytes.fromhex((VECTOR_DIR / f"{name}.hex").read_text().strip())
        g, k, payloads, msg = builder()
        assert encode_context(g, k, payloads, msg) == expected

    def test_overflow_checks(self):
        g = Graph(4, ((0, 1),))
        with pytest.raises(OverflowError):
            be_int(1 << 32, 32)
