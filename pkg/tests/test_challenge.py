import random
from collections import Counter

import pytest
from scipy import stats

from eidolon.challenge import hash_to_edges
from eidolon.encoding import core_hash
from eidolon.graphs import Graph, generate_er

# pinned at first build from h = CoreHash(b"golden") over the 3-edge graph
GOLDEN_EDGES = ((0, 2), (0, 2), (3, 9), (3, 9), (3, 9), (0, 2))


def golden_graph():
    return Graph(16, ((0, 1), (0, 2), (3, 9)))


class TestHashToEdges:
    def test_deterministic(self):
        g = generate_er(20, 0.4, random.Random(1))
        h = core_hash(b"abc")
        assert hash_to_edges(h, 8, g) == hash_to_edges(h, 8, g)

    def test_single_edge_graph_constant(self):
        g = Graph(4, ((1, 3),))
        cs = hash_to_edges(core_hash(b"x"), 10, g)
        assert cs.edges == ((1, 3),) * 10

    def test_edges_come_from_graph(self):
        g = generate_er(20, 0.3, random.Random(2))
        cs = hash_to_edges(core_hash(b"y"), 50, g)
        assert all(e in g.edge_set for e in cs.edges)
        assert len(cs.edges) == len(cs.rejection_counts) == 50

    def test_golden_vector(self):
        cs = hash_to_edges(core_hash(b"golden"), 6, golden_graph())
        assert cs.edges == GOLDEN_EDGES
        assert cs.rejection_counts == (0,) * 6

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError):
            hash_to_edges(core_hash(b"z"), 4, Graph(3, ()))

    def test_zero_rounds_rejected(self):
        with pytest.raises(ValueError):
            hash_to_edges(core_hash(b"z"), 0, Graph(3, ((0, 1),)))

    def test_prefix_stability_under_round_count(self):
        # each index has its own hash stream, so extending t keeps the prefix
        g = generate_er(12, 0.5, random.Random(3))
        h = core_hash(b"prefix")
        short = hash_to_edges(h, 5, g)
        long = hash_to_edges(h, 40, g)
        assert long.edges[:5] == short.edges

    def test_distinct_digests_distinct_challenges(self):
        g = generate_er(30, 0.5, random.Random(4))
        a = hash_to_edges(core_hash(b"a"), 32, g)
        b = hash_to_edges(core_hash(b"b"), 32, g)
        assert a.edges != b.edges


class TestRejectionSampling:
    def test_power_of_two_edge_count_never_rejects(self):
        # m = 64 divides 2^256, so the acceptance region is everything
        pairs = [(u, v) for u in range(64) for v in range(u + 1, 64)]
        g = Graph(64, tuple(pairs[:64]))
        cs = hash_to_edges(core_hash(b"pow2"), 1000, g)
        assert cs.rejection_counts == (0,) * 1000

    def test_forced_rejections_with_narrow_width(self):
        # width 2 and m = 3 rejects value 3, i.e. 1/4 of draws
        g = Graph(4, ((0, 1), (0, 2), (0, 3)))
        cs = hash_to_edges(core_hash(b"narrow"), 2000, g, width_bits=2)
        total = sum(cs.rejection_counts)
        assert total > 0
        # mean rejections per index is 1/3; allow a wide band
        assert 0.2 < total / 2000 < 0.5

    def test_narrow_width_still_uniform(self):
        g = Graph(4, ((0, 1), (0, 2), (0, 3)))
        cs = hash_to_edges(core_hash(b"narrow2"), 6000, g, width_bits=2)
        counts = Counter(cs.edges)
        _, p = stats.chisquare([counts[e] for e in g.edges])
        assert p > 0.001

    def test_invalid_width(self):
        g = Graph(3, ((0, 1),))
        with pytest.raises(ValueError):
            hash_to_edges(core_hash(b"w"), 1, g, width_bits=0)
        with pytest.raises(ValueError):
            hash_to_edges(core_hash(b"w"), 1, g, width_bits=300)


class TestUniformity:
    def test_chi_square_over_many_edges(self):
        g = generate_er(16, 0.5, random.Random(7))
        t = 100_000
        cs = hash_to_edges(core_hash(b"uniform"), t, g)
        counts = Counter(cs.edges)
        observed = [counts[e] for e in g.edges]
        _, p = stats.chisquare(observed)
        assert p > 0.001

    def test_index_streams_are_independent_looking(self):
        # identical per-index marginals would be a red flag: each index must
        # see its own stream, not a shared one
        g = generate_er(16, 0.5, random.Random(8))
        cs = hash_to_edges(core_hash(b"indep"), 64, g)
        assert len(set(cs.edges)) > 1
