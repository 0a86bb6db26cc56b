import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horofilter import (
    Anchor,
    BusemannField,
    DisconnectedGraphError,
    GenSpec,
    Graph,
    HorofilterError,
    MultiAnchorConfig,
    busemann_field,
    edge_gaps,
    generate,
    load_edge_list,
    resolve_anchor,
    suggest_anchor,
)
from horofilter.boundary import field_to_csv

from ._oracles import floyd_warshall


class TestBusemannField:
    def test_p5_frozen_from_bfs_oracle(self, p5):
        # two BFS rows: d(., 4) = [4,3,2,1,0], d(0, 4) = 4, subtract
        fld = busemann_field(p5, Anchor(0, 4))
        assert fld.beta.tolist() == [0, -1, -2, -3, -4]

    def test_base_is_always_zero(self):
        for spec in (
            GenSpec("cycle", {"n": 7}),
            GenSpec("balanced_tree", {"branching": 2, "depth": 3}),
            GenSpec("erdos_renyi", {"n": 25, "p": 0.2}, seed=3),
        ):
            g = generate(spec)
            fld = busemann_field(g, Anchor(2, 5))
            assert fld.beta[2] == 0

    def test_target_height_is_minus_distance(self, p5):
        fld = busemann_field(p5, Anchor(1, 4))
        assert fld.beta[4] == -3

    def test_star_heights(self, star4):
        # BFS oracle: d(., leaf 1) = [1, 0, 2, 2, 2], d(center, leaf) = 1
        fld = busemann_field(star4, Anchor(0, 1))
        assert fld.beta.tolist() == [0, -1, 1, 1, 1]

    def test_anchor_must_differ(self):
        with pytest.raises(HorofilterError):
            Anchor(3, 3)

    def test_anchor_out_of_range(self, p5):
        with pytest.raises(HorofilterError, match="out of range"):
            busemann_field(p5, Anchor(0, 11))

    def test_unreachable_target_errors(self):
        g = load_edge_list("0 1\n2 3", allow_disconnected=True)
        with pytest.raises(DisconnectedGraphError, match="unreachable"):
            busemann_field(g, Anchor(0, 2))

    def test_integer_dtype(self, p5):
        fld = busemann_field(p5, Anchor(0, 4))
        assert fld.beta.dtype == np.int64


class TestEdgeGaps:
    def test_p5_all_ones(self, p5):
        fld = busemann_field(p5, Anchor(0, 4))
        summary = edge_gaps(p5, fld)
        assert summary.gaps.tolist() == [1, 1, 1, 1]
        assert summary.c_min == 1
        assert summary.c_max == 1

    def test_constant_field_all_zero(self, p5):
        # degenerate configuration, constructed directly
        fld = BusemannField(anchor=Anchor(0, 4), beta=np.zeros(5, dtype=np.int64))
        summary = edge_gaps(p5, fld)
        assert summary.gaps.tolist() == [0, 0, 0, 0]
        assert summary.c_max == 0

    def test_cycle4_frozen_from_bfs_oracle(self, c4):
        # beta = d(., 2) - d(0, 2) = [0, -1, -2, -1]
        fld = busemann_field(c4, Anchor(0, 2))
        assert fld.beta.tolist() == [0, -1, -2, -1]
        assert edge_gaps(c4, fld).gaps.tolist() == [1, 1, 1, 1]

    def test_size_mismatch_rejected(self, p5, c4):
        fld = busemann_field(c4, Anchor(0, 2))
        with pytest.raises(HorofilterError, match="vertices"):
            edge_gaps(p5, fld)

    @given(seed=st.integers(0, 5000))
    @settings(max_examples=30, deadline=None)
    def test_gap_never_exceeds_one(self, seed):
        g = generate(GenSpec("erdos_renyi", {"n": 20, "p": 0.25}, seed=seed))
        rng = np.random.default_rng(seed)
        base, target = rng.choice(g.n, size=2, replace=False)
        summary = edge_gaps(g, busemann_field(g, Anchor(int(base), int(target))))
        assert summary.c_max <= 1  # exact integer comparison

    @given(seed=st.integers(0, 5000))
    @settings(max_examples=20, deadline=None)
    def test_one_lipschitz_under_hop_distance(self, seed):
        g = generate(GenSpec("erdos_renyi", {"n": 16, "p": 0.3}, seed=seed))
        dist = floyd_warshall(g.n, g.edges)
        fld = busemann_field(g, Anchor(0, g.n - 1))
        rng = np.random.default_rng(seed)
        for _ in range(10):
            u, v = rng.integers(0, g.n, size=2)
            assert abs(int(fld.beta[u]) - int(fld.beta[v])) <= int(dist[u, v])

    def test_geodesic_edges_have_gap_one(self):
        # forward direction of the equality case: an edge on a shortest
        # base-target path through both endpoints always has gap exactly 1
        for seed in range(6):
            g = generate(GenSpec("erdos_renyi", {"n": 22, "p": 0.2}, seed=seed))
            anchor = suggest_anchor(g, "diameter_endpoints")
            dist = floyd_warshall(g.n, g.edges)
            fld = busemann_field(g, anchor)
            gaps = edge_gaps(g, fld).gaps
            d_bt = dist[anchor.base, anchor.target]
            for i, (u, v) in enumerate(g.edges):
                on_geo = (
                    dist[anchor.base, u] + 1 + dist[v, anchor.target] == d_bt
                    or dist[anchor.base, v] + 1 + dist[u, anchor.target] == d_bt
                )
                if on_geo:
                    assert gaps[i] == 1


class TestSuggestAnchor:
    def test_p5_diameter(self, p5):
        assert suggest_anchor(p5) == Anchor(0, 4)

    def test_star_eccentric_from_center(self, star4):
        # all leaves tie at distance 1; smallest id wins
        assert suggest_anchor(star4, "eccentric_from", base=0) == Anchor(0, 1)

    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert suggest_anchor(g) == Anchor(0, 1)

    def test_diameter_tie_break_lexicographic(self, c4):
        assert suggest_anchor(c4) == Anchor(0, 2)

    def test_needs_two_vertices(self):
        g = Graph.from_edges(1, [])
        with pytest.raises(HorofilterError):
            suggest_anchor(g)

    def test_explicit_strategy_is_callers_job(self, p5):
        with pytest.raises(HorofilterError, match="explicit"):
            suggest_anchor(p5, "explicit")

    def test_unknown_strategy(self, p5):
        with pytest.raises(HorofilterError, match="unknown anchor strategy"):
            suggest_anchor(p5, "best_effort")

    def test_resolve_anchor_paths(self, p5):
        assert resolve_anchor(p5, 1, 3) == Anchor(1, 3)
        assert resolve_anchor(p5, 2, None) == Anchor(2, 0)  # eccentric ties to 0
        assert resolve_anchor(p5) == Anchor(0, 4)
        with pytest.raises(HorofilterError):
            resolve_anchor(p5, None, 3)


class TestMultiAnchorConfig:
    def test_valid_roundtrip(self):
        cfg = MultiAnchorConfig(base=0, targets=(4, 2), coefficients=(0.5, 0.5))
        again = MultiAnchorConfig.from_json(cfg.to_json())
        assert again == cfg
        assert again.bar_alpha == 0.5
        assert again.m == 2

    def test_coefficients_must_sum_to_one(self):
        with pytest.raises(HorofilterError, match="sum to 1"):
            MultiAnchorConfig(base=0, targets=(1, 2), coefficients=(0.5, 0.6))

    def test_targets_distinct_from_base(self):
        with pytest.raises(HorofilterError, match="differ from the base"):
            MultiAnchorConfig(base=1, targets=(1,), coefficients=(1.0,))

    def test_needs_at_least_one_anchor(self):
        with pytest.raises(HorofilterError):
            MultiAnchorConfig(base=0, targets=(), coefficients=())

    def test_positive_coefficients(self):
        with pytest.raises(HorofilterError, match="positive"):
            MultiAnchorConfig(base=0, targets=(1, 2), coefficients=(1.2, -0.2))

    def test_bad_json(self):
        with pytest.raises(HorofilterError, match="bad multi-anchor config"):
            MultiAnchorConfig.from_json('{"base": 0}')


class TestFieldCsv:
    def test_format(self, p5):
        text = field_to_csv(busemann_field(p5, Anchor(0, 4)))
        assert text == "vertex,beta\n0,0\n1,-1\n2,-2\n3,-3\n4,-4\n"
