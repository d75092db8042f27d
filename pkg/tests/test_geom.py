"""Geometric layer: instance validation, annulus/disk hypergraph builders,
covered areas, area containment, and the ring-bound parameter."""

import json
import math

import pytest

from thinpath import (
    AreaRelation,
    CoveredArea,
    DegenerateGeometryError,
    DimensionMismatchError,
    GeometricInstance,
    GeometryError,
    Hyperpath,
    area_contains,
    area_subset,
    build_disk_graph,
    build_hypergraph,
    build_ring_hypergraph,
    compute_alpha,
    covered_area,
    dist2,
    geometric_from_json,
    geometric_to_json,
    ring_width_bound,
)


def line_instance(xs, rmin, rmax, s=0, t=None, **kw):
    pts = tuple((float(x),) for x in xs)
    n = len(pts)
    return GeometricInstance(
        points=pts,
        rmin=tuple(float(r) for r in rmin),
        rmax=tuple(float(r) for r in rmax),
        source=s,
        target=n - 1 if t is None else t,
        **kw,
    )


class TestInstanceValidation:
    def test_dim_and_counts(self):
        g = line_instance([0, 1, 2], [0, 0, 0], [1, 1, 1], model="disk_hypergraph")
        assert g.dim == 1
        assert g.n_points == 3
        assert g.vertex_count == 3

    def test_eves_extend_vertex_count(self):
        g = line_instance(
            [0, 1], [0, 0], [1, 1],
            model="disk_hypergraph",
            eves=(((0.5,), 2.0),),
        )
        assert g.vertex_count == 3
        assert g.coords(2) == (0.5,)

    def test_empty_instance_rejected(self):
        with pytest.raises(GeometryError, match="at least one point"):
            GeometricInstance(points=(), rmin=(), rmax=(), source=0, target=0)

    def test_inconsistent_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError, match="inconsistent"):
            GeometricInstance(
                points=((0.0,), (0.0, 1.0)),
                rmin=(0.0, 0.0),
                rmax=(1.0, 1.0),
                source=0,
                target=1,
            )

    def test_rmin_above_rmax_rejected(self):
        with pytest.raises(GeometryError, match="0 <= rmin <= rmax"):
            line_instance([0, 1], [2, 0], [1, 1])

    def test_unknown_model_rejected(self):
        with pytest.raises(GeometryError, match="unknown model 'blob'"):
            line_instance([0, 1], [0, 0], [1, 1], model="blob")

    def test_disk_hypergraph_needs_zero_rmin(self):
        with pytest.raises(GeometryError, match="rmin = 0"):
            line_instance([0, 1], [0.5, 0], [1, 1], model="disk_hypergraph")

    def test_disk_graph_needs_equal_radii(self):
        with pytest.raises(GeometryError, match="rmin = rmax"):
            line_instance([0, 1], [0, 0], [1, 1], model="disk_graph")

    def test_endpoint_out_of_range(self):
        with pytest.raises(GeometryError, match="index out of range"):
            line_instance([0, 1], [0, 0], [1, 1], s=0, t=5)


class TestRingBuilder:
    def test_annulus_excludes_inner_closed_boundary(self):
        # neighbor at exactly rmin is NOT reachable; at exactly rmax it is
        g = line_instance([0, 1, 2], [1, 0, 0], [2, 0, 0], model="ring")
        h = build_ring_hypergraph(g)
        from_0 = [h.edge(i) for i in h.out_edges(0)]
        assert [e.destinations for e in from_0] == [(2,)]

    def test_prefix_edges_by_distance(self):
        g = line_instance([0, 1, 3, 6], [0] * 4, [10, 0, 0, 0],
                          model="disk_hypergraph")
        h = build_ring_hypergraph(g)
        from_0 = [h.edge(i).destinations for i in h.out_edges(0)]
        assert from_0 == [(1,), (1, 2), (1, 2, 3)]

    def test_equidistant_vertices_enter_together(self):
        pts = ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (2.0, 0.0))
        g = GeometricInstance(
            points=pts, rmin=(0.0,) * 4, rmax=(3.0, 0.0, 0.0, 0.0),
            source=0, target=3, model="disk_hypergraph",
        )
        h = build_ring_hypergraph(g)
        from_0 = [h.edge(i).destinations for i in h.out_edges(0)]
        assert from_0 == [(1, 2), (1, 2, 3)]

    def test_eves_are_receiver_only(self):
        g = line_instance(
            [0, 1], [0, 0], [2, 2],
            model="disk_hypergraph",
            eves=(((0.5,), 1.0),),
        )
        h = build_ring_hypergraph(g)
        assert h.vertex_count == 3
        # eve (vertex 2) appears in destination sets but transmits nothing
        assert list(h.out_edges(2)) == []
        assert any(2 in h.edge(i).destinations for i in h.out_edges(0))

    def test_always_monotone_nested(self):
        from thinpath import check_monotone_nesting

        g = line_instance([0, 1, 2, 4, 7], [0] * 5, [5, 4, 3, 2, 1],
                          model="disk_hypergraph")
        assert check_monotone_nesting(build_ring_hypergraph(g)) is True


class TestDiskGraphBuilder:
    def test_closed_ball_edge_per_point(self):
        g = line_instance([0, 1, 2], [1, 1, 1], [1, 1, 1], model="disk_graph")
        h = build_disk_graph(g)
        assert [(e.source, e.destinations) for e in h.edges] == [
            (0, (1,)),
            (1, (0, 2)),
            (2, (1,)),
        ]

    def test_isolated_point_gets_no_edge(self):
        g = line_instance([0, 10, 11], [0.5, 0.5, 0.5], [0.5, 0.5, 0.5],
                          model="disk_graph")
        h = build_disk_graph(g)
        assert all(e.source != 0 for e in h.edges)

    def test_requires_equal_radii(self):
        g = line_instance([0, 1], [0, 0], [1, 1], model="disk_hypergraph")
        with pytest.raises(GeometryError, match="rmin = rmax"):
            build_disk_graph(g)

    def test_dispatch_by_model(self):
        g = line_instance([0, 1], [1, 1], [1, 1], model="disk_graph")
        assert [e.destinations for e in build_hypergraph(g).edges] == [(1,), (0,)]


class TestCoveredArea:
    def test_one_disk_per_edge_with_min_inducing_power(self):
        g = line_instance([0, 1, 3, 6], [0] * 4, [10, 0, 0, 0],
                          model="disk_hypergraph")
        h = build_hypergraph(g)
        p = Hyperpath(edges=(1,), origin=0, target=2)  # 0 -> {1, 2}
        area = covered_area(g, p, h)
        assert area.dim == 1
        ((center, radius, radius2),) = area.disks
        assert center == (0.0,)
        assert radius == 3.0 and radius2 == 9.0

    def test_invalid_path_rejected(self):
        g = line_instance([0, 1], [0, 0], [2, 2], model="disk_hypergraph")
        with pytest.raises(GeometryError, match="not valid"):
            covered_area(g, Hyperpath(edges=(), origin=0, target=1))

    def test_area_contains_closed_boundary(self):
        a = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        assert area_contains(a, (1.0, 0.0)) is True
        assert area_contains(a, (1.0 + 1e-9, 0.0)) is False

    def test_area_contains_dimension_checked(self):
        a = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        with pytest.raises(DimensionMismatchError):
            area_contains(a, (0.0,))


class TestAreaSubset:
    def one_d(self, *disks):
        return CoveredArea(
            dim=1, disks=tuple(((float(c),), float(r), float(r) ** 2) for c, r in disks)
        )

    def test_1d_exact_subset(self):
        inner = self.one_d((1, 1))
        outer = self.one_d((0, 1.5), (2, 1.5))  # union [-1.5, 3.5]
        assert area_subset(inner, outer) is AreaRelation.SUBSET

    def test_1d_exact_not_subset(self):
        # outer intervals [-1,1] and [2,4] leave a gap at (1,2)
        inner = self.one_d((1.25, 0.5))
        outer = self.one_d((0, 1), (3, 1))
        assert area_subset(inner, outer) is AreaRelation.NOT_SUBSET

    def test_1d_merging_bridges_touching_intervals(self):
        inner = self.one_d((1, 1))
        outer = self.one_d((0, 1), (2, 1))  # [-1,1] + [1,3] merge to [-1,3]
        assert area_subset(inner, outer) is AreaRelation.SUBSET

    def test_empty_inner_is_subset(self):
        empty = CoveredArea(dim=2, disks=())
        outer = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        assert area_subset(empty, outer) is AreaRelation.SUBSET

    def test_2d_nested_ball_criterion(self):
        inner = CoveredArea(dim=2, disks=(((0.5, 0.0), 1.0, 1.0),))
        outer = CoveredArea(dim=2, disks=(((0.0, 0.0), 2.0, 4.0),))
        assert area_subset(inner, outer) is AreaRelation.SUBSET

    def test_2d_sampling_finds_witness(self):
        inner = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        outer = CoveredArea(dim=2, disks=(((5.0, 0.0), 1.0, 1.0),))
        assert area_subset(inner, outer) is AreaRelation.NOT_SUBSET

    def test_2d_true_containment_without_single_ball_is_unknown(self):
        # the unit disk is covered by the two offset disks jointly but fits
        # in neither alone, so the conservative answer is UNKNOWN
        inner = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        outer = CoveredArea(
            dim=2,
            disks=(((0.5, 0.0), 1.2, 1.44), ((-0.5, 0.0), 1.2, 1.44)),
        )
        assert area_subset(inner, outer, samples=2000) is AreaRelation.UNKNOWN

    def test_dimension_mismatch_rejected(self):
        a1 = CoveredArea(dim=1, disks=(((0.0,), 1.0, 1.0),))
        a2 = CoveredArea(dim=2, disks=(((0.0, 0.0), 1.0, 1.0),))
        with pytest.raises(DimensionMismatchError):
            area_subset(a1, a2)


class TestAlphaAndRingBound:
    def test_alpha_uses_min_pairwise_distance_when_rmin_zero(self):
        g = line_instance([0, 1, 3], [0, 0, 0], [4, 1, 1],
                          model="disk_hypergraph")
        assert compute_alpha(g) == pytest.approx(4.0 / 1.0)

    def test_alpha_uses_min_rmin_when_larger(self):
        g = line_instance([0, 0.25, 3], [2, 2, 2], [4, 4, 4], model="ring")
        # min pairwise distance 0.25 < min rmin 2
        assert compute_alpha(g) == pytest.approx(4.0 / 2.0)

    def test_alpha_counts_eavesdroppers(self):
        g = line_instance(
            [0, 2], [0, 0], [4, 4],
            model="disk_hypergraph",
            eves=(((0.5,), 1.0),),
        )
        assert compute_alpha(g) == pytest.approx(4.0 / 0.5)

    def test_alpha_degenerate_raises(self):
        g = line_instance([0, 1], [0, 0], [1, 1], model="disk_hypergraph",
                          eves=(((0.0,), 1.0),))
        with pytest.raises(DegenerateGeometryError, match="coincident"):
            compute_alpha(g)

    def test_ring_width_bound_values(self):
        assert ring_width_bound(0.0, 2) == pytest.approx(2.0)
        assert ring_width_bound(1.0, 2) == pytest.approx(18.0)
        assert ring_width_bound(0.5, 3) == pytest.approx(16.0)


class TestGeometricJson:
    def test_roundtrip(self):
        g = line_instance(
            [0, 1, 2], [0, 0, 0], [2, 2, 2],
            model="disk_hypergraph",
            eves=(((0.5,), 1.5),),
        )
        g2 = geometric_from_json(geometric_to_json(g))
        assert g2 == g

    def test_eves_default_empty(self):
        doc = {
            "dim": 1,
            "points": [[0.0], [1.0]],
            "rmin": [0.0, 0.0],
            "rmax": [1.0, 1.0],
            "source": 0,
            "target": 1,
            "model": "disk_hypergraph",
        }
        g = geometric_from_json(json.dumps(doc))
        assert g.eves == ()

    def test_missing_field_named(self):
        with pytest.raises(GeometryError, match="missing field 'points'"):
            geometric_from_json('{"dim": 1}')

    def test_unknown_keys_ignored(self):
        g = line_instance([0, 1], [0, 0], [1, 1], model="disk_hypergraph")
        doc = json.loads(geometric_to_json(g))
        doc["meta"] = {"anything": True}
        assert geometric_from_json(json.dumps(doc)) == g


class TestDist2:
    def test_exact_squared_distance(self):
        assert dist2((0.0, 0.0), (3.0, 4.0)) == 25.0
        assert dist2((1.0,), (1.0,)) == 0.0
