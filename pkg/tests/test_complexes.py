import numpy as np
import pytest

from sppv.complexes import (
    FilteredComplex,
    build_grid_complex,
    build_polar_complex,
    filtration_order,
)
from sppv.field import GphField, SynthSpec, synth_field
from util import DATE, random_field, uniform_field


def small_field(values, lats=None):
    values = np.asarray(values, dtype=float)
    nlat, nlon = values.shape
    lats = np.linspace(0, 90, nlat) if lats is None else np.asarray(lats, float)
    lons = np.linspace(0, 360, nlon, endpoint=False)
    return GphField(DATE, 10.0, lats, lons, values)


class TestGridComplex:
    def test_3x4_counts(self):
        cx = build_grid_complex(small_field(np.zeros((3, 4))))
        # recount combinatorially: 3 rows of 3 horizontals, 2x4 verticals,
        # 2x3 diagonals; two triangles per quad
        assert cx.n_vertices == 12
        assert cx.n_edges == 3 * 3 + 2 * 4 + 2 * 3 == 23
        assert cx.n_triangles == 2 * (2 * 3) == 12
        assert cx.euler_characteristic() == 1
        cx.validate()

    def test_constant_field_heights(self):
        cx = build_grid_complex(small_field(np.full((4, 5), 7.0)))
        assert np.all(cx.simplex_heights() == 7.0)

    def test_single_interior_minimum_star(self):
        values = np.full((5, 6), 100.0)
        values[2, 3] = 1.0
        cx = build_grid_complex(small_field(values))
        neighbors = {v: [] for v in range(cx.n_vertices)}
        for u, v in cx.edges:
            neighbors[int(u)].append(int(v))
            neighbors[int(v)].append(int(u))
        h = cx.vertex_heights
        strict_minima = [
            v for v, ns in neighbors.items() if all(h[v] < h[w] for w in ns)
        ]
        assert strict_minima == [2 * 6 + 3]

    def test_no_longitude_wraparound(self):
        cx = build_grid_complex(small_field(np.zeros((3, 5))))
        pairs = {tuple(e) for e in cx.edges.tolist()}
        assert (0, 4) not in pairs  # first row, col 0 to col nlon-1

    def test_vertex_heights_are_field_values(self, rng):
        f = uniform_field(rng, 4, 6)
        cx = build_grid_complex(f)
        assert np.array_equal(cx.vertex_heights, f.values.ravel())


class TestPolarComplex:
    def test_pole_collapse_at_lat90(self):
        values = np.zeros((3, 4))
        values[-1] = 500.0
        cx = build_polar_complex(small_field(values))  # lats end at 90
        assert cx.n_vertices == 2 * 4 + 1
        assert cx.vertex_heights[-1] == 500.0

    def test_synthetic_pole_below_lat90(self):
        values = np.stack([np.full(6, v) for v in (0, 0, 0, 0)])
        values[-1] = [100, 200, 300, 400, 500, 600]
        f = small_field(values, lats=[0, 20, 40, 60])
        cx = build_polar_complex(f)
        # top row kept as a ring, synthetic pole appended
        assert cx.n_vertices == 4 * 6 + 1
        assert cx.vertex_heights[-1] == sum(values[-1]) / 6 == 350.0

    def test_counts_and_euler(self):
        f = small_field(np.zeros((4, 6)), lats=[0, 20, 40, 60])
        cx = build_polar_complex(f)
        m, n = 4, 6
        assert cx.n_vertices == m * n + 1
        assert cx.n_edges == m * n + (m - 1) * n + (m - 1) * n + n
        assert cx.n_triangles == 2 * (m - 1) * n + n
        assert cx.euler_characteristic() == 1
        cx.validate()

    def test_seam_identified(self):
        cx = build_polar_complex(small_field(np.zeros((3, 5))))
        pairs = {tuple(e) for e in cx.edges.tolist()}
        assert (0, 4) in pairs  # row 0: col 0 joined to col nlon-1

    def test_constant_field_zero_lifespan_heights(self):
        cx = build_polar_complex(small_field(np.full((4, 6), 3.25)))
        assert np.all(cx.simplex_heights() == 3.25)

    def test_shared_vertices_same_heights(self, rng):
        f = uniform_field(rng, 5, 8)  # includes the lat=90 row
        grid = build_grid_complex(f)
        polar = build_polar_complex(f)
        shared = (f.nlat - 1) * f.nlon
        assert np.array_equal(grid.vertex_heights[:shared], polar.vertex_heights[:-1])

    def test_builders_are_pure(self, rng):
        f = uniform_field(rng, 5, 7)
        a, b = build_polar_complex(f), build_polar_complex(f)
        assert np.array_equal(a.vertex_heights, b.vertex_heights)
        assert np.array_equal(a.edges, b.edges)
        assert np.array_equal(a.triangles, b.triangles)


def hand_complex(heights, edges, triangles=()):
    return FilteredComplex(
        np.asarray(heights, dtype=float),
        np.asarray(edges, dtype=np.int64).reshape(-1, 2),
        np.asarray(triangles, dtype=np.int64).reshape(-1, 3),
    )


class TestFiltrationOrder:
    def test_vertex_before_edge_on_tie(self):
        cx = hand_complex([10.0, 10.0], [(0, 1)])
        fo = filtration_order(cx)
        assert list(fo.order) == [0, 1, 2]  # v0, v1, then the edge

    def test_index_tiebreak(self):
        heights = [5.0] * 8
        heights[3] = 10.0
        heights[7] = 10.0
        cx = hand_complex(heights, [(i, i + 1) for i in range(7)])
        fo = filtration_order(cx)
        assert list(fo.order[:2]) == [3, 7]

    def test_height_descending(self):
        cx = hand_complex([12.0, 10.0, 10.0, 7.0], [(0, 1), (1, 2), (2, 3)])
        fo = filtration_order(cx)
        assert fo.heights[fo.order[0]] == 12.0

    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_faces_precede_cofaces(self, build, rng):
        for _ in range(12):
            f = random_field(rng, rng.integers(4, 13), rng.integers(6, 17))
            cx = build(f)
            fo = filtration_order(cx)
            pos = fo.position
            nv, ne = cx.n_vertices, cx.n_edges
            for k in range(ne):
                u, v = cx.edges[k]
                assert pos[nv + k] > pos[u] and pos[nv + k] > pos[v]
            tri_edges = cx.triangle_edge_ids()
            for k in range(cx.n_triangles):
                for e in tri_edges[k]:
                    assert pos[nv + ne + k] > pos[nv + e]

    def test_deterministic(self, rng):
        f = random_field(rng, 6, 8)
        cx = build_polar_complex(f)
        a, b = filtration_order(cx), filtration_order(cx)
        assert np.array_equal(a.order, b.order)


class TestValidation:
    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_random_fields_validate(self, build, rng):
        for _ in range(10):
            build(random_field(rng)).validate()

    def test_synthetic_fields_validate(self):
        for kind in ("normal", "displaced", "split"):
            f = synth_field(SynthSpec(kind=kind))
            build_grid_complex(f).validate()
            build_polar_complex(f).validate()
