import numpy as np
import pytest

import sppv.persistence
from sppv import _reduce_numpy
from sppv.complexes import (
    FilteredComplex,
    build_grid_complex,
    build_polar_complex,
)
from sppv.field import GphField, SynthSpec, synth_field
from sppv.persistence import (
    PersistenceDiagram,
    betti_at,
    h1_lifespans,
    reduce,
    reduce_naive,
)
from util import DATE, multi_basin_field, random_field


def ring_3x3_complex(ring_height=10.0, center_height=0.0):
    """3x3 grid-rule complex with a ring of high vertices around a low
    center (vertex 4)."""
    heights = np.full(9, ring_height)
    heights[4] = center_height
    edges = [
        (0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8),      # horizontal
        (0, 3), (1, 4), (2, 5), (3, 6), (4, 7), (5, 8),      # vertical
        (0, 4), (1, 5), (3, 7), (4, 8),                      # diagonal
    ]
    triangles = [
        (0, 3, 4), (0, 1, 4), (1, 4, 5), (1, 2, 5),
        (3, 6, 7), (3, 4, 7), (4, 7, 8), (4, 5, 8),
    ]
    return FilteredComplex(
        heights,
        np.array(edges, dtype=np.int64),
        np.array(triangles, dtype=np.int64),
    )


def diagram_of(pairs):
    dims = np.array([p[0] for p in pairs], dtype=np.int8)
    births = np.array([p[1] for p in pairs], dtype=float)
    deaths = np.array([p[2] for p in pairs], dtype=float)
    return PersistenceDiagram(dims, births, deaths)


class TestRingExample:
    def test_ring_pair_present(self):
        diagram = reduce(ring_3x3_complex())
        long_pairs = [
            (p.dim, p.birth_height, p.death_height)
            for p in diagram.pairs()
            if p.dim == 1 and p.lifespan > 0
        ]
        assert long_pairs == [(1, 10.0, 0.0)]
        assert h1_lifespans(diagram)[0] == 10.0

    def test_ring_matches_naive(self):
        cx = ring_3x3_complex()
        assert reduce(cx).same_pairs(reduce_naive(cx))

    def test_betti_slices(self):
        cx = ring_3x3_complex()
        assert betti_at(cx, 10.0) == (1, 1)
        assert betti_at(cx, 0.0) == (1, 0)
        assert betti_at(cx, 11.0) == (0, 0)

    def test_one_essential_dim0(self):
        diagram = reduce(ring_3x3_complex())
        essentials = [p for p in diagram.pairs() if p.essential]
        assert len(essentials) == 1
        assert essentials[0].dim == 0 and essentials[0].birth_height == 10.0


class TestConstantField:
    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_all_zero_lifespans(self, build):
        f = GphField(DATE, 10.0, [0, 45, 90], [0, 90, 180, 270], np.full((3, 4), 5.0))
        diagram = reduce(build(f))
        finite = diagram.finite_mask
        assert np.all(diagram.births[finite] == diagram.deaths[finite])
        assert diagram.n_essential() == 1
        assert h1_lifespans(diagram) == [0.0] * int((diagram.dims[finite] == 1).sum())


class TestSplitSynthetic:
    def test_two_long_h1_in_polar(self):
        f = synth_field(
            SynthSpec(kind="split", depth=300.0, center_colat=(40.0, 40.0),
                      center_lon=(90.0, 270.0), cone_radius=20.0)
        )
        cx = build_polar_complex(f)
        for diagram in (reduce(cx), reduce_naive(cx)):
            spans = h1_lifespans(diagram)
            assert spans[0] >= 0.9 * 300 and spans[1] >= 0.9 * 300
            assert len(spans) < 3 or spans[2] < 0.1 * 300


class TestOracleEquivalence:
    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_random_fields(self, build, rng):
        for _ in range(25):
            cx = build(random_field(rng, 8, 10))
            assert reduce(cx).same_pairs(reduce_naive(cx))

    def test_numpy_kernel_parity(self, rng, monkeypatch):
        f = random_field(rng, 8, 10)
        for build in (build_grid_complex, build_polar_complex):
            cx = build(f)
            expected = reduce(cx)
            monkeypatch.setattr(sppv.persistence, "_kernel", _reduce_numpy)
            assert reduce(cx).same_pairs(expected)
            monkeypatch.undo()


class TestBettiConsistency:
    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_alive_counts_match(self, build, rng):
        for _ in range(5):
            cx = build(random_field(rng, 6, 8))
            diagram = reduce(cx)
            for t in np.unique(cx.simplex_heights()):
                b0, b1, b2 = diagram.alive_at(float(t))
                assert (b0, b1) == betti_at(cx, float(t))
                assert b2 == 0


class TestInvariants:
    @pytest.mark.parametrize("build", [build_grid_complex, build_polar_complex])
    def test_pair_count_conservation(self, build, rng):
        for _ in range(8):
            cx = build(random_field(rng))
            diagram = reduce(cx)
            assert 2 * diagram.n_finite() + diagram.n_essential() == cx.n_simplices

    def test_affine_map_exact_on_integer_heights(self, rng):
        values = rng.integers(0, 1000, (6, 9)).astype(float)
        f = GphField(DATE, 10.0, np.linspace(0, 90, 6),
                     np.linspace(0, 360, 9, endpoint=False), values)
        # a power-of-two scale and an exact offset keep float math exact
        g = GphField(DATE, 10.0, f.lats, f.lons, 2.0 * f.values + 128.0)
        for build in (build_grid_complex, build_polar_complex):
            d_f = reduce(build(f))
            d_g = reduce(build(g))
            mapped = PersistenceDiagram(
                d_f.dims.copy(),
                2.0 * d_f.births + 128.0,
                np.where(d_f.finite_mask, 2.0 * d_f.deaths + 128.0, -np.inf),
            )
            assert mapped.same_pairs(d_g)
            assert h1_lifespans(d_g) == [2.0 * s for s in h1_lifespans(d_f)]

    def test_stability_of_longest_lifespan(self, rng):
        f = multi_basin_field(rng, 8, 12)
        base = h1_lifespans(reduce(build_polar_complex(f)))[0]
        eps = 3.0
        for _ in range(10):
            noise = rng.uniform(-eps, eps, f.values.shape)
            g = GphField(DATE, 10.0, f.lats, f.lons, f.values + noise)
            perturbed = h1_lifespans(reduce(build_polar_complex(g)))[0]
            assert abs(perturbed - base) <= 2 * eps


class TestH1Lifespans:
    def test_sorted_descending(self):
        d = diagram_of([(1, 10, 0), (1, 6, 5), (0, 20, 3)])
        assert h1_lifespans(d) == [10.0, 1.0]

    def test_no_dim1_pairs(self):
        d = diagram_of([(0, 20, 3), (0, 5, -np.inf)])
        assert h1_lifespans(d) == []

    def test_tie_broken_by_higher_birth(self):
        d = diagram_of([(1, 9, 1), (1, 12, 4)])
        spans = h1_lifespans(d)
        assert spans == [8.0, 8.0]
        # verify order via births: top entry must come from the birth-12 pair
        mask = (d.dims == 1) & d.finite_mask
        births = d.births[mask]
        deaths = d.deaths[mask]
        order = np.lexsort((-deaths, -births, -(births - deaths)))
        assert births[order][0] == 12.0

    def test_zero_lifespans_rank_last(self, rng):
        f = multi_basin_field(rng, 6, 8)
        spans = h1_lifespans(reduce(build_polar_complex(f)))
        assert spans == sorted(spans, reverse=True)


class TestBackendSelection:
    def test_env_flag_forces_numpy(self):
        import os
        import subprocess
        import sys

        env = dict(os.environ, SPPV_DISABLE_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c",
             "import sppv; print(sppv.active_backend())"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "numpy"

    def test_default_backend_reported(self):
        assert sppv.persistence.active_backend() in ("numba", "numpy")
