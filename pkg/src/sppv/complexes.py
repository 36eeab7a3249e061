"""Filtered simplicial 2-complexes for a gph field, in two embeddings.

Grid complex: the raw lat-lon rectangle. Grid points become vertices,
neighbors are joined by edges, each quad is split by the fixed diagonal
(i,j)-(i+1,j+1). The longitude seam is NOT identified: a pole-centered
vortex must read as a tilted sheet with no long-lived loop here.

Polar complex: same connectivity plus (a) the longitude seam identified
(column nlon-1 joins column 0), and (b) the pole closed off by a single
vertex whose height is the mean of the topmost row. If the top row sits
at lat=90 it is collapsed into that pole vertex; otherwise a synthetic
pole vertex is appended so the complex stays a disk (an open annulus
would carry an undying 1-cycle).

Both complexes are disks: V - E + F = 1.

Filtration convention is superlevel: a simplex's height is the minimum
of its vertex heights, and simplices enter while sweeping the height
threshold downward from the top.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import GphField


@dataclass(frozen=True)
class FilteredComplex:
    """Simplicial 2-complex with per-vertex filtration heights.

    ``edges`` rows are (v0, v1) with v0 < v1; ``triangles`` rows are
    ascending triples. Simplex height = min of its vertex heights.
    """

    vertex_heights: np.ndarray
    edges: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        for arr in (self.vertex_heights, self.edges, self.triangles):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return self.vertex_heights.size

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def n_simplices(self) -> int:
        return self.n_vertices + self.n_edges + self.n_triangles

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def edge_heights(self) -> np.ndarray:
        return self.vertex_heights[self.edges].min(axis=1)

    def triangle_heights(self) -> np.ndarray:
        return self.vertex_heights[self.triangles].min(axis=1)

    def simplex_heights(self) -> np.ndarray:
        """Heights indexed by global simplex id (vertices, then edges, then
        triangles)."""
        return np.concatenate(
            [self.vertex_heights, self.edge_heights(), self.triangle_heights()]
        )

    def triangle_edge_ids(self) -> np.ndarray:
        """(n_triangles, 3) edge indices of each triangle's three faces."""
        nv = self.n_vertices
        keys = self.edges[:, 0].astype(np.int64) * nv + self.edges[:, 1]
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        t = self.triangles.astype(np.int64)
        face_keys = np.stack(
            [t[:, 0] * nv + t[:, 1], t[:, 0] * nv + t[:, 2], t[:, 1] * nv + t[:, 2]],
            axis=1,
        )
        idx = np.searchsorted(sorted_keys, face_keys)
        clipped = np.minimum(idx, keys.size - 1)
        if np.any(idx >= keys.size) or np.any(sorted_keys[clipped] != face_keys):
            raise ValueError("triangle face missing from edge list")
        return order[idx].astype(np.int64)

    def validate(self) -> None:
        """Structural checks used by tests: id bounds, face closure, Euler."""
        nv = self.n_vertices
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= nv):
            raise ValueError("edge references invalid vertex id")
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= nv):
            raise ValueError("triangle references invalid vertex id")
        if np.any(np.diff(self.edges, axis=1) <= 0):
            raise ValueError("edges must be stored as ascending pairs")
        if np.any(np.diff(self.triangles, axis=1) <= 0):
            raise ValueError("triangles must be stored as ascending triples")
        self.triangle_edge_ids()  # raises if a face is absent
        if self.euler_characteristic() != 1:
            raise ValueError(
                f"expected disk topology (chi=1), got chi={self.euler_characteristic()}"
            )


def build_grid_complex(field: GphField) -> FilteredComplex:
    """Triangulated rectangle over the raw grid, no longitude wraparound."""
    nlat, nlon = field.nlat, field.nlon
    ids = np.arange(nlat * nlon, dtype=np.int64).reshape(nlat, nlon)
    horiz = np.stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()], axis=1)
    vert = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1)
    diag = np.stack([ids[:-1, :-1].ravel(), ids[1:, 1:].ravel()], axis=1)
    edges = np.concatenate([horiz, vert, diag])
    lower = np.stack(
        [ids[:-1, :-1].ravel(), ids[1:, :-1].ravel(), ids[1:, 1:].ravel()], axis=1
    )
    upper = np.stack(
        [ids[:-1, :-1].ravel(), ids[:-1, 1:].ravel(), ids[1:, 1:].ravel()], axis=1
    )
    triangles = np.sort(np.concatenate([lower, upper]), axis=1)
    return FilteredComplex(field.values.ravel().copy(), edges, triangles)


def build_polar_complex(field: GphField) -> FilteredComplex:
    """Pole-centered disk: seam identified, top closed by a pole vertex at
    the mean height of the topmost row."""
    # The lat=90 row repeats one physical point; collapse it into the pole.
    m = field.nlat - 1 if field.lats[-1] == 90.0 else field.nlat
    pole_height = float(np.mean(field.values[-1]))
    nlon = field.nlon
    ids = np.arange(m * nlon, dtype=np.int64).reshape(m, nlon)
    pole = m * nlon
    nxt = np.roll(np.arange(nlon), -1)  # j -> (j+1) mod nlon

    horiz = np.stack([ids.ravel(), ids[:, nxt].ravel()], axis=1)
    vert = np.stack([ids[:-1, :].ravel(), ids[1:, :].ravel()], axis=1)
    diag = np.stack([ids[:-1, :].ravel(), ids[1:, nxt].ravel()], axis=1)
    spokes = np.stack(
        [ids[-1, :], np.full(nlon, pole, dtype=np.int64)], axis=1
    )
    edges = np.sort(np.concatenate([horiz, vert, diag, spokes]), axis=1)

    lower = np.stack(
        [ids[:-1, :].ravel(), ids[1:, :].ravel(), ids[1:, nxt].ravel()], axis=1
    )
    upper = np.stack(
        [ids[:-1, :].ravel(), ids[:-1, nxt].ravel(), ids[1:, nxt].ravel()], axis=1
    )
    fan = np.stack(
        [ids[-1, :], ids[-1, nxt], np.full(nlon, pole, dtype=np.int64)], axis=1
    )
    triangles = np.sort(np.concatenate([lower, upper, fan]), axis=1)

    heights = np.concatenate([field.values[:m].ravel(), [pole_height]])
    return FilteredComplex(heights, edges, triangles)


@dataclass(frozen=True)
class FiltrationOrder:
    """Total order of simplices for the downward height sweep.

    Sorted by height descending, then dimension ascending, then index
    ascending, so every simplex appears after all of its faces and the
    order is a pure function of the complex. Global simplex ids number
    vertices first, then edges, then triangles, each in storage order.
    """

    order: np.ndarray      # global simplex ids in filtration order
    position: np.ndarray   # inverse permutation: id -> position
    dims: np.ndarray       # dimension per global id
    heights: np.ndarray    # filtration height per global id

    @property
    def n_simplices(self) -> int:
        return self.order.size


def filtration_order(cx: FilteredComplex) -> FiltrationOrder:
    nv, ne, nt = cx.n_vertices, cx.n_edges, cx.n_triangles
    heights = cx.simplex_heights()
    dims = np.concatenate(
        [
            np.zeros(nv, dtype=np.int8),
            np.ones(ne, dtype=np.int8),
            np.full(nt, 2, dtype=np.int8),
        ]
    )
    # Global ids already run (dim asc, index asc), so a stable sort on
    # descending height realizes the full tiebreak rule in one pass.
    order = np.argsort(-heights, kind="stable")
    position = np.empty(order.size, dtype=np.int32)
    position[order] = np.arange(order.size, dtype=np.int32)
    return FiltrationOrder(order, position, dims, heights)
