"""Persistence pairing of a filtered complex over Z/2.

``reduce`` is the production path: boundary-matrix column reduction in
filtration order, processing dimension 2 before dimension 1 so the twist
(clearing) shortcut can skip every column already known to be a cycle
creator. The inner loop lives in ``_reduce_numba`` (JIT) with a
pure-numpy twin in ``_reduce_numpy``; set SPPV_DISABLE_NUMBA=1 to force
the fallback.

``reduce_naive`` is the testing oracle: full left-to-right reduction of
the whole boundary matrix with Python sets, no ordering tricks, no
shared machinery beyond the ordering rule itself.

``betti_at`` is an independent checker: it rebuilds the superlevel
subcomplex at one height and counts components and loops directly
(union-find plus Euler characteristic; valid because every subcomplex
here embeds in a disk, so there are no 2-cycles).

Heights are reported in original units under the superlevel convention:
birth is the higher height at which a class appears on the way down,
death the lower height at which it is filled. Essential classes carry
death = -inf.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .complexes import FilteredComplex, filtration_order

from . import _reduce_numpy

_numba_import_error: Exception | None = None
try:
    from . import _reduce_numba
except Exception as exc:  # pragma: no cover - exercised only without numba
    _reduce_numba = None
    _numba_import_error = exc


def _select_backend():
    if os.environ.get("SPPV_DISABLE_NUMBA", "") not in ("", "0"):
        return _reduce_numpy, "numpy"
    if _reduce_numba is None:
        return _reduce_numpy, "numpy"
    return _reduce_numba, "numba"


_kernel, _backend_name = _select_backend()


def active_backend() -> str:
    """Name of the reduction kernel in use: "numba" or "numpy"."""
    return _backend_name


def warmup() -> None:
    """Compile (or cache-load) the JIT kernel ahead of timing-sensitive work."""
    _kernel.warmup()


@dataclass(frozen=True)
class PersistencePair:
    dim: int
    birth_height: float
    death_height: float  # -inf for essential classes

    @property
    def lifespan(self) -> float:
        return self.birth_height - self.death_height

    @property
    def essential(self) -> bool:
        return self.death_height == -np.inf


class PersistenceDiagram:
    """Multiset of persistence pairs, stored as parallel arrays.

    Array order is canonicalized lazily: the aggregate queries
    (``alive_at``, lifespans) never need it, listing and comparison do.
    """

    def __init__(self, dims: np.ndarray, births: np.ndarray, deaths: np.ndarray):
        self.dims = np.asarray(dims, dtype=np.int8)
        self.births = np.asarray(births, dtype=np.float64)
        self.deaths = np.asarray(deaths, dtype=np.float64)
        self._canonical = False
        for arr in (self.dims, self.births, self.deaths):
            arr.setflags(write=False)

    def _canonicalize(self) -> None:
        if not self._canonical:
            order = np.lexsort((self.deaths, self.births, self.dims))
            self.dims = self.dims[order]
            self.births = self.births[order]
            self.deaths = self.deaths[order]
            self._canonical = True

    def __len__(self) -> int:
        return self.dims.size

    def __iter__(self):
        return iter(self.pairs())

    def pairs(self) -> list[PersistencePair]:
        self._canonicalize()
        return [
            PersistencePair(int(d), float(b), float(dd))
            for d, b, dd in zip(self.dims, self.births, self.deaths)
        ]

    @property
    def finite_mask(self) -> np.ndarray:
        return self.deaths != -np.inf

    def n_finite(self) -> int:
        return int(self.finite_mask.sum())

    def n_essential(self) -> int:
        return int((~self.finite_mask).sum())

    def same_pairs(self, other: "PersistenceDiagram") -> bool:
        """Exact multiset equality of (dim, birth, death) triples."""
        self._canonicalize()
        other._canonicalize()
        return (
            np.array_equal(self.dims, other.dims)
            and np.array_equal(self.births, other.births)
            and np.array_equal(self.deaths, other.deaths)
        )

    def alive_at(self, t: float) -> tuple[int, int, int]:
        """Pairs alive at height t per dimension (birth >= t > death)."""
        alive = (self.births >= t) & ((self.deaths < t) | ~self.finite_mask)
        return (
            int((alive & (self.dims == 0)).sum()),
            int((alive & (self.dims == 1)).sum()),
            int((alive & (self.dims == 2)).sum()),
        )


def _assemble(cx: FilteredComplex, creators_pos, destroyers_pos, essential_pos,
              h_by_pos, dim_by_pos) -> PersistenceDiagram:
    n = cx.n_simplices
    n_finite = creators_pos.size
    if 2 * n_finite + essential_pos.size != n:
        raise RuntimeError(
            "pair count conservation violated: "
            f"{n} simplices vs {n_finite} finite + {essential_pos.size} essential"
        )
    dims = np.concatenate([dim_by_pos[creators_pos], dim_by_pos[essential_pos]])
    births = np.concatenate([h_by_pos[creators_pos], h_by_pos[essential_pos]])
    deaths = np.concatenate(
        [h_by_pos[destroyers_pos], np.full(essential_pos.size, -np.inf)]
    )
    return PersistenceDiagram(dims, births, deaths)


def reduce(cx: FilteredComplex) -> PersistenceDiagram:
    """Persistence pairing via twist-optimized column reduction."""
    fo = filtration_order(cx)
    nv, ne, nt = cx.n_vertices, cx.n_edges, cx.n_triangles
    n = fo.n_simplices
    pos = fo.position
    h_by_pos = fo.heights[fo.order]
    dim_by_pos = fo.dims[fo.order]

    # dimension 2: triangle columns over edge rows
    tri_pos = pos[nv + ne:]
    col_order2 = np.argsort(tri_pos)
    rows2 = np.sort(pos[nv + cx.triangle_edge_ids()], axis=1)[col_order2]
    creators2, destroyer_cols2, zero2 = _kernel.reduce_columns(
        rows2.ravel(), np.arange(0, 3 * nt + 3, 3, dtype=np.int64), n
    )
    tri_pos_sorted = tri_pos[col_order2]
    destroyers2 = tri_pos_sorted[destroyer_cols2]

    # dimension 1 with clearing: skip edges already known to create cycles
    edge_pos = pos[nv:nv + ne]
    cleared = np.zeros(n, dtype=bool)
    cleared[creators2] = True
    kept = np.flatnonzero(~cleared[edge_pos])
    kept = kept[np.argsort(edge_pos[kept])]
    rows1 = np.sort(pos[cx.edges[kept]], axis=1)
    creators1, destroyer_cols1, zero1 = _kernel.reduce_columns(
        rows1.ravel(), np.arange(0, 2 * kept.size + 2, 2, dtype=np.int64), n
    )
    destroyers1 = edge_pos[kept[destroyer_cols1]]

    # essentials: unpaired creators (one H0 component for a disk; any
    # surviving 1- or 2-cycle would surface here too)
    vertex_pos = pos[:nv]
    paired_vertices = np.zeros(n, dtype=bool)
    paired_vertices[creators1] = True
    essential0 = vertex_pos[~paired_vertices[vertex_pos]]
    essential1 = edge_pos[kept[zero1.astype(bool)]]
    essential2 = tri_pos_sorted[zero2.astype(bool)]
    essential = np.concatenate([essential0, essential1, essential2])

    creators_pos = np.concatenate([creators1, creators2])
    destroyers_pos = np.concatenate([destroyers1, destroyers2])
    return _assemble(cx, creators_pos, destroyers_pos, essential, h_by_pos, dim_by_pos)


def reduce_naive(cx: FilteredComplex) -> PersistenceDiagram:
    """Oracle pairing: plain full-matrix left-to-right column reduction.

    Definitionally simple and deliberately independent of the optimized
    path: own ordering, own boundary construction, Python sets.
    """
    nv, ne, nt = cx.n_vertices, cx.n_edges, cx.n_triangles
    n = nv + ne + nt
    heights = [float(h) for h in cx.vertex_heights]
    dims = [0] * nv
    boundaries: list[tuple[int, ...]] = [()] * nv
    edge_id = {}
    for k in range(ne):
        u, v = int(cx.edges[k, 0]), int(cx.edges[k, 1])
        heights.append(min(heights[u], heights[v]))
        dims.append(1)
        boundaries.append((u, v))
        edge_id[(u, v)] = nv + k
    for k in range(nt):
        a, b, c = (int(x) for x in cx.triangles[k])
        heights.append(min(heights[a], heights[b], heights[c]))
        dims.append(2)
        boundaries.append((edge_id[(a, b)], edge_id[(a, c)], edge_id[(b, c)]))

    order = sorted(range(n), key=lambda s: (-heights[s], dims[s], s))
    position = [0] * n
    for p, s in enumerate(order):
        position[s] = p

    stored: dict[int, set[int]] = {}
    pivot_of_row: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    zero_cols: list[int] = []
    for p in range(n):
        col = {position[f] for f in boundaries[order[p]]}
        while col:
            low = max(col)
            owner = pivot_of_row.get(low)
            if owner is None:
                pivot_of_row[low] = p
                stored[p] = col
                pairs.append((low, p))
                break
            col = col ^ stored[owner]
        if not col:
            zero_cols.append(p)

    paired_rows = {low for low, _ in pairs}
    essential = [p for p in zero_cols if p not in paired_rows]

    h_by_pos = np.array([heights[s] for s in order])
    dim_by_pos = np.array([dims[s] for s in order], dtype=np.int8)
    creators_pos = np.array([low for low, _ in pairs], dtype=np.int64)
    destroyers_pos = np.array([p for _, p in pairs], dtype=np.int64)
    essential_pos = np.array(essential, dtype=np.int64)
    return _assemble(cx, creators_pos, destroyers_pos, essential_pos,
                     h_by_pos, dim_by_pos)


class _UnionFind:
    """Array union-find with path compression, for component counting."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        self.parent[self.find(i)] = self.find(j)


def betti_at(cx: FilteredComplex, t: float) -> tuple[int, int]:
    """(beta0, beta1) of the superlevel subcomplex {height >= t}.

    beta0 comes from flood-filling included vertices along included
    edges; beta1 = beta0 - chi, which is valid because the subcomplex
    embeds in a disk and therefore has no 2-cycles.
    """
    v_in = cx.vertex_heights >= t
    e_in = cx.edge_heights() >= t
    f_in = cx.triangle_heights() >= t
    nV, nE, nF = int(v_in.sum()), int(e_in.sum()), int(f_in.sum())
    if nV == 0:
        return (0, 0)
    uf = _UnionFind(cx.n_vertices)
    for u, v in cx.edges[e_in]:
        uf.union(int(u), int(v))
    roots = {uf.find(int(i)) for i in np.flatnonzero(v_in)}
    beta0 = len(roots)
    chi = nV - nE + nF
    return (beta0, beta0 - chi)


def h1_lifespans(diagram: PersistenceDiagram) -> list[float]:
    """Lifespans of finite dimension-1 pairs, longest first.

    Ties resolve by higher birth, then higher death, so the order is
    deterministic. Zero-length lifespans are retained and rank last.
    """
    mask = (diagram.dims == 1) & diagram.finite_mask
    births = diagram.births[mask]
    deaths = diagram.deaths[mask]
    spans = births - deaths
    order = np.lexsort((-deaths, -births, -spans))
    return [float(s) for s in spans[order]]
