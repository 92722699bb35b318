"""Vietoris-Rips filtrations on exact squared distances.

Simplices are enumerated by clique expansion with numpy joins: triangles
from edge pairs sharing a middle vertex, tetrahedra from triangles plus an
upper neighbour of their last vertex.  Within each dimension simplices are
kept in filtration order (squared diameter, then lexicographic vertices) and
identified by their rank in that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..pointcloud import SquaredDistanceMatrix

DEFAULT_MAX_SIMPLICES = 6_000_000


class UnsupportedDimension(ValueError):
    pass


class FiltrationTooLarge(RuntimeError):
    pass


class FiltrationOrderError(AssertionError):
    """Internal invariant failure: a face does not precede its coface."""


@dataclass(frozen=True)
class Simplex:
    vertices: tuple
    squared_diameter: object  # int or Fraction

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def _keys(verts: np.ndarray, n: int) -> np.ndarray:
    key = np.zeros(len(verts), dtype=np.int64)
    for c in range(verts.shape[1]):
        key = key * n + verts[:, c]
    return key


def _expand(cols, ptr, last, count_limit, what):
    """Candidate upper neighbours of ``last`` for every row: (row ids, vertex)."""
    counts = ptr[last + 1] - ptr[last]
    total = int(counts.sum())
    if total > count_limit:
        raise FiltrationTooLarge(f"more than {count_limit} candidate {what}; lower the threshold")
    rows = np.repeat(np.arange(len(last)), counts)
    starts = np.repeat(ptr[last] - (np.cumsum(counts) - counts), counts)
    return rows, cols[starts + np.arange(total)]


def _member(sorted_keys, keys):
    if not len(sorted_keys):
        return np.zeros(len(keys), bool)
    pos = np.minimum(np.searchsorted(sorted_keys, keys), len(sorted_keys) - 1)
    return sorted_keys[pos] == keys


class Filtration:
    """All simplices up to ``max_dim`` with squared diameter <= threshold.

    ``verts[d]`` is a (count, d+1) array in filtration order and
    ``diam[d]`` the matching squared diameters in numerator units of the
    distance matrix (see ``SquaredDistanceMatrix.denominator``).
    """

    def __init__(self, m: SquaredDistanceMatrix, max_dim: int = 3, threshold=None,
                 max_simplices: int = DEFAULT_MAX_SIMPLICES):
        if not 0 <= max_dim <= 3:
            raise UnsupportedDimension(f"max_dim must be between 0 and 3, got {max_dim}")
        self.matrix = m
        self.max_dim = max_dim
        self.n = n = m.n
        if threshold is None:
            self.threshold_units = None
            limit = None
        else:
            t = Fraction(threshold) * m.denominator
            if t < 0:
                raise ValueError("threshold must be non-negative")
            self.threshold_units = t
            limit = int(t)  # entries are integers, so floor is exact
        D = m.entries
        self.verts = [np.arange(n, dtype=np.int64).reshape(-1, 1)]
        self.diam = [np.zeros(n, dtype=np.int64)]
        if max_dim == 0 or n < 2:
            self._fill_empty()
            return
        mask = np.triu(np.ones((n, n), bool), 1)
        if limit is not None:
            mask &= D <= limit
        ei, ej = np.nonzero(mask)
        budget = max_simplices - n
        if len(ei) > budget:
            raise FiltrationTooLarge(f"{len(ei)} edges exceed the simplex budget; lower the threshold")
        edges = np.stack([ei, ej], 1).astype(np.int64)
        edge_d = D[ei, ej].astype(np.int64)
        layers = [(edges, edge_d)]
        budget -= len(edges)
        if max_dim >= 2:
            ptr = np.searchsorted(ei, np.arange(n + 1)).astype(np.int64)
            cols = ej.astype(np.int64)
            ekeys = ei.astype(np.int64) * n + ej
            rows, k = _expand(cols, ptr, edges[:, 1], 4 * max_simplices, "triangles")
            i = edges[rows, 0]
            ok = _member(ekeys, i * n + k)
            rows, i, k = rows[ok], i[ok], k[ok]
            j = edges[rows, 1]
            tris = np.stack([i, j, k], 1)
            tri_d = np.maximum(edge_d[rows], np.maximum(D[i, k], D[j, k]).astype(np.int64))
            if len(tris) > budget:
                raise FiltrationTooLarge(f"{len(tris)} triangles exceed the simplex budget; lower the threshold")
            budget -= len(tris)
            layers.append((tris, tri_d))
            if max_dim >= 3:
                rows, l = _expand(cols, ptr, tris[:, 2], 4 * max_simplices, "tetrahedra")
                i, j = tris[rows, 0], tris[rows, 1]
                ok = _member(ekeys, i * n + l)
                ok[ok] = _member(ekeys, j[ok] * n + l[ok])
                rows, l = rows[ok], l[ok]
                i, j, k = tris[rows, 0], tris[rows, 1], tris[rows, 2]
                tets = np.stack([i, j, k, l], 1)
                tet_d = np.maximum(tri_d[rows], np.maximum(np.maximum(D[i, l], D[j, l]), D[k, l]).astype(np.int64))
                if len(tets) > budget:
                    raise FiltrationTooLarge(f"{len(tets)} tetrahedra exceed the simplex budget; lower the threshold")
                layers.append((tets, tet_d))
        for verts, d in layers:
            keys = tuple(verts[:, c] for c in range(verts.shape[1] - 1, -1, -1)) + (d,)
            order = np.lexsort(keys)
            self.verts.append(verts[order])
            self.diam.append(d[order])
        self._fill_empty()

    def _fill_empty(self):
        while len(self.verts) <= self.max_dim:
            d = len(self.verts)
            self.verts.append(np.zeros((0, d + 1), dtype=np.int64))
            self.diam.append(np.zeros(0, dtype=np.int64))

    # -- queries --------------------------------------------------------------

    def count(self, d: int) -> int:
        return len(self.verts[d]) if d < len(self.verts) else 0

    def counts(self) -> tuple:
        return tuple(self.count(d) for d in range(self.max_dim + 1))

    def __len__(self):
        return sum(self.counts())

    def squared(self, units):
        return self.matrix.from_units(units)

    @property
    def threshold(self):
        """Admitted squared diameter, or None when unbounded."""
        if self.threshold_units is None:
            return None
        f = self.threshold_units / self.matrix.denominator
        return int(f) if f.denominator == 1 else f

    def facet_ranks(self, d: int) -> np.ndarray:
        """(count_d, d+1) ranks of the facets of every d-simplex, in dimension d-1."""
        if d < 1:
            raise ValueError("vertices have no facets")
        verts, lower = self.verts[d], self.verts[d - 1]
        if len(verts) == 0:
            return np.zeros((0, d + 1), dtype=np.int64)
        lkeys = _keys(lower, self.n)
        order = np.argsort(lkeys, kind="stable")
        sorted_keys = lkeys[order]
        out = np.empty((len(verts), d + 1), dtype=np.int64)
        for drop in range(d + 1):
            keep = [c for c in range(d + 1) if c != drop]
            pos = np.searchsorted(sorted_keys, _keys(verts[:, keep], self.n))
            out[:, drop] = order[pos]
        return out

    def simplices(self) -> list:
        """Every simplex in global filtration order (diameter, dimension, lex)."""
        rows = []
        for d in range(len(self.verts)):
            for v, di in zip(self.verts[d].tolist(), self.diam[d].tolist()):
                rows.append((di, d, tuple(v)))
        rows.sort()
        return [Simplex(v, self.squared(di)) for di, _, v in rows]

    def check(self):
        """Verify that every facet precedes its coface; raises FiltrationOrderError."""
        for d in range(1, len(self.verts)):
            if not len(self.verts[d]):
                continue
            fr = self.facet_ranks(d)
            if np.any(self.diam[d - 1][fr] > self.diam[d][:, None]):
                raise FiltrationOrderError(f"a {d}-simplex precedes one of its facets")
            if np.any(np.diff(self.diam[d]) < 0):
                raise FiltrationOrderError(f"{d}-simplices are not sorted by diameter")


def build_filtration(m: SquaredDistanceMatrix, max_dim: int = 3, threshold=None,
                     max_simplices: Optional[int] = DEFAULT_MAX_SIMPLICES) -> Filtration:
    """Rips filtration up to ``max_dim`` (at most 3) and squared diameter ``threshold``.

    ``threshold`` is an exact squared distance (int or Fraction); None means
    the squared enclosing radius and the string ``"none"`` admits everything.
    """
    if max_dim > 3:
        raise UnsupportedDimension(f"max_dim must be at most 3, got {max_dim}")
    if isinstance(threshold, str):
        if threshold != "none":
            raise ValueError(f"unknown threshold sentinel {threshold!r}")
        threshold = None
    elif threshold is None and m.n:
        threshold = enclosing_radius_squared(m)
    return Filtration(m, max_dim, threshold, max_simplices or DEFAULT_MAX_SIMPLICES)


def enclosing_radius_squared(m: SquaredDistanceMatrix):
    """min over points of the max squared distance to any other point."""
    if m.n == 0:
        raise ValueError("enclosing radius of an empty cloud is undefined")
    return m.from_units(int(m.entries.max(axis=1).min()))


def enclosing_radius(m: SquaredDistanceMatrix) -> float:
    return float(enclosing_radius_squared(m)) ** 0.5
