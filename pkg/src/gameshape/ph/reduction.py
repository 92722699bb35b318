"""Persistence pairs of a Rips filtration over GF(2), dimensions 0 to 2.

Dimension 0 uses union-find over the sorted edges.  Higher dimensions
reduce the coboundary matrix (cohomology gives the same pairs as homology),
columns taken in decreasing filtration order, with two standard shortcuts:

* clearing: a simplex already paired as the death of a lower-dimensional
  class has a zero column and is skipped;
* apparent pairs: if ``tau`` is the earliest cofacet of ``sigma`` and
  ``sigma`` the latest facet of ``tau``, the column of ``sigma`` is already
  reduced with pivot ``tau``.  These are found in bulk with numpy and their
  coboundaries are only built when another column runs into their pivot.

Columns are Python sets of cofacet ranks; the pivot is the smallest rank
(earliest cofacet in the filtration).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .filtration import Filtration


@dataclass(frozen=True)
class Bar:
    dim: int
    birth: object            # squared value, int or Fraction
    death: object = None     # squared value, None when alive at the threshold
    birth_simplex: tuple = ()
    death_simplex: tuple = ()

    @property
    def essential(self) -> bool:
        return self.death is None

    @property
    def trivial(self) -> bool:
        return self.death is not None and self.death == self.birth

    @property
    def birth_eps(self) -> float:
        return math.sqrt(self.birth)

    @property
    def death_eps(self) -> float:
        return math.inf if self.death is None else math.sqrt(self.death)

    def alive_at_squared(self, sq) -> bool:
        return self.birth <= sq and (self.death is None or sq < self.death)

    def __str__(self):
        return f"H{self.dim} [{render(self.birth)}, {render(self.death)})"


def render(squared) -> str:
    """Decimal epsilon for a squared value, two places ('inf' for None)."""
    if squared is None:
        return "inf"
    return f"{math.sqrt(squared):.2f}"


@dataclass
class Barcode:
    bars: list = field(default_factory=list)
    n_points: int = 0
    threshold: object = None  # squared value, None if unbounded

    def dimension(self, d: int) -> list:
        return [b for b in self.bars if b.dim == d]

    def __len__(self):
        return len(self.bars)

    def sorted(self) -> list:
        inf = math.inf
        return sorted(self.bars, key=lambda b: (b.dim, b.birth, inf if b.death is None else b.death,
                                                b.birth_simplex, b.death_simplex))

    def intervals(self, d: int) -> list:
        """Sorted (birth, death) squared pairs of dimension ``d``."""
        return [(b.birth, b.death) for b in self.sorted() if b.dim == d]


def _union_find_h0(f: Filtration):
    n = f.n
    parent = list(range(n))

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    bars, merged = [], []
    edges = f.verts[1].tolist() if f.max_dim >= 1 else []
    diam = f.diam[1].tolist() if f.max_dim >= 1 else []
    for rank, ((u, v), d) in enumerate(zip(edges, diam)):
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        # every vertex is born at 0, so the elder rule falls back on the
        # filtration order of the roots: the later root dies
        young, old = (ru, rv) if ru > rv else (rv, ru)
        parent[young] = old
        merged.append(rank)
        bars.append(Bar(0, 0, f.squared(d), (young,), (u, v)))
    for v in range(n):
        if find(v) == v:
            bars.append(Bar(0, 0, None, (v,), ()))
    return bars, np.array(merged, dtype=np.int64)


def _exact_lookup(f: Filtration):
    """Units -> exact squared value, converting each distinct value once."""
    cache = {}

    def exact(units):
        v = cache.get(units)
        if v is None:
            v = cache[units] = f.squared(units)
        return v
    return exact


def _cohomology(f: Filtration, d: int, cleared: np.ndarray):
    """Pairs for dimension ``d`` (1 or 2); returns (bars, paired cofacet ranks)."""
    count = f.count(d)
    verts_d, diam_d = f.verts[d], f.diam[d]
    skip = np.zeros(count, bool)
    skip[cleared] = True
    if f.count(d + 1) == 0:
        bars = [Bar(d, f.squared(diam_d[s]), None, tuple(verts_d[s].tolist()))
                for s in range(count - 1, -1, -1) if not skip[s]]
        return bars, np.zeros(0, dtype=np.int64)

    fr = f.facet_ranks(d + 1)
    width = fr.shape[1]
    flat = fr.ravel()
    cof = np.repeat(np.arange(len(fr), dtype=np.int64), width)
    order = np.lexsort((cof, flat))
    cof_sorted = cof[order]
    ptr = np.searchsorted(flat[order], np.arange(count + 1))
    has = ptr[1:] > ptr[:-1]
    earliest = np.full(count, -1, dtype=np.int64)
    earliest[has] = cof_sorted[ptr[:-1][has]]
    latest_facet = fr.max(axis=1)
    apparent = has.copy()
    apparent[has] = latest_facet[earliest[has]] == np.arange(count)[has]

    verts_up, diam_up = f.verts[d + 1], f.diam[d + 1]
    ptr_l = ptr.tolist()
    cof_l = cof_sorted.tolist()
    pivot_col = {}      # cofacet rank -> reduced column (set), for reduced columns
    pivot_owner = {}    # cofacet rank -> simplex rank, for apparent pairs
    bars, deaths = [], []

    def coboundary(s):
        return set(cof_l[ptr_l[s]:ptr_l[s + 1]])

    exact = _exact_lookup(f)

    def bar(s, t):
        birth, low = exact(int(diam_d[s])), tuple(verts_d[s].tolist())
        if t is None:
            return Bar(d, birth, None, low)
        return Bar(d, birth, exact(int(diam_up[t])), low, tuple(verts_up[t].tolist()))

    # apparent pairs need no reduction: emit them in bulk
    app_idx = np.nonzero(apparent & ~skip)[0][::-1]
    app_t = earliest[app_idx]
    for s, t, dd, du, low, up in zip(app_idx.tolist(), app_t.tolist(), diam_d[app_idx].tolist(),
                                     diam_up[app_t].tolist(), verts_d[app_idx].tolist(),
                                     verts_up[app_t].tolist()):
        pivot_owner[t] = s
        bars.append(Bar(d, exact(dd), exact(du), tuple(low), tuple(up)))
    deaths.extend(app_t.tolist())

    for s in np.nonzero(~apparent & ~skip)[0][::-1].tolist():
        col = coboundary(s)
        while col:
            t = min(col)
            other = pivot_col.get(t)
            if other is None:
                owner = pivot_owner.get(t)
                if owner is None:
                    pivot_col[t] = col
                    bars.append(bar(s, t))
                    deaths.append(t)
                    break
                # an apparent pivot can only be reached from an earlier
                # simplex, whose column is then just the owner's coboundary
                if owner < s:
                    raise AssertionError("apparent pivot reached from a later simplex")
                other = pivot_col[t] = coboundary(owner)
            col ^= other
        else:
            bars.append(bar(s, None))
    return bars, np.array(deaths, dtype=np.int64)


def reduce(f: Filtration, max_hom_dim: Optional[int] = None) -> Barcode:
    """Barcode of ``f`` in dimensions 0 .. min(2, max_dim - 1).

    Classes still alive at the threshold get ``death=None``.  For the top
    simplex dimension no homology is reported, since its classes could be
    killed by simplices that were not built.
    """
    top = f.max_dim - 1 if max_hom_dim is None else min(max_hom_dim, f.max_dim - 1)
    top = min(top, 2)
    f.check()
    bars, cleared = _union_find_h0(f)
    for d in range(1, top + 1):
        more, cleared = _cohomology(f, d, cleared)
        bars.extend(more)
    return Barcode(bars, f.n, f.threshold)


def betti_at_squared(b: Barcode, sq) -> tuple:
    """(b0, b1, b2): bars with birth <= sq < death, sq a squared scale."""
    counts = [0, 0, 0]
    for bar in b.bars:
        if bar.dim <= 2 and bar.alive_at_squared(sq):
            counts[bar.dim] += 1
    return tuple(counts)


def exact_square(eps):
    """Squared scale for ``eps``.

    Ints and Fractions square exactly.  Floats are squared and snapped to a
    nearby rational with denominator <= 10**6 when within 1e-9, so that
    ``betti_at(b, math.sqrt(2))`` means exactly 2.
    """
    if isinstance(eps, (int, Fraction)):
        if eps < 0:
            raise ValueError("eps must be non-negative")
        return Fraction(eps) ** 2
    eps = float(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    sq = eps * eps
    snapped = Fraction(sq).limit_denominator(10**6)
    return snapped if abs(float(snapped) - sq) <= 1e-9 * max(1.0, sq) else Fraction(sq)


def betti_at(b: Barcode, eps) -> tuple:
    return betti_at_squared(b, exact_square(eps))
