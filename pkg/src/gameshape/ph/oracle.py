"""Brute-force Betti numbers of a Rips complex at one scale, for testing.

Deliberately shares nothing with the filtration/reduction code: cliques are
grown with plain Python sets and boundary ranks come from Gaussian
elimination over GF(2) on integer bitsets.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

MAX_ORACLE_POINTS = 64


class OracleTooLarge(ValueError):
    pass


def _squared_limit(m, eps, squared):
    if (eps is None) == (squared is None):
        raise ValueError("give exactly one of eps or squared")
    if squared is None:
        if isinstance(eps, float):
            # floats are trusted only to 1e-9, matching the snapping in betti_at
            sq = Fraction(eps * eps).limit_denominator(10**6)
            if abs(float(sq) - eps * eps) > 1e-9 * max(1.0, eps * eps):
                sq = Fraction(eps * eps)
        else:
            sq = Fraction(eps) ** 2
    else:
        sq = Fraction(squared)
    return sq * m.denominator


def rips_complex(m, limit_units, top_dim: int) -> list:
    """Simplices by dimension, each a sorted list of vertex tuples."""
    n = m.n
    rows = m.entries.tolist()
    adj = [{j for j in range(n) if j != i and rows[i][j] <= limit_units} for i in range(n)]
    layers = [[(v,) for v in range(n)]]
    for _ in range(top_dim):
        nxt = []
        for s in layers[-1]:
            common = set.intersection(*(adj[v] for v in s))
            nxt.extend(s + (w,) for w in sorted(common) if w > s[-1])
        layers.append(nxt)
    return layers


def gf2_rank(columns) -> int:
    pivots = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


def boundary_columns(lower: list, upper: list) -> list:
    index = {s: i for i, s in enumerate(lower)}
    cols = []
    for s in upper:
        v = 0
        for face in combinations(s, len(s) - 1):
            v |= 1 << index[face]
        cols.append(v)
    return cols


def oracle_ranks(m, eps=None, top_dim: int = 3, *, squared=None):
    """(simplex counts per dimension, boundary ranks per dimension) up to ``top_dim``."""
    if m.n > MAX_ORACLE_POINTS:
        raise OracleTooLarge(f"oracle is limited to {MAX_ORACLE_POINTS} points, got {m.n}")
    layers = rips_complex(m, _squared_limit(m, eps, squared), top_dim)
    counts = [len(layer) for layer in layers]
    ranks = [0] + [gf2_rank(boundary_columns(layers[k - 1], layers[k])) for k in range(1, top_dim + 1)]
    return counts, ranks


def betti_oracle(m, eps=None, max_betti_dim: int = 2, *, squared=None) -> tuple:
    """b_k = dim C_k - rank d_k - rank d_{k+1} for k <= max_betti_dim."""
    counts, ranks = oracle_ranks(m, eps, max_betti_dim + 1, squared=squared)
    return tuple(counts[k] - ranks[k] - ranks[k + 1] for k in range(max_betti_dim + 1))
