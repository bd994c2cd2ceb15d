"""Automorphism groups of colored k-ary structures on ``m`` points.

A structure is a list of layers ``(k, colors)`` where ``colors`` has length
``m**k`` and gives a color id to every k-tuple of points (big-endian rank).
A permutation ``p`` is an automorphism when ``colors[p(t)] == colors[t]`` for
every layer and every tuple ``t``.

The search is ordered-partition backtracking.  Refinement hashes, for every
point and every position it can occupy, the multiset of (tuple color, cells
of the tuple's entries); cells are split by these signatures until nothing
changes.  Hash collisions can only make refinement coarser, and every
candidate automorphism is verified against the full coloring, so results are
exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gates import digit_table
from .groups import PermGroup, orbit_of
from .relations import Relation
from .weights import ResourceLimit, Weight, char_weight, dense_colors, is_relational, relation_of

DEFAULT_MAX_POINTS = 4096
DENSE_LIMIT = 1 << 26

_U = np.uint64
_GOLDEN = _U(0x9E3779B97F4A7C15)
_M1 = _U(0xBF58476D1CE4E5B9)
_M2 = _U(0x94D049BB133111EB)


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finaliser, elementwise on uint64 arrays (wrapping)."""
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> _U(30))) * _M1
        z = (z ^ (z >> _U(27))) * _M2
        return z ^ (z >> _U(31))


@dataclass
class ColoredStructure:
    degree: int
    layers: list[tuple[int, np.ndarray]] = field(default_factory=list)

    def add_layer(self, k: int, colors) -> "ColoredStructure":
        colors = np.asarray(colors, dtype=np.int64)
        if len(colors) != self.degree**k:
            raise ValueError(f"layer of arity {k} needs {self.degree**k} colors")
        self.layers.append((k, canonical_ids(colors)))
        return self

    def merged(self) -> "ColoredStructure":
        """Same automorphisms, one layer per arity (colors tupled)."""
        by_arity: dict[int, np.ndarray] = {}
        for k, c in self.layers:
            by_arity[k] = c if k not in by_arity else _tuple_ids(by_arity[k], c)
        return ColoredStructure(self.degree, [(k, by_arity[k]) for k in sorted(by_arity)])

    def is_automorphism(self, perm) -> bool:
        p = np.asarray(perm, dtype=np.int64)
        for k, colors in self.layers:
            if not np.array_equal(colors[_tuple_image(p, self.degree, k)], colors):
                return False
        return True


def canonical_ids(colors: np.ndarray) -> np.ndarray:
    """Relabel to contiguous ids in order of first appearance."""
    _, first, inverse = np.unique(colors, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[inverse.reshape(-1)].astype(np.int64)


def _tuple_ids(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return canonical_ids(a * (int(b.max(initial=0)) + 1) + b)


def _tuple_image(p: np.ndarray, m: int, k: int) -> np.ndarray:
    """Rank of ``(p[t1], ..., p[tk])`` for every tuple rank, flattened."""
    out = np.zeros((m,) * k, dtype=np.int64)
    for i in range(k):
        shape = [1] * k
        shape[i] = m
        out = out + (p * m ** (k - 1 - i)).reshape(shape)
    return out.reshape(-1)


# -- building structures from weights ----------------------------------------------


def product_factors(r: Relation) -> list[Relation]:
    """Split ``r`` into a cartesian product of consecutive-position factors."""
    if r.k == 1 or r.is_empty:
        return [r]
    d = r.digits()
    for s in range(1, r.k):
        left = np.unique(d[:, :s], axis=0)
        right = np.unique(d[:, s:], axis=0)
        if len(left) * len(right) == len(r):
            lr = Relation.from_tuples(r.q, [tuple(x) for x in left.tolist()], s)
            rr = Relation.from_tuples(r.q, [tuple(x) for x in right.tolist()], r.k - s)
            return product_factors(lr) + product_factors(rr)
    return [r]


def colored_structure_from_weights(q: int, n: int, weights: Sequence[Weight],
                                   factor_products: bool = False,
                                   max_points: int = DEFAULT_MAX_POINTS,
                                   dense_limit: int = DENSE_LIMIT) -> ColoredStructure:
    """Structure whose automorphisms are the ``n``-ary gates respecting every weight.

    With ``factor_products`` a relational weight whose relation is a
    cartesian product of nonempty factors is replaced by the factors.
    """
    m = q**n
    if m > max_points:
        raise ResourceLimit(f"{m} points exceed the limit of {max_points}")
    ws: list[Weight] = []
    for w in weights:
        if w.q != q:
            raise ValueError(f"weight over q={w.q}, expected q={q}")
        if factor_products and is_relational(w):
            ws.extend(char_weight(r) for r in product_factors(relation_of(w)))
        else:
            ws.append(w)
    s = ColoredStructure(m)
    for w in ws:
        ids, _ = dense_colors(w, n, limit=dense_limit)
        s.layers.append((w.k, ids))
    return s.merged()


# -- refinement -------------------------------------------------------------------


class _Refiner:
    def __init__(self, s: ColoredStructure):
        self.m = s.degree
        self.layers = []
        for k, colors in s.layers:
            if k == 0:
                continue
            base = _mix(colors.astype(_U) * _U(k + 1)).reshape((self.m,) * k)
            self.layers.append((k, base))

    def signatures(self, cells: np.ndarray) -> np.ndarray:
        m = self.m
        h = _mix(cells.astype(_U) + _U(0x5851F42D4C957F2D))
        sig = h.copy()
        for k, base in self.layers:
            acc = base
            for i in range(k):
                shape = [1] * k
                shape[i] = m
                acc = _mix(acc ^ (_mix(h + _U(i + 1)).reshape(shape)))
            for j in range(k):
                axes = tuple(a for a in range(k) if a != j)
                s = acc.sum(axis=axes, dtype=_U) if axes else acc
                with np.errstate(over="ignore"):
                    sig = _mix(sig ^ _mix(s + _U(1000 * k + j)))
        return sig

    def refine(self, cells: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Split to a fixpoint.  Returns the new cells and a trace of digests."""
        trace = []
        ncells = int(cells.max()) + 1
        while True:
            sig = self.signatures(cells)
            order = np.lexsort((sig, cells))
            sc, ss = cells[order], sig[order]
            new_start = np.ones(self.m, dtype=bool)
            new_start[1:] = (sc[1:] != sc[:-1]) | (ss[1:] != ss[:-1])
            ranks = np.cumsum(new_start) - 1
            new = np.empty_like(cells)
            new[order] = ranks
            count = int(ranks[-1]) + 1
            starts = np.flatnonzero(new_start)
            sizes = np.diff(np.append(starts, self.m))
            digest = _mix(ss[starts] ^ _mix(sizes.astype(_U)))
            with np.errstate(over="ignore"):
                trace.append(int(_mix(np.array([digest.sum(dtype=_U) + _U(count)], dtype=_U))[0]))
            if count == ncells:
                return cells, trace
            cells, ncells = new, count


def _individualize(cells: np.ndarray, x: int) -> np.ndarray:
    c = cells[x]
    new = cells + (cells >= c)
    new[x] = c
    return new


# -- search -----------------------------------------------------------------------


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    orbit_sizes: list[int] = field(default_factory=list)


def automorphism_group(s: ColoredStructure, engine: str = "backtrack",
                       max_points: int = DEFAULT_MAX_POINTS, brute_limit: int = 9,
                       stats: SearchStats | None = None) -> PermGroup:
    """Exact automorphism group of a colored structure."""
    if s.degree > max_points:
        raise ResourceLimit(f"{s.degree} points exceed the limit of {max_points}")
    for k, colors in s.layers:
        if len(colors) != s.degree**k:
            raise ValueError("malformed layer")
    if engine == "brute":
        return brute_force_group(s, brute_limit)
    if engine != "backtrack":
        raise ValueError(f"unknown engine {engine!r}")
    return _Search(s, stats or SearchStats()).run()


class _Search:
    def __init__(self, s: ColoredStructure, stats: SearchStats):
        self.s = s
        self.m = s.degree
        self.refiner = _Refiner(s)
        self.stats = stats

    def run(self) -> PermGroup:
        m = self.m
        cells, trace0 = self.refiner.refine(np.zeros(m, dtype=np.int64))
        self.levels: list[tuple[np.ndarray, int, int]] = []
        self.traces: list[list[int]] = []
        while int(cells.max()) + 1 < m:
            counts = np.bincount(cells)
            c = int(np.flatnonzero(counts > 1)[0])
            b = int(np.flatnonzero(cells == c)[0])
            self.levels.append((cells, c, b))
            cells, tr = self.refiner.refine(_individualize(cells, b))
            self.traces.append(tr)
        self.left_leaf = cells
        depth = len(self.levels)
        gens: list[np.ndarray] = []
        level_gens: list[np.ndarray] = []
        sizes = [1] * depth
        for i in range(depth - 1, -1, -1):
            cells_i, c, b = self.levels[i]
            orbit = set(orbit_of(b, level_gens, m))
            failed: set[int] = set()
            for g in np.flatnonzero(cells_i == c).tolist():
                if g in orbit or g in failed:
                    continue
                perm = self._find(i, g)
                if perm is not None:
                    gens.append(perm)
                    level_gens.append(perm)
                    orbit = set(orbit_of(b, level_gens, m))
                else:
                    failed.update(orbit_of(g, level_gens, m))
            sizes[i] = len(orbit)
        self.stats.orbit_sizes = sizes
        base = [b for _, _, b in self.levels]
        return PermGroup(m, [g.astype(np.int32) for g in gens], base_hint=base,
                         known_order=math.prod(sizes))

    def _find(self, i: int, gamma: int) -> np.ndarray | None:
        cells_i = self.levels[i][0]
        right, tr = self.refiner.refine(_individualize(cells_i, gamma))
        self.stats.nodes += 1
        if tr != self.traces[i]:
            return None
        return self._descend(i + 1, right)

    def _descend(self, level: int, right: np.ndarray) -> np.ndarray | None:
        if level == len(self.levels):
            self.stats.leaves += 1
            point_of_cell = np.empty(self.m, dtype=np.int64)
            point_of_cell[right] = np.arange(self.m)
            perm = point_of_cell[self.left_leaf]
            return perm if self.s.is_automorphism(perm) else None
        c = self.levels[level][1]
        for d in np.flatnonzero(right == c).tolist():
            nxt, tr = self.refiner.refine(_individualize(right, d))
            self.stats.nodes += 1
            if tr != self.traces[level]:
                continue
            found = self._descend(level + 1, nxt)
            if found is not None:
                return found
        return None


# -- brute-force oracle --------------------------------------------------------------


def brute_force_automorphisms(s: ColoredStructure, limit: int = 9, chunk_cells: int = 1 << 22) -> np.ndarray:
    """All automorphisms by filtering ``Sym(m)``; rows are image arrays."""
    m = s.degree
    if m > limit:
        raise ResourceLimit(f"brute force over Sym({m}) exceeds the limit Sym({limit})")
    checks = []
    for k, colors in s.layers:
        cols = digit_table(m, k) if k else np.zeros((1, 0), dtype=np.int64)
        checks.append((k, colors, cols))
    width = max((m**k for k, _ in s.layers), default=1)
    batch = max(1, chunk_cells // max(width, 1))
    found = []
    perms_iter = itertools.permutations(range(m))
    while True:
        block = list(itertools.islice(perms_iter, batch))
        if not block:
            break
        P = np.asarray(block, dtype=np.int64)
        ok = np.ones(len(P), dtype=bool)
        for k, colors, cols in checks:
            idx = np.zeros((len(P), m**k), dtype=np.int64)
            for i in range(k):
                idx = idx * m + P[:, cols[:, i]]
            ok &= (colors[idx] == colors[None, :]).all(axis=1)
        found.append(P[ok])
    return np.concatenate(found) if found else np.zeros((0, m), dtype=np.int64)


def brute_force_group(s: ColoredStructure, limit: int = 9, seed: int = 0) -> PermGroup:
    auts = brute_force_automorphisms(s, limit)
    total = len(auts)
    rng = np.random.default_rng(seed)
    gens: list[np.ndarray] = []
    group = PermGroup(s.degree, [])
    while group.order() < total:
        g = auts[int(rng.integers(total))]
        if not group.contains(g):
            gens.append(g)
            group = PermGroup(s.degree, gens)
    return group
