"""Permutation groups via a deterministic Schreier-Sims stabilizer chain.

Permutations act on the right: ``x^g = g[x]`` and ``(a*b)[x] = b[a[x]]``.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gates import Gate, digit_table, is_prime, ranks_of

DTYPE = np.int32


class GroupTooLarge(RuntimeError):
    pass


def as_perm(p, degree: int | None = None) -> np.ndarray:
    if isinstance(p, Gate):
        p = p.map
    a = np.asarray(p, dtype=DTYPE)
    if degree is not None and len(a) != degree:
        raise ValueError(f"permutation of degree {len(a)}, expected {degree}")
    return a


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a`` then ``b``."""
    return b[a]


def invert(a: np.ndarray) -> np.ndarray:
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a), dtype=a.dtype)
    return inv


def _key(a: np.ndarray) -> bytes:
    return a.tobytes()


class _Level:
    __slots__ = ("beta", "gens", "orbit", "trans", "inv", "checked")

    def __init__(self, beta: int):
        self.beta = beta
        self.gens: list[np.ndarray] = []
        self.orbit: list[int] = [beta]
        self.trans: dict[int, np.ndarray] = {}
        self.inv: dict[int, np.ndarray] = {}
        self.checked: set[tuple[int, int]] = set()

    def start(self, identity: np.ndarray):
        self.trans[self.beta] = identity
        self.inv[self.beta] = identity

    def extend(self):
        """Close the orbit under the generators, keeping existing representatives."""
        trans = self.trans
        pos = 0
        while pos < len(self.orbit):
            pt = self.orbit[pos]
            u = trans[pt]
            for s in self.gens:
                img = int(s[pt])
                if img not in trans:
                    trans[img] = s[u]
                    self.orbit.append(img)
            pos += 1

    def rep_inverse(self, pt: int) -> np.ndarray:
        r = self.inv.get(pt)
        if r is None:
            r = self.inv[pt] = invert(self.trans[pt])
        return r


class PermGroup:
    """A permutation group on ``{0, ..., degree-1}`` with a stabilizer chain.

    ``base_hint`` seeds the base; ``known_order`` lets the construction stop
    as soon as the chain accounts for that many elements.  The product of the
    basic orbit lengths of a partial chain never exceeds the group order, so
    reaching it certifies completeness.
    """

    def __init__(self, degree: int, gens: Iterable = (), base_hint: Sequence[int] = (),
                 known_order: int | None = None):
        self.degree = int(degree)
        self.identity = np.arange(self.degree, dtype=DTYPE)
        gens = [as_perm(g, self.degree) for g in gens]
        for g in gens:
            if not np.array_equal(np.sort(g), self.identity):
                raise ValueError("generator is not a permutation")
        self.gens = [g for g in gens if not np.array_equal(g, self.identity)]
        self.levels: list[_Level] = []
        self._known = known_order
        self._build(list(base_hint))

    # -- construction -------------------------------------------------------

    def _new_level(self, beta: int) -> _Level:
        lvl = _Level(beta)
        lvl.start(self.identity)
        self.levels.append(lvl)
        return lvl

    def _moved_point(self, g: np.ndarray) -> int:
        return int(np.flatnonzero(g != self.identity)[0])

    def _build(self, base_hint: list[int]):
        for b in base_hint:
            if not any(l.beta == b for l in self.levels):
                self._new_level(int(b))
        for g in self.gens:
            if all(g[l.beta] == l.beta for l in self.levels):
                self._new_level(self._moved_point(g))
        for depth, lvl in enumerate(self.levels):
            fixed = [l.beta for l in self.levels[:depth]]
            lvl.gens = [g for g in self.gens if all(g[b] == b for b in fixed)]
            lvl.extend()
        if self._complete():
            return
        i = len(self.levels) - 1
        while i >= 0:
            jumped = self._check_level(i)
            if jumped is not None:
                i = jumped
                if self._complete():
                    break
            else:
                i -= 1
        self._trim()

    def _complete(self) -> bool:
        return self._known is not None and self.order() == self._known

    def _check_level(self, i: int) -> int | None:
        lvl = self.levels[i]
        for pt in list(lvl.orbit):
            u = lvl.trans[pt]
            for gi, s in enumerate(lvl.gens):
                if (pt, gi) in lvl.checked:
                    continue
                lvl.checked.add((pt, gi))
                img = int(s[pt])
                h = lvl.rep_inverse(img)[s[u]]
                if np.array_equal(h, self.identity):
                    continue
                h, j = self._sift(h, i + 1)
                if np.array_equal(h, self.identity):
                    continue
                if j == len(self.levels):
                    self._new_level(self._moved_point(h))
                for l in range(i + 1, j + 1):
                    self.levels[l].gens.append(h)
                    self.levels[l].extend()
                return j
        return None

    def _trim(self):
        # drop trailing trivial levels produced by base hints
        while self.levels and len(self.levels[-1].orbit) == 1 and not self.levels[-1].gens:
            self.levels.pop()

    def _sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            b = int(g[lvl.beta])
            if b not in lvl.trans:
                return g, j
            g = lvl.rep_inverse(b)[g]
        return g, len(self.levels)

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [l.beta for l in self.levels]

    @property
    def basic_orbit_sizes(self) -> list[int]:
        return [len(l.orbit) for l in self.levels]

    def order(self) -> int:
        return math.prod(len(l.orbit) for l in self.levels)

    def contains(self, p) -> bool:
        g = as_perm(p)
        if len(g) != self.degree:
            return False
        h, j = self._sift(g)
        return j == len(self.levels) and bool(np.array_equal(h, self.identity))

    __contains__ = contains

    def strong_generators(self) -> list[np.ndarray]:
        seen, out = set(), []
        for lvl in self.levels:
            for g in lvl.gens:
                if _key(g) not in seen:
                    seen.add(_key(g))
                    out.append(g)
        return out

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.order() == other.order() and self.is_subgroup_of(other)

    __hash__ = None

    def orbit(self, point: int) -> list[int]:
        return orbit_of(point, self.gens, self.degree)

    def elements(self, cap: int | None = 10**6) -> Iterator[np.ndarray]:
        """Every element, as a product of transversal representatives."""
        if cap is not None and self.order() > cap:
            raise GroupTooLarge(f"group of order {self.order()} exceeds cap {cap}")
        reps = [list(l.trans.values()) for l in self.levels]
        for choice in itertools.product(*reversed(reps)):
            g = self.identity
            for u in choice:
                g = u[g]
            yield g

    def element_batches(self, cap: int | None = 10**6, batch: int = 1 << 16) -> Iterator[np.ndarray]:
        """Every element, as 2-D arrays of at most about ``batch`` rows.

        Same elements as :meth:`elements`, built with numpy by composing
        whole transversals at once.
        """
        if cap is not None and self.order() > cap:
            raise GroupTooLarge(f"group of order {self.order()} exceeds cap {cap}")
        reps = [np.asarray(list(l.trans.values()), dtype=DTYPE) for l in self.levels]

        def expand(depth: int, prefix: np.ndarray):
            # prefix holds products of the levels below ``depth`` (applied first)
            if depth < 0:
                yield prefix
                return
            r = reps[depth]
            if len(prefix) * len(r) <= batch:
                yield from expand(depth - 1, r[:, prefix].reshape(-1, self.degree))
            else:
                for u in r:
                    yield from expand(depth - 1, u[prefix])

        yield from expand(len(self.levels) - 1, self.identity[None, :])

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform random element: one random representative per level."""
        g = self.identity
        for lvl in reversed(self.levels):
            u = lvl.trans[lvl.orbit[int(rng.integers(len(lvl.orbit)))]]
            g = u[g]
        return g

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def orbit_of(point: int, gens: Sequence[np.ndarray], degree: int) -> list[int]:
    seen = {int(point)}
    out = [int(point)]
    pos = 0
    while pos < len(out):
        x = out[pos]
        for g in gens:
            y = int(g[x])
            if y not in seen:
                seen.add(y)
                out.append(y)
        pos += 1
    return out


def orbit_partition(gens: Sequence[np.ndarray], degree: int) -> np.ndarray:
    """Label of the orbit of every point (labels are orbit minima)."""
    parent = np.arange(degree)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in np.flatnonzero(g != np.arange(degree)).tolist():
            a, b = find(x), find(int(g[x]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return np.array([find(x) for x in range(degree)])


# -- standard groups ------------------------------------------------------------


def symmetric_group(degree: int) -> PermGroup:
    if degree < 2:
        return PermGroup(max(degree, 1), [])
    swap = np.arange(degree, dtype=DTYPE)
    swap[[0, 1]] = [1, 0]
    cycle = np.roll(np.arange(degree, dtype=DTYPE), -1)
    return PermGroup(degree, [swap, cycle], known_order=math.factorial(degree))


def gate_group(gates: Iterable[Gate], q: int, n: int, **kw) -> PermGroup:
    from .gates import pad

    return PermGroup(q**n, [pad(g, n).map for g in gates], **kw)


def wire_group(q: int, n: int) -> PermGroup:
    """All wire permutations of ``A^n``."""
    from .gates import wire_perm

    gens = [wire_perm(q, [1, 0] + list(range(2, n))).map,
            wire_perm(q, list(range(1, n)) + [0]).map] if n >= 2 else []
    return PermGroup(q**n, gens, known_order=math.factorial(n))


def wreath_group(base: PermGroup, n: int) -> PermGroup:
    """``base wr Sym(n)`` acting on ``A^n`` for ``base`` on ``A``."""
    q = base.degree
    digits = digit_table(q, n)
    gens = []
    for b in base.gens:
        d = digits.copy()
        d[:, 0] = b[d[:, 0]]
        gens.append(ranks_of(d, q))
    gens.extend(wire_group(q, n).gens)
    order = base.order() ** n * math.factorial(n)
    return PermGroup(q**n, gens, known_order=order)


def affine_group_order(p: int, n: int) -> int:
    return p**n * math.prod(p**n - p**i for i in range(n))


def affine_group(p: int, n: int) -> PermGroup:
    """``AGL(n, p)`` acting on ``GF(p)^n``."""
    from .gates import affine_gate

    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = np.eye(n, dtype=np.int64)
                m[i, j] = 1
                gens.append(affine_gate(p, m).map)
    if p > 2:
        g = next(a for a in range(2, p) if all(pow(a, (p - 1) // r, p) != 1
                                                for r in range(2, p) if (p - 1) % r == 0 and is_prime(r)))
        m = np.eye(n, dtype=np.int64)
        m[0, 0] = g
        gens.append(affine_gate(p, m).map)
    shift = [1] + [0] * (n - 1)
    gens.append(affine_gate(p, np.eye(n, dtype=np.int64), shift).map)
    return PermGroup(p**n, gens, known_order=affine_group_order(p, n))
