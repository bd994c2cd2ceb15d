"""Finitary relations on ``{0, ..., q-1}`` and the usual relational-clone operations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gates import Gate, check_alphabet, digit_table, is_prime, rank, ranks_of, unrank


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """A ``k``-ary relation stored as the sorted ranks of its tuples."""

    q: int
    k: int
    tuples: tuple[int, ...]

    def __post_init__(self):
        check_alphabet(self.q)
        if self.k < 1:
            raise ValueError("relation arity must be >= 1")
        ranks = tuple(sorted(set(int(t) for t in self.tuples)))
        if ranks and not (0 <= ranks[0] and ranks[-1] < self.q**self.k):
            raise ValueError("tuple rank out of range")
        object.__setattr__(self, "tuples", ranks)

    @classmethod
    def from_tuples(cls, q: int, tuples: Iterable[Sequence[int] | str], k: int | None = None) -> "Relation":
        """Build from digit tuples or digit strings such as ``"0110"``."""
        rows = [tuple(int(c) for c in t) if isinstance(t, str) else tuple(t) for t in tuples]
        if k is None:
            if not rows:
                raise ValueError("arity is required for an empty relation")
            k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ArityMismatch("tuples of different lengths")
        return cls(q, k, tuple(rank(r, q) for r in rows))

    @classmethod
    def from_predicate(cls, q: int, k: int, pred) -> "Relation":
        return cls(q, k, tuple(r for r in range(q**k) if pred(*unrank(r, q, k))))

    @property
    def is_empty(self) -> bool:
        return not self.tuples

    @property
    def is_full(self) -> bool:
        return len(self.tuples) == self.q**self.k

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, t) -> bool:
        return rank(t, self.q) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.tuples)
            object.__setattr__(self, "_cached_set", s)
        return s

    def digits(self) -> np.ndarray:
        """Array of shape ``(len(R), k)``."""
        if not self.tuples:
            return np.zeros((0, self.k), dtype=np.int64)
        return digit_table(self.q, self.k)[np.asarray(self.tuples)]

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [unrank(r, self.q, self.k) for r in self.tuples]

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.q**self.k, dtype=bool)
        out[list(self.tuples)] = True
        return out

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k, "tuples": [list(t) for t in self.as_tuples()]}

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        return cls.from_tuples(int(data["q"]), data["tuples"], int(data["k"]))

    def __str__(self):
        sep = "" if self.q <= 10 else ","
        return "{" + ",".join(sep.join(map(str, t)) for t in self.as_tuples()) + "}"


# -- relational-clone operations --------------------------------------------------


def permute_entries(r: Relation, sigma: Sequence[int]) -> Relation:
    """Move entry ``j`` of every tuple to position ``sigma[j]`` (0-based)."""
    if sorted(sigma) != list(range(r.k)):
        raise ValueError("sigma is not a permutation of the positions")
    d = r.digits()
    out = np.empty_like(d)
    out[:, list(sigma)] = d
    return Relation(r.q, r.k, tuple(ranks_of(out, r.q).tolist()))


def project(r: Relation, drop: int) -> Relation:
    """Existential projection deleting position ``drop`` (1-based)."""
    if r.k < 2:
        raise ArityMismatch("cannot project a unary relation")
    if not 1 <= drop <= r.k:
        raise IndexError(f"position {drop} out of range")
    d = np.delete(r.digits(), drop - 1, axis=1)
    return Relation(r.q, r.k - 1, tuple(ranks_of(d, r.q).tolist()))


def product(r: Relation, s: Relation) -> Relation:
    if r.q != s.q:
        raise ValueError("alphabet mismatch")
    size = s.q**s.k
    return Relation(r.q, r.k + s.k, tuple(a * size + b for a in r.tuples for b in s.tuples))


def intersect(r: Relation, s: Relation) -> Relation:
    if r.q != s.q or r.k != s.k:
        raise ArityMismatch("intersection needs equal alphabet and arity")
    return Relation(r.q, r.k, tuple(r._set & s._set))


def full_relation(q: int, k: int) -> Relation:
    return Relation(q, k, tuple(range(q**k)))


def equality_relation(q: int) -> Relation:
    """The ternary relation ``{(a, a, b)}``."""
    return Relation.from_predicate(q, 3, lambda a, b, c: a == b)


def diagonal(q: int) -> Relation:
    """The binary equality ``{(a, a)}``."""
    return Relation.from_predicate(q, 2, lambda a, b: a == b)


def pattern_relation(q: int, blocks: Iterable[Iterable[int]], k: int) -> Relation:
    """Tuples constant on each block of a partition of the 0-based positions."""
    blocks = [list(b) for b in blocks]
    return Relation.from_predicate(
        q, k, lambda *a: all(a[i] == a[b[0]] for b in blocks for i in b))


def equivalence_pattern(r: Relation) -> list[list[int]] | None:
    """Blocks ``E`` with ``r == pattern_relation(q, E, k)``, or ``None``.

    The finest candidate is read off from the relation itself: two positions
    are in one block iff every tuple agrees on them.
    """
    if r.is_empty:
        return None
    d = r.digits()
    blocks: list[list[int]] = []
    for i in range(r.k):
        for b in blocks:
            if np.array_equal(d[:, b[0]], d[:, i]):
                b.append(i)
                break
        else:
            blocks.append([i])
    return blocks if pattern_relation(r.q, blocks, r.k) == r else None


def respects(f: Gate, r: Relation, chunk: int = 1 << 15) -> bool:
    """``f`` maps ``R^n`` into itself, checked by enumerating ``R^n``.

    Arrays are ``k x n``: rows are points of ``A^n`` and every column lies in
    ``R``.  By bijectivity this is equivalent to ``f`` preserving ``R^n``.
    """
    if f.q != r.q:
        raise ValueError("alphabet mismatch")
    if r.is_empty:
        return True
    q, n, k = r.q, f.n, r.k
    rows = r.digits()  # |R| x k
    fmap = np.asarray(f.map, dtype=np.int64)
    member = r.indicator()
    row_w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    col_w = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    digits_n = digit_table(q, n)
    total = len(rows) ** n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        choice = np.empty((len(idx), n), dtype=np.int64)
        for i in range(n - 1, -1, -1):
            idx, choice[:, i] = np.divmod(idx, len(rows))
        arrays = rows[choice]  # N x n(columns) x k(rows)
        points = np.einsum("ncj,c->nj", arrays, row_w)  # N x k row ranks
        images = digits_n[fmap[points]]  # N x k x n
        cols = np.einsum("njc,j->nc", images, col_w)
        if not member[cols].all():
            return False
    return True


# -- builtin relations -------------------------------------------------------------


def _require_prime(q: int):
    if not is_prime(q):
        raise ValueError(f"alphabet size {q} is not prime")


def iota(q: int, m: int) -> Relation:
    """``m``-tuples with at least one repeated entry."""
    if not 2 <= m:
        raise ValueError("iota needs m >= 2")
    return Relation.from_predicate(q, m, lambda *a: len(set(a)) < m)


def neq(q: int) -> Relation:
    return Relation.from_predicate(q, 2, lambda a, b: a != b)


def leq_chain(q: int) -> Relation:
    return Relation.from_predicate(q, 2, lambda a, b: a <= b)


def affine_relation(q: int) -> Relation:
    """``a + b = c + d`` mod ``q``."""
    _require_prime(q)
    return Relation.from_predicate(q, 4, lambda a, b, c, d: (a + b - c - d) % q == 0)


def linear_relation(q: int) -> Relation:
    """``a + b = c`` mod ``q``."""
    _require_prime(q)
    return Relation.from_predicate(q, 3, lambda a, b, c: (a + b - c) % q == 0)


def selfdual_relation(sigma: Sequence[int]) -> Relation:
    """Graph ``{(a, sigma(a))}`` of a fixed-point-free permutation."""
    q = len(sigma)
    if sorted(sigma) != list(range(q)):
        raise ValueError("not a permutation")
    if any(sigma[a] == a for a in range(q)):
        raise ValueError("permutation has a fixed point")
    return Relation.from_tuples(q, [(a, sigma[a]) for a in range(q)])


def unary(q: int, elements: Iterable[int]) -> Relation:
    return Relation.from_tuples(q, [(a,) for a in elements], k=1)


def all_unary_subsets(q: int, nonempty: bool = True) -> list[Relation]:
    out = []
    for size in range(1 if nonempty else 0, q + 1):
        out.extend(unary(q, c) for c in itertools.combinations(range(q), size))
    return out


def all_relations(q: int, k: int, nonempty: bool = True) -> Iterable[Relation]:
    size = q**k
    for mask in range(1 if nonempty else 0, 2**size):
        yield Relation(q, k, tuple(i for i in range(size) if mask >> (size - 1 - i) & 1))


def square_relation() -> Relation:
    """Edges of the 4-cycle 0-1-2-3-0, both directions."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Relation.from_tuples(4, edges + [(b, a) for a, b in edges])
