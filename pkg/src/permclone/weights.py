"""Weight maps ``w: A^k -> M`` into commutative monoids and their closure operations.

A gate ``f`` of arity ``n`` respects ``w`` when every ``k x n`` array ``a``
satisfies ``w(a) == w(f(a))``, where ``w(a)`` is the monoid product of ``w``
over the columns of ``a`` and ``f(a)`` applies ``f`` to each row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import monoids as mo
from .gates import Gate, check_alphabet, digit_table, is_prime, rank, ranks_of
from .monoids import BOOL_AND, INF, NAT_ADD, NAT_ADD_INF, NAT_MUL, Monoid, MonoidHom, Semiring
from .relations import Relation


class WeightError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Weight:
    q: int
    k: int
    monoid: Monoid
    values: tuple

    def __post_init__(self):
        check_alphabet(self.q)
        if self.k < 1:
            raise WeightError("weight arity must be >= 1")
        vals = tuple(self.values)
        if len(vals) != self.q**self.k:
            raise WeightError(f"expected {self.q**self.k} values, got {len(vals)}")
        bad = [v for v in set(vals) if not self.monoid.contains(v)]
        if bad:
            raise WeightError(f"values {bad!r} are not in {self.monoid.name}")
        object.__setattr__(self, "values", vals)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return self.values[rank(point, self.q)]

    def image(self) -> list:
        return list(dict.fromkeys(self.values))

    def __eq__(self, other):
        return (isinstance(other, Weight) and (self.q, self.k) == (other.q, other.k)
                and self.monoid == other.monoid and self.values == other.values)

    def __hash__(self):
        return hash((self.q, self.k, self.values))

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k, "monoid": self.monoid.to_json(),
                "values": [self.monoid.encode(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "Weight":
        m = mo.monoid_from_json(data["monoid"])
        return cls(int(data["q"]), int(data["k"]), m, tuple(m.decode(v) for v in data["values"]))


def weight_from_function(q: int, k: int, monoid: Monoid, fn) -> Weight:
    return Weight(q, k, monoid, tuple(fn(*t) for t in map(tuple, digit_table(q, k).tolist())))


def char_weight(r: Relation) -> Weight:
    """Characteristic weight of a relation into ``bool_and``."""
    return Weight(r.q, r.k, BOOL_AND, tuple(int(x) for x in r.indicator()))


def is_relational(w: Weight) -> bool:
    return w.monoid == BOOL_AND


def relation_of(w: Weight) -> Relation:
    if not is_relational(w):
        raise WeightError("not a bool_and weight")
    return Relation(w.q, w.k, tuple(i for i, v in enumerate(w.values) if v))


def weight_eval(w: Weight, array) -> Any:
    """Monoid product of ``w`` over the columns of a ``k x n`` array."""
    a = np.asarray(array, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != w.k:
        raise WeightError(f"array must have {w.k} rows")
    if a.size and (a.min() < 0 or a.max() >= w.q):
        raise WeightError("array entry out of range")
    return w.monoid.product(w.values[rank(col, w.q)] for col in a.T.tolist())


# -- colorings of row tuples -----------------------------------------------------


class _Canon:
    """Shared value <-> id table so that id arrays from several calls agree."""

    def __init__(self, w: Weight):
        self.monoid = w.monoid
        self.values: list = []
        self.ids: dict = {}
        self.memo: dict = {}
        self.base = np.array([self.id(v) for v in w.values], dtype=np.int64)

    def id(self, v) -> int:
        i = self.ids.get(v)
        if i is None:
            i = self.ids[v] = len(self.values)
            self.values.append(v)
        return i

    def combine(self, acc: np.ndarray, cur: np.ndarray) -> np.ndarray:
        width = int(max(acc.max(initial=0), cur.max(initial=0))) + 1
        codes = acc * width + cur
        uniq, inverse = np.unique(codes, return_inverse=True)
        out = np.empty(len(uniq), dtype=np.int64)
        for j, code in enumerate(uniq.tolist()):
            a, b = divmod(code, width)
            key = (a, b) if a <= b else (b, a)
            r = self.memo.get(key)
            if r is None:
                r = self.memo[key] = self.id(self.monoid.op(self.values[a], self.values[b]))
            out[j] = r
        return out[inverse.reshape(-1)]


def row_tuple_colors(w: Weight, n: int, rows: np.ndarray, canon: _Canon | None = None) -> np.ndarray:
    """Ids of ``w(a)`` for arrays given by their row points.

    ``rows`` has shape ``(N, k)`` and holds point ranks in ``A^n``; entry
    ``[t, j]`` is row ``j`` of array ``t``.  Equal ids mean equal monoid
    values (ids are canonical within one ``canon``).
    """
    canon = canon or _Canon(w)
    digits = digit_table(w.q, n)[rows]  # N x k x n
    col_w = w.q ** np.arange(w.k - 1, -1, -1, dtype=np.int64)
    cols = np.einsum("tjc,j->tc", digits, col_w)  # N x n column ranks
    ids = canon.base[cols]
    acc = ids[:, 0]
    for c in range(1, n):
        acc = canon.combine(acc, ids[:, c])
    return acc


def dense_colors(w: Weight, n: int, chunk: int = 1 << 16, limit: int = 1 << 26) -> tuple[np.ndarray, list]:
    """Color of every ``k``-tuple of points of ``A^n`` (flattened, big-endian).

    Returns ``(ids, values)`` with ids contiguous from 0 in order of first
    appearance.
    """
    m = w.q**n
    total = m**w.k
    if total > limit:
        raise ResourceLimit(f"dense coloring needs {total} entries (limit {limit})")
    canon = _Canon(w)
    out = np.empty(total, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        rows = np.empty((len(idx), w.k), dtype=np.int64)
        for j in range(w.k - 1, -1, -1):
            idx, rows[:, j] = np.divmod(idx, m)
        out[start:start + len(rows)] = row_tuple_colors(w, n, rows, canon)
    # relabel by first appearance
    _, first, inverse = np.unique(out, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    values = [canon.values[v] for v in np.unique(out)[order].tolist()]
    return relabel[inverse.reshape(-1)], values


class ResourceLimit(RuntimeError):
    pass


def respects_weight(f: Gate, w: Weight, chunk: int = 1 << 15) -> bool:
    """``w(a) == w(f(a))`` for every ``k x n`` array ``a``."""
    if f.q != w.q:
        raise WeightError("alphabet mismatch")
    n, k = f.n, w.k
    m = f.size
    fmap = np.asarray(f.map, dtype=np.int64)
    canon = _Canon(w)
    total = m**k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        rows = np.empty((len(idx), k), dtype=np.int64)
        for j in range(k - 1, -1, -1):
            idx, rows[:, j] = np.divmod(idx, m)
        before = row_tuple_colors(w, n, rows, canon)
        after = row_tuple_colors(w, n, fmap[rows], canon)
        if not np.array_equal(before, after):
            return False
    return True


def respects_componentwise(f: Gate, r: Relation, chunk: int = 1 << 14) -> bool:
    """Every component ``f_i: A^n -> A`` maps columns from ``R`` into ``R``.

    This is the clone-theoretic polymorphism test applied one output wire at
    a time, so it does not use the bijectivity of ``f``.
    """
    from .gates import components

    if f.q != r.q:
        raise WeightError("alphabet mismatch")
    if r.is_empty:
        return True
    rows = r.digits()
    member = r.indicator()
    n, q = f.n, r.q
    tables = [np.asarray(c.values, dtype=np.int64) for c in components(f)]
    row_w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    total = len(rows) ** n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        choice = np.empty((len(idx), n), dtype=np.int64)
        for i in range(n - 1, -1, -1):
            idx, choice[:, i] = np.divmod(idx, len(rows))
        points = np.einsum("tcj,c->tj", rows[choice], row_w)
        for table in tables:
            if not member[ranks_of(table[points], q)].all():
                return False
    return True


# -- derived weights ----------------------------------------------------------------


def counting_weight(r: Relation, i: int) -> Weight:
    """``c(a) = |{x : a with x inserted at position i is in R}|`` into ``nat_mul``."""
    if r.k < 2:
        raise WeightError("counting weights need arity >= 2")
    if not 1 <= i <= r.k:
        raise IndexError(f"position {i} out of range 1..{r.k}")
    d = r.digits()
    rest = np.delete(d, i - 1, axis=1)
    counts = np.bincount(ranks_of(rest, r.q), minlength=r.q ** (r.k - 1)) if len(d) else \
        np.zeros(r.q ** (r.k - 1), dtype=np.int64)
    return Weight(r.q, r.k - 1, NAT_MUL, tuple(int(c) for c in counts))


def _natural_values(w: Weight):
    if not w.monoid.totally_ordered_naturals:
        raise WeightError(f"level relations need an N-valued weight, not {w.monoid.name}")
    return w.values


def max_level_relation(w: Weight) -> Relation:
    vals = _natural_values(w)
    top = max(vals)
    return Relation(w.q, w.k, tuple(i for i, v in enumerate(vals) if v == top))


def min_level_relation(w: Weight) -> Relation:
    vals = _natural_values(w)
    low = min(vals)
    return Relation(w.q, w.k, tuple(i for i, v in enumerate(vals) if v == low))


# -- closure operations ---------------------------------------------------------------


def substitute_indices(w: Weight, rho: Sequence[int], l: int) -> Weight:
    """``(x_1..x_l) -> w(x_rho(1), ..., x_rho(k))`` with 1-based ``rho``."""
    if len(rho) != w.k:
        raise WeightError(f"rho must have length {w.k}")
    if any(not 1 <= j <= l for j in rho):
        raise WeightError("rho maps outside 1..l")
    d = digit_table(w.q, l)[:, [j - 1 for j in rho]]
    return Weight(w.q, l, w.monoid, tuple(w.values[i] for i in ranks_of(d, w.q).tolist()))


def map_monoid(w: Weight, phi: MonoidHom) -> Weight:
    if phi.source != w.monoid:
        raise WeightError(f"homomorphism source {phi.source.name} != {w.monoid.name}")
    if not phi.source.is_finite:
        phi.validate_on(w.image())
    return Weight(w.q, w.k, phi.target, tuple(phi(v) for v in w.values))


def restrict_monoid(w: Weight, sub: Monoid) -> Weight:
    """Regard ``w`` as a weight into a submonoid containing its image."""
    img = w.image()
    if any(not sub.contains(v) for v in img):
        raise WeightError("image is not contained in the submonoid")
    if sub.identity != w.monoid.identity:
        raise WeightError("submonoid has a different identity")
    for a in img:
        for b in img:
            if sub.op(a, b) != w.monoid.op(a, b):
                raise WeightError("submonoid operation disagrees with the monoid")
    return Weight(w.q, w.k, sub, w.values)


def product_weights(*ws: Weight) -> Weight:
    if not ws:
        raise WeightError("empty product")
    q, k = ws[0].q, ws[0].k
    if any((v.q, v.k) != (q, k) for v in ws):
        raise WeightError("product needs a common alphabet and arity")
    m = mo.ProductMonoid([v.monoid for v in ws])
    return Weight(q, k, m, tuple(zip(*(v.values for v in ws))))


def const_one_weight(q: int) -> Weight:
    """``c1(a) = 1`` into ``(N, +)``."""
    return Weight(q, 1, NAT_ADD, (1,) * q)


def delta_weight(q: int) -> Weight:
    return weight_from_function(q, 2, BOOL_AND, lambda a, b: int(a == b))


def semiring_sum(w: Weight, s: Semiring) -> Weight:
    """Semiring sum over the last coordinate."""
    if w.k < 2:
        raise WeightError("semiring sums need arity >= 2")
    if s.mul != w.monoid:
        raise WeightError(f"semiring {s.name} is not over {w.monoid.name}")
    vals = [s.sum(w.values[r * w.q:(r + 1) * w.q]) for r in range(w.q ** (w.k - 1))]
    return Weight(w.q, w.k - 1, w.monoid, tuple(vals))


def max_level_pipeline(w: Weight, level: str = "max") -> Weight:
    """Indicator of the extreme level built only from closure operations.

    ``w`` is paired with the constant weight scaled to the extreme value
    ``m`` (``x -> m*x`` additively, ``x -> m**x`` multiplicatively); the pair
    is sent to ``[ratio == 1]``.
    """
    vals = _natural_values(w)
    m = max(vals) if level == "max" else min(vals)
    target = w.monoid
    one = substitute_indices(const_one_weight(w.q), [1], w.k)
    scaled = map_monoid(one, mo.scale_hom(m, target))
    paired = product_weights(w, scaled)
    return map_monoid(paired, mo.level_indicator(paired.monoid))


# -- builtin weights ---------------------------------------------------------------


def conservative_weights(q: int) -> list[Weight]:
    """``w_s(a) = [a == s]`` into ``(N, +)`` for each symbol ``s``."""
    return [Weight(q, 1, NAT_ADD, tuple(int(a == s) for a in range(q))) for s in range(q)]


def ones_count_weight() -> Weight:
    return Weight(2, 1, NAT_ADD, (0, 1))


def hamming_weight(q: int) -> Weight:
    """``w(a, a) = 1``, ``w(a, b) = 0`` otherwise, into ``(N, +)``."""
    return weight_from_function(q, 2, NAT_ADD, lambda a, b: int(a == b))


def orthogonal_weight(p: int) -> Weight:
    if not is_prime(p):
        raise WeightError(f"{p} is not prime")
    return weight_from_function(p, 2, mo.cyclic_group(p), lambda x, y: (x * y) % p)


def absorbing_example_weight() -> Weight:
    """``0 -> 0, 1 -> 1, 2 -> inf`` into ``N u {inf}`` on three letters."""
    return Weight(3, 1, NAT_ADD_INF, (0, 1, INF))


def endpoint_pair_weight() -> Weight:
    """``0 -> (1, 0)``, ``1 -> (0, 1)`` into ``B x B``."""
    return Weight(2, 1, mo.ProductMonoid([BOOL_AND, BOOL_AND]), ((1, 0), (0, 1)))
