"""Permutation clones defined by weights: slices, membership, comparison and closure checks.

``slice(spec, n)`` is the group of ``n``-ary gates respecting every weight of
the spec, computed as the automorphism group of the colored structure on
``A^n``.

Borrow, ancilla and factoring checks are exact.  Small slices are
enumerated.  Large ones are intersected with the structural subgroup of
gates of the relevant shape (``f ⊕ i1``, block stabilisers, ``f ⊕ g``).
The projection onto the smaller factor is a homomorphism, so the projected
generators decide the check.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .automorphism import (ColoredStructure, automorphism_group, colored_structure_from_weights)
from .gates import Gate
from .groups import PermGroup
from .relations import Relation, all_relations, equivalence_pattern
from .weights import Weight, char_weight, is_relational, relation_of, respects_weight

EXACT_LIMIT = 10**6


@dataclass(frozen=True)
class CloneSpec:
    q: int
    weights: tuple[Weight, ...]
    name: str = ""

    def __post_init__(self):
        ws = tuple(self.weights)
        if not ws:
            raise ValueError("a clone spec needs at least one weight or relation")
        if any(w.q != self.q for w in ws):
            raise ValueError("all weights must share the alphabet")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_relations(cls, q: int, relations: Sequence[Relation], name: str = "") -> "CloneSpec":
        return cls(q, tuple(char_weight(r) for r in relations), name)

    @classmethod
    def of(cls, *items: Relation | Weight, name: str = "") -> "CloneSpec":
        ws = tuple(char_weight(x) if isinstance(x, Relation) else x for x in items)
        return cls(ws[0].q, ws, name)

    def to_json(self) -> dict:
        rels = [relation_of(w).to_json() for w in self.weights if is_relational(w)]
        other = [w.to_json() for w in self.weights if not is_relational(w)]
        return {"q": self.q, "name": self.name, "weights": other, "relations": rels}

    @classmethod
    def from_json(cls, data: dict) -> "CloneSpec":
        q = int(data["q"])
        ws = [Weight.from_json(w) for w in data.get("weights", [])]
        ws += [char_weight(Relation.from_json(r)) for r in data.get("relations", [])]
        return cls(q, tuple(ws), data.get("name", ""))

    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, default=str)


@dataclass
class CloneSlice:
    spec: CloneSpec
    n: int
    group: PermGroup

    def to_json(self) -> dict:
        return group_json(self.group) | {"name": self.spec.name, "arity": self.n}


def group_json(g: PermGroup) -> dict:
    return {"degree": g.degree, "order": str(g.order()),
            "generators": [list(map(int, s)) for s in g.gens]}


_CACHE: dict[tuple, PermGroup] = {}
_LOCK = threading.Lock()


def structure(spec: CloneSpec, n: int, factor_products: bool = False) -> ColoredStructure:
    return colored_structure_from_weights(spec.q, n, spec.weights, factor_products=factor_products)


def slice_group(spec: CloneSpec, n: int, engine: str = "backtrack",
                factor_products: bool = False) -> PermGroup:
    """``PPol(spec)`` restricted to arity ``n``, cached per spec and arity."""
    key = (spec.key(), n, engine, factor_products)
    g = _CACHE.get(key)
    if g is None:
        g = automorphism_group(structure(spec, n, factor_products), engine=engine)
        with _LOCK:
            g = _CACHE.setdefault(key, g)
    return g


def slice(spec: CloneSpec, n: int, **kw) -> CloneSlice:  # noqa: A001 - mirrors C^[n]
    return CloneSlice(spec, n, slice_group(spec, n, **kw))


def clear_cache():
    with _LOCK:
        _CACHE.clear()


def member(f: Gate, spec: CloneSpec) -> bool:
    """Respects every weight of the spec; no group is built."""
    if f.q != spec.q:
        raise ValueError("alphabet mismatch")
    return all(respects_weight(f, w) for w in spec.weights)


# -- comparison -----------------------------------------------------------------


@dataclass
class Comparison:
    verdict: str
    arity_bound: int
    per_arity: list[dict]
    first_difference: int | None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "arity_bound": self.arity_bound,
                "first_difference": self.first_difference, "per_arity": self.per_arity}


def compare(a: CloneSpec, b: CloneSpec, arity_bound: int, **kw) -> Comparison:
    if a.q != b.q:
        raise ValueError("alphabet mismatch")
    rows, le, ge, first = [], True, True, None
    for n in range(1, arity_bound + 1):
        ga, gb = slice_group(a, n, **kw), slice_group(b, n, **kw)
        sub, sup = ga.is_subgroup_of(gb), gb.is_subgroup_of(ga)
        rows.append({"arity": n, "order_a": str(ga.order()), "order_b": str(gb.order()),
                     "a_in_b": sub, "b_in_a": sup})
        le &= sub
        ge &= sup
        if first is None and not (sub and sup):
            first = n
    verdict = {(True, True): "equal", (True, False): "less",
               (False, True): "greater", (False, False): "incomparable"}[(le, ge)]
    return Comparison(verdict, arity_bound, rows, first)


# -- closure checks ----------------------------------------------------------------


@dataclass
class CheckRow:
    check: str
    arity: int
    regime: str
    method: str
    samples: int | None
    verdict: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"check": self.check, "arity": self.arity, "regime": self.regime,
               "method": self.method, "samples": self.samples, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ClosureReport:
    check: str
    spec: str
    arity_bound: int
    rows: list[CheckRow] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(r.verdict for r in self.rows)

    @property
    def regime(self) -> str:
        return "exact" if all(r.regime == "exact" for r in self.rows) else "sampled"

    def witness(self) -> dict | None:
        return next((r.witness for r in self.rows if r.witness), None)

    def to_json(self) -> dict:
        return {"check": self.check, "spec": self.spec, "arity_bound": self.arity_bound,
                "verdict": self.verdict, "regime": self.regime,
                "rows": [r.to_json() for r in self.rows]}


def _gate_json(q: int, n: int, perm) -> dict:
    return {"q": q, "n": n, "map": [int(x) for x in perm]}


def _equivalence_layer(labels: np.ndarray) -> np.ndarray:
    """Binary layer: 1 iff two points have the same label."""
    return (labels[:, None] == labels[None, :]).astype(np.int64).reshape(-1)


def _restricted(spec: CloneSpec, n: int, extra: list[tuple[int, np.ndarray]], **kw) -> PermGroup:
    """Slice at arity ``n`` intersected with the automorphisms of the extra layers."""
    s = structure(spec, n, kw.get("factor_products", False))
    for k, colors in extra:
        s.add_layer(k, colors)
    return automorphism_group(s.merged())


def _elements(g: PermGroup):
    for block in g.element_batches(cap=None):
        yield block.astype(np.int64)


def _samples(g: PermGroup, count: int, seed: int, batch: int = 4096):
    rng = np.random.default_rng(seed)
    done = 0
    while done < count:
        size = min(batch, count - done)
        yield np.asarray([g.random_element(rng) for _ in range(size)], dtype=np.int64)
        done += size


def _batches(g: PermGroup, regime: str, samples: int, seed: int, exact_limit: int):
    # "auto" and "exact" pick enumeration or the stabilizer method by size;
    # "enumerate" and "stabilizer" force one of them
    if regime in ("auto", "exact"):
        regime = "enumerate" if g.order() <= exact_limit else "stabilizer"
    if regime == "enumerate":
        return "exact", "enumeration", None, _elements(g)
    if regime == "sampled":
        return "sampled", "uniform sampling", samples, _samples(g, samples, seed)
    return "exact", "stabilizer", None, None


def _first_nonmember(g: PermGroup, perms: np.ndarray) -> np.ndarray | None:
    seen = set()
    for p in perms:
        key = p.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if not g.contains(p):
            return p
    return None


def borrow_closed_up_to(spec: CloneSpec, arity_bound: int, regime: str = "auto",
                        samples: int = 1000, seed: int = 0, exact_limit: int = EXACT_LIMIT,
                        **kw) -> ClosureReport:
    """For each ``n < N``: every ``f`` with ``f ⊕ i1`` in slice(n+1) lies in slice(n)."""
    q = spec.q
    report = ClosureReport("borrow", spec.name, arity_bound)
    for n in range(1, arity_bound):
        big = slice_group(spec, n + 1, **kw)
        small = slice_group(spec, n, **kw)
        reg, method, count, batches = _batches(big, regime, samples, seed, exact_limit)
        bad = None
        if batches is None:
            pts = np.arange(q ** (n + 1))
            h = _restricted(spec, n + 1, [(1, pts % q), (2, _equivalence_layer(pts // q))], **kw)
            for gen in h.gens:
                f = np.asarray(gen, dtype=np.int64)[0::q] // q
                if not small.contains(f):
                    bad = (np.asarray(gen), f)
                    break
        else:
            for P in batches:
                img = P.reshape(len(P), q**n, q)
                ok = (img % q == np.arange(q)).all(axis=2) & (img // q == (img[:, :, :1] // q)).all(axis=2)
                forms = P[ok.all(axis=1)]
                f = forms.reshape(len(forms), q**n, q)[:, :, 0] // q
                p = _first_nonmember(small, f)
                if p is not None:
                    bad = (None, p)
                    break
        witness = None
        if bad is not None:
            witness = {"f": _gate_json(q, n, bad[1])}
        report.rows.append(CheckRow("borrow", n, reg, method, count, bad is None, witness))
    return report


def ancilla_closed_up_to(spec: CloneSpec, arity_bound: int, regime: str = "auto",
                         samples: int = 1000, seed: int = 0, exact_limit: int = EXACT_LIMIT,
                         **kw) -> ClosureReport:
    """For each ``n < N`` and symbol ``a``: ``g(x, a) = (f(x), a)`` with ``g`` in slice(n+1) forces ``f`` in slice(n)."""
    q = spec.q
    report = ClosureReport("ancilla", spec.name, arity_bound)
    for n in range(1, arity_bound):
        big = slice_group(spec, n + 1, **kw)
        small = slice_group(spec, n, **kw)
        for a in range(q):
            reg, method, count, batches = _batches(big, regime, samples, seed, exact_limit)
            bad = None
            if batches is None:
                block = (np.arange(q ** (n + 1)) % q == a).astype(np.int64)
                h = _restricted(spec, n + 1, [(1, block)], **kw)
                for gen in h.gens:
                    g = np.asarray(gen, dtype=np.int64)
                    f = g[a::q] // q
                    if not small.contains(f):
                        bad = (g, f)
                        break
            else:
                for P in batches:
                    sub = P[:, a::q]
                    keeps = (sub % q == a).all(axis=1)
                    gs = P[keeps]
                    fs = gs[:, a::q] // q
                    for g, f in zip(gs, fs):
                        if not small.contains(f):
                            bad = (g, f)
                            break
                    if bad is not None:
                        break
            witness = None
            if bad is not None:
                witness = {"ancilla": a, "g": _gate_json(q, n + 1, bad[0]), "f": _gate_json(q, n, bad[1])}
            report.rows.append(CheckRow("ancilla", n, reg, method, count, bad is None, witness))
    return report


def split_parallel(perm, q: int, n: int, m: int) -> tuple[np.ndarray, np.ndarray] | None:
    """``(f, g)`` with ``perm == f ⊕ g`` (arities ``n`` and ``m``), or ``None``.

    The block-product test: fixing the last ``m`` inputs at every value must
    give the same map on the first block, and symmetrically.
    """
    img = np.asarray(perm, dtype=np.int64).reshape(q**n, q**m)
    hi, lo = img // q**m, img % q**m
    if not (hi == hi[:, :1]).all() or not (lo == lo[:1, :]).all():
        return None
    return hi[:, 0], lo[0, :]


@dataclass
class FactoringReport:
    spec: str
    n: int
    m: int
    regime: str
    method: str
    forms_checked: int
    verdict: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"check": "factoring", "spec": self.spec, "arity": [self.n, self.m],
               "regime": self.regime, "method": self.method,
               "samples": self.forms_checked, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def factoring_check(spec: CloneSpec, n: int, m: int, regime: str = "auto", samples: int = 1000,
                    seed: int = 0, exact_limit: int = EXACT_LIMIT, **kw) -> FactoringReport:
    """Every ``f ⊕ g`` in slice(n+m) has ``f`` in slice(n) and ``g`` in slice(m)."""
    q = spec.q
    big = slice_group(spec, n + m, **kw)
    gn, gm = slice_group(spec, n, **kw), slice_group(spec, m, **kw)
    reg, method, count, batches = _batches(big, regime, samples, seed, exact_limit)
    if batches is None:
        pts = np.arange(q ** (n + m))
        extra = [(2, _equivalence_layer(pts // q**m)), (2, _equivalence_layer(pts % q**m))]
        candidates = [_restricted(spec, n + m, extra, **kw).gens]
    else:
        candidates = batches
    checked = 0
    seen_f, seen_g = set(), set()
    for P in candidates:
        P = np.asarray(P, dtype=np.int64).reshape(-1, q**n, q**m)
        hi, lo = P // q**m, P % q**m
        forms = (hi == hi[:, :, :1]).all(axis=(1, 2)) & (lo == lo[:, :1, :]).all(axis=(1, 2))
        for h, f, g in zip(P[forms], hi[forms][:, :, 0], lo[forms][:, 0, :]):
            checked += 1
            kf, kg = f.tobytes(), g.tobytes()
            if kf in seen_f and kg in seen_g:
                continue
            if not gn.contains(f) or not gm.contains(g):
                w = {"h": _gate_json(q, n + m, h.reshape(-1)), "f": _gate_json(q, n, f),
                     "g": _gate_json(q, m, g)}
                return FactoringReport(spec.name, n, m, reg, method, checked, False, w)
            seen_f.add(kf)
            seen_g.add(kg)
    return FactoringReport(spec.name, n, m, reg, method, checked, True)


# -- full-clone relations ---------------------------------------------------------------


@dataclass
class FullCloneReport:
    q: int
    k_max: int
    n_max: int
    relations_checked: int
    full: list[str]
    mismatches: list[dict]

    @property
    def verdict(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"check": "full_clone_relations", "q": self.q, "k_max": self.k_max,
                "arity_bound": self.n_max, "relations_checked": self.relations_checked,
                "full_count": len(self.full), "verdict": self.verdict, "mismatches": self.mismatches}


def is_full_clone(r: Relation, n_max: int = 3) -> bool:
    spec = CloneSpec.from_relations(r.q, [r])
    return all(slice_group(spec, n).order() == math.factorial(r.q**n) for n in range(1, n_max + 1))


def full_clone_relation_oracle(q: int, k_max: int, n_max: int = 3) -> FullCloneReport:
    """Compare "slice is the whole symmetric group" with the equivalence-pattern criterion."""
    full, mismatches, checked = [], [], 0
    for k in range(1, k_max + 1):
        for r in all_relations(q, k):
            checked += 1
            computed = is_full_clone(r, n_max)
            pattern = equivalence_pattern(r)
            if computed:
                full.append(str(r))
            if computed != (pattern is not None):
                mismatches.append({"relation": r.to_json(), "slice_full": computed,
                                   "pattern": pattern})
    return FullCloneReport(q, k_max, n_max, checked, full, mismatches)
