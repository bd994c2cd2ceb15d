"""The relationally defined permutation clones on ``{0, 1}``.

Each entry carries its defining relation.  :func:`census` computes the slices
up to an arity bound, checks pairwise distinctness, and derives the inclusion
order with its Hasse diagram.  :func:`verify_witnesses` checks separating
gates against their claimed memberships.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .clones import CloneSpec, slice_group
from .gates import Gate, affine_gate, not_gate
from .groups import wire_group
from .relations import Relation, affine_relation, leq_chain, neq, product, unary


def _rel(*tuples: str) -> Relation:
    return Relation.from_tuples(2, tuples)


@dataclass(frozen=True)
class CensusEntry:
    name: str
    label: str
    description: str
    relation: Relation

    @property
    def spec(self) -> CloneSpec:
        return CloneSpec.from_relations(2, [self.relation], self.name)


ENTRIES: tuple[CensusEntry, ...] = (
    CensusEntry("top", "⊤", "all maps", unary(2, [0, 1])),
    CensusEntry("D", "D", "self dual", neq(2)),
    CensusEntry("DP", "DP", "self dual, 0- and 1-preserving", _rel("0110", "1010")),
    CensusEntry("A", "A", "affine", affine_relation(2)),
    CensusEntry("AP0", "AP₀", "affine and 0-preserving (linear)", _rel("000", "011", "101", "110")),
    CensusEntry("AD", "AD", "affine self dual", product(affine_relation(2), neq(2))),
    CensusEntry("AP1", "AP₁", "affine and 1-preserving",
                _rel("00001", "00111", "01011", "01101", "10011", "10101", "11001", "11111")),
    CensusEntry("AP", "AP", "linear and 1-preserving", _rel("0001", "0111", "1011", "1101")),
    CensusEntry("P0", "P₀", "0-preserving", unary(2, [0])),
    CensusEntry("P1", "P₁", "1-preserving", unary(2, [1])),
    CensusEntry("P", "P", "0- and 1-preserving", _rel("01")),
    CensusEntry("U", "U", "essentially unary (degenerate)", _rel("000", "001", "011", "100", "110", "111")),
    CensusEntry("Pi", "Π", "projections", leq_chain(2)),
)

BY_NAME = {e.name: e for e in ENTRIES}

# drawing coordinates of the inclusion diagram, (x, level)
LAYOUT = {"top": (2, 9), "A": (2, 8), "P0": (3, 8), "P1": (4, 8), "D": (0, 8),
          "AP1": (3, 7), "AP0": (2, 7), "AD": (1, 7), "P": (4, 7),
          "DP": (1, 5), "U": (0, 5), "AP": (2, 4), "Pi": (1, 3)}

# expected cover relation of the inclusion order, (upper, lower)
REFERENCE_EDGES = frozenset({
    ("top", "A"), ("top", "D"), ("top", "P0"), ("top", "P1"),
    ("P1", "P"), ("P0", "P"), ("P", "DP"), ("P1", "AP1"), ("P0", "AP0"), ("DP", "AP"),
    ("A", "AP0"), ("A", "AP1"), ("A", "AD"), ("AD", "AP"), ("AP0", "AP"), ("AP1", "AP"),
    ("AP", "Pi"), ("AD", "U"), ("U", "Pi"), ("D", "DP"), ("D", "AD"),
})


# -- census -------------------------------------------------------------------------


@dataclass
class CensusReport:
    arity_bound: int
    engine: str
    orders: dict[str, list[int]]
    distinguishing_arity: dict[tuple[str, str], int | None]
    inclusions: set[tuple[str, str]]
    edges: list[tuple[str, str]]

    @property
    def distinct(self) -> bool:
        return all(v is not None for v in self.distinguishing_arity.values())

    def to_json(self) -> dict:
        return {
            "arity_bound": self.arity_bound,
            "engine": self.engine,
            "count": len(self.orders),
            "pairwise_distinct": self.distinct,
            "entries": [{"name": e.name, "label": e.label, "description": e.description,
                         "relation": e.relation.to_json(),
                         "orders": {str(n + 1): str(o) for n, o in enumerate(self.orders[e.name])}}
                        for e in ENTRIES if e.name in self.orders],
            "distinguishing_arities": [{"pair": list(p), "arity": a}
                                       for p, a in sorted(self.distinguishing_arity.items())],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["graph census {", "  node [shape=plaintext];"]
        for e in ENTRIES:
            if e.name in self.orders:
                x, y = LAYOUT[e.name]
                lines.append(f'  "{e.name}" [label="{e.label}", pos="{x},{y}!"];')
        levels: dict[int, list[str]] = {}
        for name in self.orders:
            levels.setdefault(LAYOUT[name][1], []).append(name)
        for y in sorted(levels, reverse=True):
            names = sorted(levels[y], key=lambda n: LAYOUT[n][0])
            lines.append("  { rank=same; " + " ".join(f'"{n}";' for n in names) + " }")
        for a, b in self.edges:
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def census(max_arity: int = 3, engine: str = "backtrack", factor_products: bool | None = None,
           names: list[str] | None = None) -> CensusReport:
    """Slices of every entry for ``n <= max_arity`` and the derived inclusion order.

    Product relations are split into factors by default from arity 4 on,
    where the unsplit 6-ary relation would need a 16^6-entry coloring.
    """
    if factor_products is None:
        factor_products = max_arity >= 4
    entries = [BY_NAME[n] for n in names] if names else list(ENTRIES)
    groups = {e.name: [slice_group(e.spec, n, engine=engine, factor_products=factor_products)
                       for n in range(1, max_arity + 1)] for e in entries}
    orders = {name: [g.order() for g in gs] for name, gs in groups.items()}

    sub: dict[tuple[str, str], list[bool]] = {}
    for a, b in itertools.permutations(groups, 2):
        sub[(a, b)] = [ga.order() <= gb.order() and ga.is_subgroup_of(gb)
                       for ga, gb in zip(groups[a], groups[b])]
    distinguishing = {}
    for a, b in itertools.combinations(groups, 2):
        first = next((n + 1 for n in range(max_arity)
                      if not (sub[(a, b)][n] and sub[(b, a)][n])), None)
        distinguishing[tuple(sorted((a, b)))] = first
    below = {(a, b) for (a, b), v in sub.items() if all(v) and not all(sub[(b, a)])}
    edges = sorted((upper, lower) for lower, upper in below
                   if not any((lower, mid) in below and (mid, upper) in below for mid in groups))
    inclusions = {(upper, lower) for lower, upper in below}
    return CensusReport(max_arity, engine, orders, distinguishing, inclusions, edges)


# -- witnesses ----------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessGate:
    name: str
    gate: Gate
    members: tuple[str, ...]
    nonmembers: tuple[str, ...]


def _table(*pairs: str) -> Gate:
    return Gate.from_table(2, dict(p.split(">") for p in pairs))


_M1 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
_M2 = [[1, 1, 1], [0, 1, 0], [0, 0, 1]]

WITNESSES: tuple[WitnessGate, ...] = (
    WitnessGate("top", _table("000>001", "001>010", "010>000", "011>100",
                              "100>011", "101>101", "110>111", "111>110"),
                ("top",), ("D", "A", "P0", "P1")),
    WitnessGate("D", _table("000>111", "001>001", "010>010", "011>011",
                            "100>100", "101>101", "110>110", "111>000"),
                ("D",), ("A", "P0", "P1")),
    WitnessGate("DP", _table("000>000", "001>001", "010>101", "011>011",
                             "100>100", "101>010", "110>110", "111>111"),
                ("DP", "D", "P0", "P1"), ("A",)),
    WitnessGate("A", affine_gate(2, _M1, [1, 1, 1]), ("A",), ("AP0", "P1", "D")),
    WitnessGate("AP0", affine_gate(2, _M1), ("AP0",), ("P1", "D")),
    WitnessGate("AP1", affine_gate(2, _M1, [1, 0, 0]), ("AP1", "P1", "A"), ("AP0", "AP")),
    WitnessGate("AD", affine_gate(2, _M2, [1, 0, 0]), ("AD", "D", "A"), ("AP0", "AP")),
    WitnessGate("AP", affine_gate(2, _M2), ("AP", "D", "AP0", "P1"), ("Pi",)),
    WitnessGate("U", not_gate(), ("U", "A"), ("Pi",)),
    WitnessGate("P0", _table("000>000", "001>001", "010>010", "011>111",
                             "100>100", "101>101", "110>110", "111>011"),
                ("P0",), ("A", "P1")),
    # the transcribed table sends both 011 and 111 to 111; 011 -> 000 restores a
    # bijection and is the only repair that keeps the stated properties
    WitnessGate("P1", _table("000>011", "001>001", "010>010", "011>000",
                             "100>100", "101>101", "110>110", "111>111"),
                ("P1",), ("A", "P0")),
    WitnessGate("P", _table("000>000", "001>010", "010>011", "011>001",
                            "100>100", "101>101", "110>110", "111>111"),
                ("P", "P0", "P1"), ("A", "D")),
)


@dataclass
class WitnessReport:
    items: list[dict] = field(default_factory=list)

    @property
    def discrepancies(self) -> list[dict]:
        return [i for i in self.items if not i["ok"]]

    @property
    def verdict(self) -> bool:
        return not self.discrepancies

    def to_json(self) -> dict:
        return {"check": "witnesses", "claims": len(self.items),
                "verdict": self.verdict, "items": self.items}


def verify_witnesses(witnesses=WITNESSES) -> WitnessReport:
    from .clones import member

    report = WitnessReport()
    for w in witnesses:
        for clone, expected in [(c, True) for c in w.members] + [(c, False) for c in w.nonmembers]:
            actual = member(w.gate, BY_NAME[clone].spec)
            report.items.append({"witness": w.name, "clone": clone, "claimed": expected,
                                 "actual": actual, "ok": actual == expected,
                                 "gate": w.gate.to_json()})
    return report


# -- collapses ----------------------------------------------------------------------


COLLAPSING = {
    "T0": _rel("00", "01", "10"),
    "T1": _rel("01", "10", "11"),
    "leq": leq_chain(2),
}


def collapse_checks(max_arity: int = 3) -> dict:
    """Relations whose clones reduce to wire permutations, and the U = U∩D collapse."""
    rows = []
    for name, r in COLLAPSING.items():
        spec = CloneSpec.from_relations(2, [r], name)
        for n in range(1, max_arity + 1):
            g = slice_group(spec, n)
            rows.append({"relation": name, "arity": n, "order": str(g.order()),
                         "equals_wire_group": g == wire_group(2, n)})
    u = BY_NAME["U"].spec
    ud = CloneSpec.from_relations(2, [BY_NAME["U"].relation, neq(2)], "UD")
    for n in range(1, max_arity + 1):
        a, b = slice_group(u, n), slice_group(ud, n)
        rows.append({"relation": "U vs U∩D", "arity": n, "order": str(a.order()),
                     "equal": a == b})
    ok = all(r.get("equals_wire_group", r.get("equal")) for r in rows)
    return {"check": "collapse", "arity_bound": max_arity, "verdict": ok, "rows": rows}
