"""Command-line interface.

Exit codes: 0 success or verdict true, 1 verdict false, 2 usage or input
error, 3 resource limit.  Errors are printed to stderr as JSON.

Gates, relations, weights and specs are given as a JSON file path, an
inline JSON object, or a builtin name such as ``toffoli``, ``neq:3`` or
``census:A``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import monoids as mo
from . import relations as rel
from . import weights as wt
from .automorphism import automorphism_group, colored_structure_from_weights
from .census import BY_NAME, census, collapse_checks, verify_witnesses, WITNESSES
from .clones import (CloneSpec, ancilla_closed_up_to, borrow_closed_up_to, compare,
                     factoring_check, group_json, member, slice_group)
from .gates import (Gate, component, fredkin_gate, identity_gate, inverse, is_affine,
                    is_balanced, is_degenerate, not_gate, parallel, parse_partition,
                    quotient_gate, serial, cnot_gate, toffoli_gate, unrank, wire_perm)
from .groups import GroupTooLarge
from .weights import ResourceLimit


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input loading --------------------------------------------------------------------


def _load_json(text: str) -> Any:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    return None


def _ints(parts: list[str]) -> list[int]:
    return [int(p) for p in parts]


def load_gate(text: str) -> Gate:
    data = _load_json(text)
    if data is not None:
        return Gate.from_json(data)
    name, *args = text.split(":")
    simple = {"not": not_gate, "cnot": cnot_gate, "toffoli": toffoli_gate, "fredkin": fredkin_gate}
    if name in simple and not args:
        return simple[name]()
    if name == "identity":
        return identity_gate(*_ints(args))
    if name == "wire" and len(args) == 2:
        return wire_perm(int(args[0]), _ints(args[1].split(",")))
    if name == "witness" and len(args) == 1:
        for w in WITNESSES:
            if w.name == args[0]:
                return w.gate
    raise UsageError(f"unknown gate {text!r}")


def load_relation(text: str) -> rel.Relation:
    data = _load_json(text)
    if data is not None:
        return rel.Relation.from_json(data)
    name, *args = text.split(":")
    a = _ints(args) if name not in ("tuples",) else []
    table = {
        "square": lambda: rel.square_relation(),
        "neq": lambda: rel.neq(*a),
        "leq": lambda: rel.leq_chain(*a),
        "affine": lambda: rel.affine_relation(*a),
        "linear": lambda: rel.linear_relation(*a),
        "iota": lambda: rel.iota(*a),
        "equality": lambda: rel.diagonal(*a),
        "full": lambda: rel.full_relation(*a),
        "unary": lambda: rel.unary(a[0], a[1:]),
        "hamming": lambda: rel.Relation.from_predicate(a[0], 3, lambda x, y, z: x == y or y == z),
    }
    if name == "tuples" and len(args) == 2:
        return rel.Relation.from_tuples(int(args[0]), args[1].split(","))
    if name == "census" and len(args) == 1 and args[0] in BY_NAME:
        return BY_NAME[args[0]].relation
    if name in table:
        try:
            return table[name]()
        except TypeError as exc:
            raise UsageError(f"bad arguments for relation {name!r}") from exc
    raise UsageError(f"unknown relation {text!r}")


def load_weight(text: str) -> wt.Weight:
    data = _load_json(text)
    if data is not None:
        return wt.Weight.from_json(data)
    name, *args = text.split(":")
    a = _ints(args)
    table = {
        "ones": lambda: wt.ones_count_weight(),
        "conservative": lambda: wt.conservative_weights(a[0])[a[1]],
        "orthogonal": lambda: wt.orthogonal_weight(*a),
        "absorbing": lambda: wt.absorbing_example_weight(),
        "endpoint-pair": lambda: wt.endpoint_pair_weight(),
        "hamming": lambda: wt.hamming_weight(*a),
        "delta": lambda: wt.delta_weight(*a),
        "c1": lambda: wt.const_one_weight(*a),
    }
    if name in table:
        try:
            return table[name]()
        except (TypeError, IndexError) as exc:
            raise UsageError(f"bad arguments for weight {name!r}") from exc
    raise UsageError(f"unknown weight {text!r}")


def load_spec(args) -> CloneSpec:
    items: list[wt.Weight] = []
    name = ""
    for s in getattr(args, "spec", None) or []:
        if s.startswith("census:"):
            entry = BY_NAME.get(s.split(":", 1)[1])
            if entry is None:
                raise UsageError(f"unknown census entry {s!r}")
            items.extend(entry.spec.weights)
            name = name or entry.name
        else:
            data = _load_json(s)
            if data is None:
                raise UsageError(f"cannot read spec {s!r}")
            spec = CloneSpec.from_json(data)
            items.extend(spec.weights)
            name = name or spec.name
    items += [wt.char_weight(load_relation(r)) for r in getattr(args, "relation", None) or []]
    items += [load_weight(w) for w in getattr(args, "weight", None) or []]
    if not items:
        raise UsageError("a clone needs --spec, --relation or --weight")
    return CloneSpec(items[0].q, tuple(items), name)


def load_hom(text: str, source: mo.Monoid) -> mo.MonoidHom:
    name, *args = text.split(":")
    if name == "annihilate_inf":
        return mo.annihilate_inf()
    if name == "power":
        return mo.power_hom(int(args[0]))
    if name == "scale":
        target = mo.NAT_MUL if args[1:] == ["mul"] else mo.NAT_ADD
        return mo.scale_hom(int(args[0]), target)
    if name == "bool_inclusion":
        return mo.bool_inclusion()
    if name == "project" and isinstance(source, mo.ProductMonoid):
        return mo.projection_hom(source, int(args[0]))
    if name == "meet" and isinstance(source, mo.ProductMonoid):
        return mo.meet_hom(source)
    if name == "level" and isinstance(source, mo.ProductMonoid):
        return mo.level_indicator(source)
    raise UsageError(f"unknown homomorphism {text!r}")


# -- output -----------------------------------------------------------------------------


def _emit(args, payload: dict, text: str | None = None):
    out = text if (getattr(args, "format", "json") == "text" and text is not None) else \
        json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=False) + "\n"
    path = getattr(args, "output", None)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# -- commands ---------------------------------------------------------------------------


def cmd_gate(args) -> int:
    if args.action == "compose":
        gates = [load_gate(g) for g in args.gates]
        if len(gates) < 2:
            raise UsageError("compose needs at least two gates")
        out = gates[0]
        for g in gates[1:]:
            out = parallel(out, g) if args.parallel else serial(out, g)
        _emit(args, out.to_json())
        return 0
    if len(args.gates) != 1:
        raise UsageError(f"{args.action} takes one gate")
    f = load_gate(args.gates[0])
    if args.action == "invert":
        _emit(args, inverse(f).to_json())
        return 0
    rows = [("".join(map(str, unrank(i, f.q, f.n))), "".join(map(str, unrank(x, f.q, f.n))))
            for i, x in enumerate(f.map)]
    info = f.to_json() | {
        "cycles": f.cycles(),
        "degenerate": is_degenerate(f),
        "balanced_components": all(is_balanced(component(f, i)) for i in range(1, f.n + 1)),
    }
    try:
        info["affine"] = is_affine(f)
    except ValueError:
        info["affine"] = None
    text = "\n".join(f"{a} -> {b}" for a, b in rows) + f"\ncycles {f.cycles()}\n"
    _emit(args, info, text)
    return 0


def cmd_check(args) -> int:
    f = load_gate(args.gate)
    if args.relation:
        r = load_relation(args.relation)
        ok = rel.respects(f, r)
        payload = {"check": "respects", "relation": r.to_json(), "gate": f.to_json(), "verdict": ok}
    elif args.weight:
        w = load_weight(args.weight)
        ok = wt.respects_weight(f, w)
        payload = {"check": "respects", "weight": w.to_json(), "gate": f.to_json(), "verdict": ok}
    else:
        raise UsageError("check respects needs --relation or --weight")
    _emit(args, payload)
    return 0 if ok else 1


def cmd_aut(args) -> int:
    ws = [wt.char_weight(load_relation(r)) for r in args.relation or []]
    ws += [load_weight(w) for w in args.weight or []]
    if not ws:
        raise UsageError("aut needs --relation or --weight")
    q = ws[0].q
    s = colored_structure_from_weights(q, args.arity, ws, factor_products=args.factor_products,
                                       max_points=args.max_points)
    g = automorphism_group(s, engine=args.engine, max_points=args.max_points)
    _emit(args, group_json(g) | {"q": q, "arity": args.arity, "engine": args.engine})
    return 0


def _closure_kw(args) -> dict:
    return {"regime": args.regime, "samples": args.samples, "seed": args.seed}


def cmd_clone(args) -> int:
    if args.action == "compare":
        if not args.spec or len(args.spec) != 2:
            raise UsageError("compare needs exactly two --spec arguments")
        a = load_spec(argparse.Namespace(spec=[args.spec[0]]))
        b = load_spec(argparse.Namespace(spec=[args.spec[1]]))
        res = compare(a, b, args.arity_bound)
        _emit(args, res.to_json())
        return 0
    spec = load_spec(args)
    if args.action == "slice":
        g = slice_group(spec, args.arity)
        _emit(args, group_json(g) | {"name": spec.name, "arity": args.arity})
        return 0
    if args.action == "member":
        if not args.gate:
            raise UsageError("member needs --gate")
        ok = member(load_gate(args.gate), spec)
        _emit(args, {"check": "member", "name": spec.name, "verdict": ok})
        return 0 if ok else 1
    if args.action == "borrow-check":
        rep = borrow_closed_up_to(spec, args.arity_bound, **_closure_kw(args))
    elif args.action == "ancilla-check":
        rep = ancilla_closed_up_to(spec, args.arity_bound, **_closure_kw(args))
    else:  # factoring-check
        rep = factoring_check(spec, args.n, args.m, **_closure_kw(args))
    _emit(args, rep.to_json())
    return 0 if rep.verdict else 1


def cmd_weight(args) -> int:
    a = args.action
    if a == "counting":
        w = wt.counting_weight(load_relation(args.relation), args.position)
    elif a in ("maxlevel", "minlevel"):
        src = load_weight(args.weight[0])
        r = wt.max_level_relation(src) if a == "maxlevel" else wt.min_level_relation(src)
        _emit(args, r.to_json())
        return 0
    elif a == "sum":
        semiring = mo.SEMIRINGS.get(args.semiring)
        if semiring is None:
            raise UsageError(f"unknown semiring {args.semiring!r}")
        w = wt.semiring_sum(_one_weight(args), semiring)
    elif a == "delta":
        w = wt.delta_weight(args.q)
    elif a == "c1":
        w = wt.const_one_weight(args.q)
    elif a == "product":
        w = wt.product_weights(*[load_weight(x) for x in args.weight or []])
    else:  # hom
        src = _one_weight(args)
        if not args.hom:
            raise UsageError("hom needs --hom")
        w = wt.map_monoid(src, load_hom(args.hom, src.monoid))
    _emit(args, w.to_json())
    return 0


def _one_weight(args) -> wt.Weight:
    if args.relation:
        return wt.char_weight(load_relation(args.relation))
    if not args.weight:
        raise UsageError("this derivation needs --weight or --relation")
    return load_weight(args.weight[0])


def cmd_census(args) -> int:
    rep = census(args.max_arity, engine=args.engine)
    payload = rep.to_json()
    if args.verify:
        payload["witnesses"] = verify_witnesses().to_json()
        payload["collapse"] = collapse_checks(min(args.max_arity, 3))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(rep.to_dot())
    lines = [f"{'clone':<6}" + "".join(f"{'n=' + str(n):>12}" for n in range(1, args.max_arity + 1))]
    for e in payload["entries"]:
        lines.append(f"{e['label']:<6}" + "".join(f"{o:>12}" for o in e["orders"].values()))
    lines.append(f"pairwise distinct: {rep.distinct}")
    lines.append("edges: " + ", ".join(f"{a}-{b}" for a, b in rep.edges))
    _emit(args, payload, "\n".join(lines) + "\n")
    ok = rep.distinct and (not args.verify or (payload["witnesses"]["verdict"]
                                              and payload["collapse"]["verdict"]))
    return 0 if ok else 1


def cmd_quotient(args) -> int:
    f = load_gate(args.gate)
    g = quotient_gate(f, parse_partition(args.partition, f.q))
    _emit(args, g.to_json())
    return 0


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="permclone", description="Exact computations with permutation clones.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--output", "-o", help="write the result to this file")
        sp.add_argument("--format", choices=["json", "text"], default="json")

    g = sub.add_parser("gate", help="compose, invert or show gates")
    g.add_argument("action", choices=["compose", "invert", "show"])
    g.add_argument("gates", nargs="+", help="gate JSON, file or builtin (not, cnot, toffoli, ...)")
    g.add_argument("--parallel", action="store_true", help="compose with ⊕ instead of serially")
    common(g)
    g.set_defaults(func=cmd_gate)

    c = sub.add_parser("check", help="does a gate respect a relation or weight")
    c.add_argument("action", choices=["respects"])
    c.add_argument("--gate", required=True)
    c.add_argument("--relation")
    c.add_argument("--weight")
    common(c)
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("aut", help="automorphism group of the n-th power structure")
    a.add_argument("--relation", action="append")
    a.add_argument("--weight", action="append")
    a.add_argument("--arity", type=int, required=True)
    a.add_argument("--engine", choices=["backtrack", "brute"], default="backtrack")
    a.add_argument("--max-points", type=int, default=4096)
    a.add_argument("--factor-products", action="store_true")
    common(a)
    a.set_defaults(func=cmd_aut)

    cl = sub.add_parser("clone", help="clone slices, membership, comparison and closure checks")
    cl.add_argument("action", choices=["slice", "member", "compare", "borrow-check",
                                       "ancilla-check", "factoring-check"])
    cl.add_argument("--spec", action="append", help="spec JSON/file or census:NAME")
    cl.add_argument("--relation", action="append")
    cl.add_argument("--weight", action="append")
    cl.add_argument("--gate")
    cl.add_argument("--arity", type=int, default=3)
    cl.add_argument("--arity-bound", type=int, default=3)
    cl.add_argument("--n", type=int, default=1)
    cl.add_argument("--m", type=int, default=1)
    cl.add_argument("--regime", choices=["auto", "exact", "enumerate", "stabilizer", "sampled"], default="auto")
    cl.add_argument("--samples", type=int, default=1000)
    cl.add_argument("--seed", type=int, default=0)
    common(cl)
    cl.set_defaults(func=cmd_clone)

    w = sub.add_parser("weight", help="derive weights with the closure operations")
    w.add_argument("action", choices=["derive"])
    w.add_argument("kind", choices=["counting", "maxlevel", "minlevel", "sum", "delta", "c1",
                                    "product", "hom"])
    w.add_argument("--relation")
    w.add_argument("--weight", action="append")
    w.add_argument("--position", type=int, default=1)
    w.add_argument("--semiring", default="nat")
    w.add_argument("--hom")
    w.add_argument("--q", type=int, default=2)
    common(w)
    w.set_defaults(func=lambda ns: cmd_weight(argparse.Namespace(**vars(ns) | {"action": ns.kind})))

    cs = sub.add_parser("census2", help="the relationally defined clones on {0,1}")
    cs.add_argument("--max-arity", type=int, default=3)
    cs.add_argument("--engine", choices=["backtrack", "brute"], default="backtrack")
    cs.add_argument("--dot", help="also write the inclusion diagram as DOT")
    cs.add_argument("--verify", action="store_true", help="include witness and collapse checks")
    common(cs)
    cs.set_defaults(func=cmd_census)

    qt = sub.add_parser("quotient", help="induced gate on equivalence classes")
    qt.add_argument("--gate", required=True)
    qt.add_argument("--partition", required=True, help='classes such as "01|23"')
    common(qt)
    qt.set_defaults(func=cmd_quotient)
    return p


def _error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "census2" and args.max_arity < 3:
            raise UsageError("--max-arity must be at least 3")
        return args.func(args)
    except UsageError as exc:
        return _error("usage", str(exc), 2)
    except (ResourceLimit, GroupTooLarge) as exc:
        return _error("resource_limit", str(exc), 3)
    except (ValueError, KeyError, IndexError, json.JSONDecodeError, mo.MonoidError) as exc:
        return _error("invalid_input", str(exc), 2)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
