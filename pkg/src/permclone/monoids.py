"""Commutative monoids, homomorphisms and semirings used as weight targets."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence


class MonoidError(ValueError):
    pass


class _Infinity:
    """The absorbing element adjoined to the naturals in ``nat_add_inf``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


class Monoid:
    """Base class; subclasses provide ``op``, ``identity`` and ``contains``."""

    name: str = "monoid"
    identity: Any = None
    elements: tuple | None = None  # carrier when finite

    def op(self, a, b):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def product(self, values: Iterable) -> Any:
        acc = self.identity
        for v in values:
            acc = self.op(acc, v)
        return acc

    def power(self, x, n: int):
        acc = self.identity
        for _ in range(n):
            acc = self.op(acc, x)
        return acc

    @property
    def is_finite(self) -> bool:
        return self.elements is not None

    @property
    def totally_ordered_naturals(self) -> bool:
        return False

    def encode(self, x):
        """JSON form of an element."""
        return x

    def decode(self, x):
        return x

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<monoid {self.name}>"


class BuiltinMonoid(Monoid):
    def __init__(self, name: str, identity, op: Callable, contains: Callable, elements=None):
        self.name = name
        self.identity = identity
        self._op = op
        self._contains = contains
        self.elements = elements

    def op(self, a, b):
        return self._op(a, b)

    def contains(self, x) -> bool:
        return self._contains(x)

    @property
    def totally_ordered_naturals(self) -> bool:
        return self.name in ("nat_add", "nat_mul")

    def encode(self, x):
        return "inf" if x is INF else x

    def decode(self, x):
        if self.name == "nat_add_inf" and x in ("inf", "∞"):
            return INF
        if isinstance(x, bool):
            return int(x)
        return x

    def to_json(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, BuiltinMonoid) and other.name == self.name

    def __hash__(self):
        return hash(("builtin", self.name))


def _add_inf(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


BOOL_AND = BuiltinMonoid("bool_and", 1, lambda a, b: a & b, lambda x: x in (0, 1) and not isinstance(x, float), (0, 1))
BOOL_OR = BuiltinMonoid("bool_or", 0, lambda a, b: a | b, lambda x: x in (0, 1) and not isinstance(x, float), (0, 1))
NAT_ADD = BuiltinMonoid("nat_add", 0, lambda a, b: a + b, _is_nat)
NAT_MUL = BuiltinMonoid("nat_mul", 1, lambda a, b: a * b, _is_nat)
NAT_ADD_INF = BuiltinMonoid("nat_add_inf", 0, _add_inf, lambda x: x is INF or _is_nat(x))

BUILTINS = {m.name: m for m in (BOOL_AND, BOOL_OR, NAT_ADD, NAT_MUL, NAT_ADD_INF)}


class TableMonoid(Monoid):
    """A finite commutative monoid given by its Cayley table.

    ``table[i][j]`` is the label of ``elements[i] * elements[j]``.  The table
    is checked for closure, identity, commutativity and associativity.
    """

    def __init__(self, elements: Sequence, identity, table: Sequence[Sequence], name: str = "table"):
        self.elements = tuple(elements)
        self.identity = identity
        self.name = name
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise MonoidError("duplicate element labels")
        if identity not in self._index:
            raise MonoidError(f"identity {identity!r} is not an element")
        size = len(self.elements)
        if len(table) != size or any(len(row) != size for row in table):
            raise MonoidError("table must be square over the element list")
        idx = self._index
        try:
            self._table = [[idx[x] for x in row] for row in table]
        except KeyError as exc:
            raise MonoidError(f"table entry {exc.args[0]!r} is not an element") from None
        self._validate()

    def _validate(self):
        t = self._table
        n = len(t)
        e = self._index[self.identity]
        for a in range(n):
            if t[e][a] != a or t[a][e] != a:
                raise MonoidError(f"{self.identity!r} is not an identity")
            for b in range(a + 1, n):
                if t[a][b] != t[b][a]:
                    raise MonoidError(
                        f"not commutative: {self.elements[a]!r}*{self.elements[b]!r}")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise MonoidError(
                    "not associative at "
                    f"({self.elements[a]!r}, {self.elements[b]!r}, {self.elements[c]!r})")

    def op(self, a, b):
        return self.elements[self._table[self._index[a]][self._index[b]]]

    def contains(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def decode(self, x):
        if isinstance(x, list):
            x = tuple(x)
        return x

    def to_json(self):
        return {
            "elements": list(self.elements),
            "identity": self.identity,
            "table": [[self.elements[j] for j in row] for row in self._table],
        }

    def __eq__(self, other):
        return (isinstance(other, TableMonoid) and other.elements == self.elements
                and other.identity == self.identity and other._table == self._table)

    def __hash__(self):
        return hash((self.elements, self.identity))


class ProductMonoid(Monoid):
    """Direct product of finitely many monoids; elements are tuples."""

    def __init__(self, factors: Sequence[Monoid]):
        if not factors:
            raise MonoidError("empty product")
        self.factors = tuple(factors)
        self.identity = tuple(f.identity for f in self.factors)
        self.name = "product(" + ",".join(f.name for f in self.factors) + ")"
        if all(f.is_finite for f in self.factors):
            self.elements = tuple(itertools.product(*(f.elements for f in self.factors)))

    def op(self, a, b):
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.contains(v) for f, v in zip(self.factors, x)))

    def encode(self, x):
        return [f.encode(v) for f, v in zip(self.factors, x)]

    def decode(self, x):
        return tuple(f.decode(v) for f, v in zip(self.factors, x))

    def to_json(self):
        return {"product": [f.to_json() for f in self.factors]}

    def __eq__(self, other):
        return isinstance(other, ProductMonoid) and other.factors == self.factors

    def __hash__(self):
        return hash(self.factors)


def cyclic_group(p: int) -> TableMonoid:
    """``(Z_p, +)`` as a table monoid."""
    return TableMonoid(range(p), 0, [[(a + b) % p for b in range(p)] for a in range(p)],
                       name=f"z{p}_add")


def monoid_from_json(data) -> Monoid:
    if isinstance(data, str):
        try:
            return BUILTINS[data]
        except KeyError:
            raise MonoidError(f"unknown builtin monoid {data!r}") from None
    if isinstance(data, dict) and "product" in data:
        return ProductMonoid([monoid_from_json(d) for d in data["product"]])
    if isinstance(data, dict) and "table" in data:
        def label(x):
            return tuple(x) if isinstance(x, list) else x
        elements = [label(e) for e in data["elements"]]
        table = [[label(x) for x in row] for row in data["table"]]
        return TableMonoid(elements, label(data["identity"]), table)
    raise MonoidError(f"cannot read monoid from {data!r}")


# -- homomorphisms ---------------------------------------------------------------


class MonoidHom:
    """A map between commutative monoids that preserves products and identity.

    Homomorphisms out of finite monoids are validated exhaustively at
    construction.  For infinite sources use :meth:`validate_on` with the
    elements that actually occur (for instance a weight's image).
    """

    def __init__(self, source: Monoid, target: Monoid, fn: Callable, name: str = "hom"):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name
        if source.is_finite:
            self.validate_on(source.elements)
        elif fn(source.identity) != target.identity:
            raise MonoidError(f"{name} does not map identity to identity")

    def __call__(self, x):
        return self.fn(x)

    def validate_on(self, elements: Iterable, depth: int = 2):
        """Check the homomorphism laws on the submonoid generated by ``elements``.

        Products of up to ``depth`` generators are included, which is
        exhaustive for finite sources.
        """
        gens = list(dict.fromkeys(elements))
        src, tgt = self.source, self.target
        pool = set(gens) | {src.identity}
        for _ in range(depth - 1):
            pool |= {src.op(a, b) for a in pool for b in gens}
        if self.fn(src.identity) != tgt.identity:
            raise MonoidError(f"{self.name} does not map identity to identity")
        for a in pool:
            fa = self.fn(a)
            if not tgt.contains(fa):
                raise MonoidError(f"{self.name}({a!r}) = {fa!r} is not in the target")
            for b in pool:
                if self.fn(src.op(a, b)) != tgt.op(fa, self.fn(b)):
                    raise MonoidError(f"{self.name} is not multiplicative at ({a!r}, {b!r})")
        return self


def table_hom(source: Monoid, target: Monoid, mapping: dict, name: str = "table") -> MonoidHom:
    if not source.is_finite:
        raise MonoidError("table homomorphisms need a finite source")
    missing = [e for e in source.elements if e not in mapping]
    if missing:
        raise MonoidError(f"mapping misses elements {missing!r}")
    return MonoidHom(source, target, mapping.__getitem__, name)


def annihilate_inf() -> MonoidHom:
    """``nat_add_inf -> bool_and``: finite values to 1, infinity to 0."""
    return MonoidHom(NAT_ADD_INF, BOOL_AND, lambda x: 0 if x is INF else 1, "annihilate_inf")


def power_hom(base: int) -> MonoidHom:
    """``nat_add_inf -> nat_mul``: ``n -> base**n`` and infinity to 0."""
    return MonoidHom(NAT_ADD_INF, NAT_MUL, lambda x: 0 if x is INF else base**x, f"power_{base}")


def scale_hom(c: int, target: Monoid = NAT_ADD) -> MonoidHom:
    """``nat_add -> nat_add`` by ``x -> c*x``, or ``nat_add -> nat_mul`` by ``x -> c**x``."""
    if target == NAT_ADD:
        return MonoidHom(NAT_ADD, NAT_ADD, lambda x: c * x, f"times_{c}")
    if target == NAT_MUL:
        return MonoidHom(NAT_ADD, NAT_MUL, lambda x: c**x, f"exp_{c}")
    raise MonoidError("scale_hom targets nat_add or nat_mul")


def bool_inclusion() -> MonoidHom:
    """``({0,1}, and)`` as a submonoid of ``(N, *)``."""
    return MonoidHom(BOOL_AND, NAT_MUL, lambda x: x, "bool_in_nat_mul")


def projection_hom(source: ProductMonoid, i: int) -> MonoidHom:
    return MonoidHom(source, source.factors[i], lambda x: x[i], f"proj_{i}")


def meet_hom(source: ProductMonoid) -> MonoidHom:
    """AND of the coordinates of a product of ``bool_and`` factors."""
    if any(f != BOOL_AND for f in source.factors):
        raise MonoidError("meet_hom needs a product of bool_and monoids")
    return MonoidHom(source, BOOL_AND, lambda x: int(all(x)), "meet")


def ratio(x, y):
    """``x / y`` as an exact rational, with ``INF`` for a zero denominator."""
    if y == 0:
        return INF
    return Fraction(x, y)


def level_indicator(source: ProductMonoid) -> MonoidHom:
    """``(x, y) -> [x / y == 1]`` on a product of two naturals monoids.

    This is the ratio map followed by the indicator of 1, extended by
    ``(0, 0) -> 1`` so that the additive identity is preserved.  It is only a
    homomorphism on submonoids where ``x <= y`` holds for every generator;
    callers validate it on the image they use it for.
    """
    if len(source.factors) != 2:
        raise MonoidError("level_indicator needs a binary product")

    def fn(p):
        return int(p[0] == p[1] or ratio(p[0], p[1]) == 1)

    return MonoidHom(source, BOOL_AND, fn, "level_indicator")


# -- semirings -------------------------------------------------------------------


class Semiring:
    """A commutative semiring ``(S, +, *, 0, 1)``; ``mul`` is the monoid part."""

    def __init__(self, mul: Monoid, add: Callable, zero, name: str):
        self.mul = mul
        self.add = add
        self.zero = zero
        self.name = name

    def sum(self, values: Iterable):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def __repr__(self):
        return f"<semiring {self.name}>"


NAT_SEMIRING = Semiring(NAT_MUL, lambda a, b: a + b, 0, "nat")
BOOL_SEMIRING = Semiring(BOOL_AND, lambda a, b: a | b, 0, "bool")
SEMIRINGS = {"nat": NAT_SEMIRING, "bool": BOOL_SEMIRING}


class TableSemiring(Semiring):
    """Finite semiring: the multiplicative table monoid plus an addition table."""

    def __init__(self, mul: TableMonoid, add_table: Sequence[Sequence], zero, name: str = "table"):
        self.additive = TableMonoid(mul.elements, zero, add_table, name=name + "_add")
        super().__init__(mul, self.additive.op, zero, name)
        els = mul.elements
        for a, b, c in itertools.product(els, repeat=3):
            if mul.op(a, self.add(b, c)) != self.add(mul.op(a, b), mul.op(a, c)):
                raise MonoidError(f"not distributive at ({a!r}, {b!r}, {c!r})")
