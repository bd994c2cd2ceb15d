"""Reversible gates over a finite alphabet ``{0, ..., q-1}``.

Points of ``A^n`` are encoded by their big-endian rank, so the tuple
``(a1, ..., an)`` has rank ``a1*q^(n-1) + ... + an``.  A :class:`Gate` stores
the image rank of every point rank.

Serial composition follows the right-action convention used throughout the
package: ``serial(f, g)`` applies ``f`` first and then ``g``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class AlphabetMismatch(ValueError):
    pass


def check_alphabet(q: int) -> int:
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"alphabet size must be an integer >= 2, got {q!r}")
    return int(q)


def rank(digits: Sequence[int], q: int) -> int:
    """Big-endian rank of a tuple over ``{0..q-1}``."""
    r = 0
    for d in digits:
        if not 0 <= d < q:
            raise ValueError(f"digit {d} out of range for q={q}")
        r = r * q + int(d)
    return r


def unrank(index: int, q: int, n: int) -> tuple[int, ...]:
    if not 0 <= index < q**n:
        raise ValueError(f"rank {index} out of range for q={q}, n={n}")
    out = [0] * n
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, q)
    return tuple(out)


@lru_cache(maxsize=64)
def digit_table(q: int, n: int) -> np.ndarray:
    """Array of shape ``(q**n, n)``; row ``r`` holds ``unrank(r, q, n)``."""
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        idx, out[:, i] = np.divmod(idx, q)
    out.setflags(write=False)
    return out


def ranks_of(digits: np.ndarray, q: int) -> np.ndarray:
    """Vectorised :func:`rank` over the last axis."""
    digits = np.asarray(digits, dtype=np.int64)
    weights = q ** np.arange(digits.shape[-1] - 1, -1, -1, dtype=np.int64)
    return digits @ weights


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Gate:
    """A bijection of ``A^n`` given as an image array over point ranks."""

    q: int
    n: int
    map: tuple[int, ...]

    def __post_init__(self):
        check_alphabet(self.q)
        if self.n < 1:
            raise ValueError("gate arity must be >= 1")
        m = tuple(int(x) for x in self.map)
        if len(m) != self.q**self.n:
            raise ValueError(f"map has length {len(m)}, expected {self.q**self.n}")
        if sorted(m) != list(range(len(m))):
            raise ValueError("map is not a bijection")
        object.__setattr__(self, "map", m)

    @property
    def size(self) -> int:
        return len(self.map)

    def __call__(self, point: Sequence[int]) -> tuple[int, ...]:
        """Apply the gate to a tuple of digits."""
        if len(point) != self.n:
            raise ValueError(f"expected a {self.n}-tuple")
        return unrank(self.map[rank(point, self.q)], self.q, self.n)

    def image_digits(self) -> np.ndarray:
        return digit_table(self.q, self.n)[np.asarray(self.map)]

    def cycles(self) -> str:
        return format_cycles(self.map)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.map))

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "map": list(self.map)}

    @classmethod
    def from_json(cls, data: dict) -> "Gate":
        q, n = int(data["q"]), int(data["n"])
        if "map" in data:
            return cls(q, n, tuple(data["map"]))
        if "cycles" in data:
            return cls(q, n, parse_cycles(data["cycles"], q**n))
        if "table" in data:
            g = cls.from_table(q, data["table"])
            if g.n != n:
                raise ValueError(f"table has arity {g.n}, expected {n}")
            return g
        raise ValueError("gate JSON needs 'map', 'cycles' or 'table'")

    @classmethod
    def from_table(cls, q: int, rows: dict) -> "Gate":
        """Build a gate from ``{input: output}`` pairs of digit strings or tuples."""

        def as_tuple(x):
            return tuple(int(c) for c in x) if isinstance(x, str) else tuple(x)

        pairs = [(as_tuple(a), as_tuple(b)) for a, b in rows.items()]
        n = len(pairs[0][0])
        image = [None] * q**n
        for a, b in pairs:
            image[rank(a, q)] = rank(b, q)
        if any(x is None for x in image):
            raise ValueError("table does not cover every input")
        return cls(q, n, tuple(image))


# -- cycle notation ----------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def format_cycles(perm: Sequence[int]) -> str:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            seen.add(j)
            cycle.append(j)
            j = perm[j]
        out.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(out) or "()"


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    stripped = text.strip()
    if _CYCLE.sub("", stripped).strip():
        raise ValueError(f"could not parse cycles {text!r}")
    image = list(range(degree))
    # cycles compose left to right, as points act on the right
    for body in _CYCLE.findall(stripped):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(set(pts)) != len(pts) or any(not 0 <= p < degree for p in pts):
            raise ValueError(f"bad cycle ({body})")
        step = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            step[a] = b
        image = [step[x] for x in image]
    return tuple(image)


# -- constructors -------------------------------------------------------------


def identity_gate(q: int, n: int) -> Gate:
    return Gate(q, n, tuple(range(q**n)))


def wire_perm(q: int, alpha: Sequence[int]) -> Gate:
    """Wire permutation: the entry at position ``j`` moves to position ``alpha[j]``.

    ``alpha`` is 0-based.  Equivalently the output is
    ``(x[alpha^-1(0)], ..., x[alpha^-1(n-1)])``.
    """
    n = len(alpha)
    if sorted(alpha) != list(range(n)):
        raise ValueError(f"{alpha!r} is not a permutation of 0..{n - 1}")
    digits = digit_table(q, n)
    out = np.empty_like(digits)
    out[:, list(alpha)] = digits
    return Gate(q, n, tuple(ranks_of(out, q).tolist()))


def unary_gate(q: int, images: Sequence[int]) -> Gate:
    return Gate(q, 1, tuple(images))


def not_gate() -> Gate:
    return Gate(2, 1, (1, 0))


def cnot_gate() -> Gate:
    return controlled_perm(2, [(1,)], not_gate())


def toffoli_gate() -> Gate:
    return controlled_perm(2, [(1, 1)], not_gate())


def fredkin_gate() -> Gate:
    return controlled_perm(2, [(1,)], wire_perm(2, (1, 0)))


def gate_from_function(q: int, n: int, fn) -> Gate:
    """Gate from a Python function on digit tuples."""
    image = [rank(fn(unrank(r, q, n)), q) for r in range(q**n)]
    return Gate(q, n, tuple(image))


def affine_gate(p: int, matrix: Sequence[Sequence[int]], shift: Sequence[int] | None = None) -> Gate:
    """``x -> M x + b`` over GF(p), with ``x`` a column vector of tuple entries."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    mat = np.asarray(matrix, dtype=np.int64) % p
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError("matrix must be square")
    b = np.zeros(n, dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64) % p
    out = (digit_table(p, n) @ mat.T + b) % p
    return Gate(p, n, tuple(ranks_of(out, p).tolist()))


# -- composition --------------------------------------------------------------


def _same_alphabet(f: Gate, g: Gate):
    if f.q != g.q:
        raise AlphabetMismatch(f"alphabet sizes differ: {f.q} vs {g.q}")


def parallel(f: Gate, g: Gate) -> Gate:
    """``f ⊕ g``: ``f`` on the first ``ar(f)`` wires, ``g`` on the rest."""
    _same_alphabet(f, g)
    fm = np.asarray(f.map, dtype=np.int64)
    gm = np.asarray(g.map, dtype=np.int64)
    out = (fm[:, None] * g.size + gm[None, :]).ravel()
    return Gate(f.q, f.n + g.n, tuple(out.tolist()))


def pad(f: Gate, n: int) -> Gate:
    if n < f.n:
        raise ValueError("cannot pad to a smaller arity")
    return f if n == f.n else parallel(f, identity_gate(f.q, n - f.n))


def serial(f: Gate, g: Gate) -> Gate:
    """``f • g``: apply ``f`` then ``g``, padding the shorter one on the right."""
    _same_alphabet(f, g)
    n = max(f.n, g.n)
    f, g = pad(f, n), pad(g, n)
    return Gate(f.q, n, tuple(g.map[x] for x in f.map))


def inverse(f: Gate) -> Gate:
    inv = [0] * f.size
    for i, x in enumerate(f.map):
        inv[x] = i
    return Gate(f.q, f.n, tuple(inv))


def controlled_perm(q: int, controls: Iterable[Sequence[int]], f: Gate, width: int | None = None) -> Gate:
    """Apply ``f`` to the last ``ar(f)`` wires whenever the first wires are in ``controls``.

    ``controls`` is a set of equal-length tuples; a single tuple ``c`` gives
    the usual ``CP(c, f)``.  ``width`` fixes the number of control wires and is
    needed when ``controls`` is empty (default 1).
    """
    if f.q != q:
        raise AlphabetMismatch(f"alphabet sizes differ: {q} vs {f.q}")
    controls = {tuple(int(x) for x in c) for c in controls}
    lengths = {len(c) for c in controls}
    if len(lengths) > 1:
        raise ValueError("control tuples have different lengths")
    m = lengths.pop() if lengths else (width or 1)
    if width is not None and m != width:
        raise ValueError(f"control tuples have length {m}, expected {width}")
    if m < 1:
        raise ValueError("control tuples must be nonempty")
    active = {rank(c, q) for c in controls}
    image = []
    for x in range(q**m):
        offset = x * f.size
        if x in active:
            image.extend(offset + y for y in f.map)
        else:
            image.extend(range(offset, offset + f.size))
    return Gate(q, m + f.n, tuple(image))


# -- components and predicates --------------------------------------------------


@dataclass(frozen=True)
class ComponentTable:
    """A map ``A^n -> A`` as the value at every point rank."""

    q: int
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.q**self.n:
            raise ValueError("component table has wrong length")
        if any(not 0 <= v < self.q for v in self.values):
            raise ValueError("component value out of range")


def component(f: Gate, i: int) -> ComponentTable:
    """The ``i``-th component (1-based) of ``f``."""
    if not 1 <= i <= f.n:
        raise IndexError(f"component index {i} out of range 1..{f.n}")
    col = f.image_digits()[:, i - 1]
    return ComponentTable(f.q, f.n, tuple(col.tolist()))


def components(f: Gate) -> list[ComponentTable]:
    return [component(f, i) for i in range(1, f.n + 1)]


def is_balanced(c: ComponentTable) -> bool:
    counts = np.bincount(np.asarray(c.values, dtype=np.int64), minlength=c.q)
    return bool(np.all(counts == c.q ** (c.n - 1)))


def essential_variables(c: ComponentTable) -> list[int]:
    """0-based positions the component actually depends on."""
    vals = np.asarray(c.values).reshape((c.q,) * c.n)
    out = []
    for j in range(c.n):
        first = np.take(vals, 0, axis=j)
        if any(not np.array_equal(first, np.take(vals, a, axis=j)) for a in range(1, c.q)):
            out.append(j)
    return out


def is_degenerate(f: Gate) -> bool:
    """True iff ``f`` is a wire permutation after unary permutations on each wire."""
    used = []
    for c in components(f):
        ess = essential_variables(c)
        if len(ess) != 1:
            return False
        used.append(ess[0])
    # components of a bijection are balanced, so a single-variable component
    # is a permutation of that variable
    return sorted(used) == list(range(f.n))


def is_affine(f: Gate) -> bool:
    """True iff ``f(x) = M x + b`` over GF(q); requires ``q`` prime."""
    p = f.q
    if not is_prime(p):
        raise ValueError(f"affine test needs a prime alphabet, got q={p}")
    img = f.image_digits()
    b = img[0]
    lin = (img - b) % p
    # column j of M is the image of the unit vector e_j
    units = [p ** (f.n - 1 - j) for j in range(f.n)]
    mat = lin[units].T
    predicted = (digit_table(p, f.n) @ mat.T) % p
    return bool(np.array_equal(predicted, lin))


# -- equivalence relations and quotients ------------------------------------------


def parse_partition(text: str, q: int | None = None) -> list[list[int]]:
    """Parse ``"01|23"`` (or ``"0,1|10,11"`` for large alphabets) into blocks."""
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty block in partition {text!r}")
        if "," in part or (q is not None and q > 10):
            blocks.append([int(t) for t in part.split(",") if t.strip()])
        else:
            blocks.append([int(c) for c in part])
    return blocks


def normalize_partition(blocks: Iterable[Iterable[int]], q: int) -> list[list[int]]:
    blocks = [sorted(set(int(x) for x in b)) for b in blocks]
    flat = [x for b in blocks for x in b]
    if sorted(flat) != list(range(q)) or any(not b for b in blocks):
        raise ValueError("blocks do not partition the alphabet")
    return sorted(blocks, key=min)


def quotient_gate(f: Gate, blocks: Iterable[Iterable[int]]) -> Gate:
    """The gate induced on tuples of classes; classes are indexed by minimum element."""
    blocks = normalize_partition(blocks, f.q)
    cls = np.empty(f.q, dtype=np.int64)
    for i, b in enumerate(blocks):
        cls[b] = i
    r = len(blocks)
    src = ranks_of(cls[digit_table(f.q, f.n)], r)
    dst = ranks_of(cls[f.image_digits()], r)
    image = np.full(r**f.n, -1, dtype=np.int64)
    for s, d in zip(src.tolist(), dst.tolist()):
        if image[s] == -1:
            image[s] = d
        elif image[s] != d:
            raise ValueError("gate does not respect the equivalence relation")
    return Gate(r, f.n, tuple(image.tolist()))


def all_gates(q: int, n: int) -> Iterable[Gate]:
    """Every gate of the given arity (use only for tiny ``q**n``)."""
    for p in itertools.permutations(range(q**n)):
        yield Gate(q, n, p)
