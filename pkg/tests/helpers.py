"""Shared generators for the test suites."""

import numpy as np

from permclone.automorphism import ColoredStructure, _tuple_image
from permclone.gates import Gate
from permclone.relations import Relation


def random_structure(rng, m_max=8):
    """Random colored structure on at most ``m_max`` points, sometimes with symmetry."""
    m = int(rng.integers(1, m_max + 1))
    s = ColoredStructure(m)
    for _ in range(int(rng.integers(1, 3))):
        k = int(rng.integers(1, 4)) if m <= 5 else int(rng.integers(1, 3))
        colors = rng.integers(0, int(rng.integers(1, 4)), m**k)
        if rng.random() < 0.3:
            # fold the coloring under a random permutation to create automorphisms
            img = _tuple_image(rng.permutation(m), m, k)
            colors = np.minimum(colors, colors[img])
        s.add_layer(k, colors)
    return s


def random_relation(rng, q, k, density=None):
    p = rng.random() if density is None else density
    keep = rng.random(q**k) < p
    return Relation(q, k, tuple(int(i) for i in np.flatnonzero(keep)))


def random_gate(rng, q, n):
    return Gate(q, n, tuple(rng.permutation(q**n).tolist()))


# criterion -> list of (detail, ok), filled by the acceptance tests
ACCEPTANCE: dict[str, list[tuple[str, bool]]] = {}


def record(criterion, detail: str, ok: bool):
    ACCEPTANCE.setdefault(str(criterion), []).append((detail, bool(ok)))
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
