"""Instance families: complete, parity sharpness, union cover, Latin, random."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import NotLatin
from .hypergraph import Hypergraph

#: Random instances use CPython's Mersenne Twister seeded with the string
#: ``"<family>:<seed>"`` and consume one ``random()`` draw per legal tuple in
#: lexicographic order.  Bump the version if that recipe ever changes.
PRNG_NAME = "mt19937-strseed-v1"

COMPLETE = "complete"
PARITY = "parity"
UNION_COVER = "union-cover"
LATIN = "latin"
RANDOM = "random"


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    r: int
    n: int
    params: dict = field(default_factory=dict)

    def header(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in sorted(self.params.items()))
        return f"# spec family={self.family} r={self.r} n={self.n}{extra}"


def _tag(h: Hypergraph, spec: GeneratorSpec) -> Hypergraph:
    return Hypergraph(h.r, h.n, h.edges, comments=[spec.header()])


def gen_complete(r: int, n: int) -> Hypergraph:
    h = Hypergraph(r, n, itertools.product(range(n), repeat=r))
    return _tag(h, GeneratorSpec(COMPLETE, r, n))


def parity_set_sizes(r: int, n: int) -> List[int]:
    """Sizes of the distinguished sets ``A_i``.

    Every size is within 1 of ``n/2`` and the total is odd.  When ``r`` is odd
    and ``n = 2 (mod 4)`` all sizes are exactly ``n/2``.
    """
    if n % 2 == 0:
        sizes = [n // 2] * r
        if sum(sizes) % 2 == 0:
            sizes[0] += 1
    else:
        # alternate ceil / floor, then flip side 0 if the total came out even
        sizes = [(n + 1) // 2 if i % 2 == 0 else n // 2 for i in range(r)]
        if sum(sizes) % 2 == 0:
            sizes[0] = n // 2
    return sizes


def is_canonical_parity(r: int, n: int) -> bool:
    return r % 2 == 1 and n % 4 == 2


def gen_parity_sharpness(r: int, n: int) -> Tuple[Hypergraph, List[frozenset]]:
    """Legal tuples meeting the sets ``A_i`` (lowest indices) an even number of times.

    Returns the hypergraph and the list of ``A_i`` as frozensets of indices.
    No matching covers an odd number of A-vertices, and the total is odd, so
    the hypergraph has no perfect matching.
    """
    sizes = parity_set_sizes(r, n)
    a_sets = [frozenset(range(k)) for k in sizes]
    edges = (
        t for t in itertools.product(range(n), repeat=r) if sum(v < k for v, k in zip(t, sizes)) % 2 == 0
    )
    spec = GeneratorSpec(PARITY, r, n, {"A": ",".join(map(str, sizes))})
    return _tag(Hypergraph(r, n, edges), spec), a_sets


def gen_union_cover(r: int, n: int, k: int) -> Hypergraph:
    """All legal tuples meeting ``X_1 u ... u X_r`` where ``X_i`` is the first ``k`` indices of side ``i``."""
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    edges = (t for t in itertools.product(range(n), repeat=r) if any(v < k for v in t))
    return _tag(Hypergraph(r, n, edges), GeneratorSpec(UNION_COVER, r, n, {"k": k}))


def cyclic_latin_square(n: int) -> List[List[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def is_latin_square(table: Sequence[Sequence[int]]) -> bool:
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        return False
    symbols = set(range(n))
    rows_ok = all(set(row) == symbols for row in table)
    cols_ok = all({table[i][j] for i in range(n)} == symbols for j in range(n))
    return rows_ok and cols_ok


def gen_latin(n: Optional[int] = None, rule="cyclic") -> Hypergraph:
    """3-partite hypergraph ``{(i, j, L[i][j])}`` of a Latin square.

    ``rule`` is ``"cyclic"`` (``L[i][j] = i + j mod n``) or an explicit table.
    """
    if isinstance(rule, str):
        if rule != "cyclic":
            raise ValueError(f"unknown Latin rule {rule!r}")
        if n is None:
            raise ValueError("the cyclic rule needs n")
        table = cyclic_latin_square(n)
        params = {"rule": "cyclic"}
    else:
        table = [list(row) for row in rule]
        if not is_latin_square(table) or (n is not None and len(table) != n):
            raise NotLatin("table is not a Latin square of the requested order")
        n = len(table)
        params = {"rule": "explicit"}
    edges = ((i, j, table[i][j]) for i in range(n) for j in range(n))
    return _tag(Hypergraph(3, n, edges), GeneratorSpec(LATIN, 3, n, params))


def gen_random(r: int, n: int, p: float, seed: int) -> Hypergraph:
    """Each legal tuple independently with probability ``p``; see :data:`PRNG_NAME`."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(f"{RANDOM}:{seed}")
    edges = [t for t in itertools.product(range(n), repeat=r) if rng.random() < p]
    spec = GeneratorSpec(RANDOM, r, n, {"p": p, "seed": seed, "prng": PRNG_NAME})
    return _tag(Hypergraph(r, n, edges), spec)
