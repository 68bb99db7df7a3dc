"""n-balanced r-partite r-uniform hypergraphs, legal tuples and matchings.

Sides are numbered ``0 .. r-1`` and vertices inside a side ``0 .. n-1``.  An
edge is a plain tuple of length ``r`` whose entry ``i`` is the vertex chosen on
side ``i``; a vertex is the pair ``(side, index)``.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Tuple, Union

from .errors import InvalidHypergraph, InvalidQuery, InvalidTuple

logger = logging.getLogger(__name__)

Edge = Tuple[int, ...]
Vertex = Tuple[int, int]


@dataclass(frozen=True, order=True)
class PartialTuple:
    """A legal tuple: at most one vertex on each of a subset of sides.

    ``items`` is kept sorted by side, so equal tuples compare and hash equal.
    """

    items: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def of(cls, assignments: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = ()) -> "PartialTuple":
        pairs = assignments.items() if isinstance(assignments, Mapping) else assignments
        pairs = [(int(s), int(v)) for s, v in pairs]
        sides = [s for s, _ in pairs]
        if len(set(sides)) != len(sides):
            raise InvalidTuple(f"more than one vertex on a side: {pairs}")
        return cls(tuple(sorted(pairs)))

    @classmethod
    def from_edge(cls, edge: Sequence[int], sides: Iterable[int]) -> "PartialTuple":
        """Restriction of a full tuple to ``sides``."""
        return cls(tuple((s, edge[s]) for s in sorted(sides)))

    @property
    def sides(self) -> Tuple[int, ...]:
        return tuple(s for s, _ in self.items)

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(v for _, v in self.items)

    def as_dict(self) -> dict:
        return dict(self.items)

    def extend(self, side: int, index: int) -> "PartialTuple":
        return PartialTuple.of(self.items + ((side, index),))

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "{" + ",".join(f"{s}:{v}" for s, v in self.items) + "}"


TupleLike = Union[PartialTuple, Mapping[int, int], Iterable[Tuple[int, int]]]


def as_partial_tuple(f: TupleLike) -> PartialTuple:
    return f if isinstance(f, PartialTuple) else PartialTuple.of(f)


class Hypergraph:
    """An n-balanced r-partite r-graph.

    The edge set is deduplicated and stored in lexicographic order.  Instances
    are treated as immutable; projection indexes used by :meth:`degree` and
    :meth:`neighbors` are built lazily and cached.

    Parameters
    ----------
    r : int
        Number of sides, at least 2.
    n : int
        Size of every side, at least 1.
    edges : iterable of sequences of int
        Each edge lists one vertex index per side.
    comments : sequence of str, optional
        Free-form ``#`` lines carried through the text format.
    """

    def __init__(self, r: int, n: int, edges: Iterable[Sequence[int]] = (), comments: Sequence[str] = ()):
        r, n = int(r), int(n)
        if r < 2:
            raise InvalidHypergraph(f"r must be >= 2, got {r}")
        if n < 1:
            raise InvalidHypergraph(f"n must be >= 1, got {n}")
        self.r = r
        self.n = n
        seen = set()
        raw = 0
        for e in edges:
            t = tuple(int(v) for v in e)
            if len(t) != r:
                raise InvalidHypergraph(f"edge {t} does not have {r} entries")
            if any(v < 0 or v >= n for v in t):
                raise InvalidHypergraph(f"edge {t} has an index outside [0, {n})")
            seen.add(t)
            raw += 1
        self.duplicates_dropped = raw - len(seen)
        if self.duplicates_dropped:
            logger.warning("dropped %d duplicate edge(s)", self.duplicates_dropped)
        self.edges: Tuple[Edge, ...] = tuple(sorted(seen))
        self.edge_set = frozenset(seen)
        self.comments = tuple(comments)
        self._projections: dict = {}
        self._extensions: dict = {}

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.edge_set

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.r, self.n, self.edge_set) == (other.r, other.n, other.edge_set)

    def __hash__(self) -> int:
        return hash((self.r, self.n, self.edge_set))

    def __repr__(self) -> str:
        return f"Hypergraph(r={self.r}, n={self.n}, |E|={len(self.edges)})"

    # -- legality -------------------------------------------------------------

    def check_tuple(self, f: TupleLike) -> PartialTuple:
        f = as_partial_tuple(f)
        for s, v in f.items:
            if not 0 <= s < self.r:
                raise InvalidTuple(f"side {s} outside [0, {self.r})")
            if not 0 <= v < self.n:
                raise InvalidTuple(f"vertex {v} outside [0, {self.n}) on side {s}")
        return f

    def _projection(self, sides: Tuple[int, ...]) -> Counter:
        proj = self._projections.get(sides)
        if proj is None:
            proj = Counter(tuple(e[s] for s in sides) for e in self.edges)
            self._projections[sides] = proj
        return proj

    # -- queries --------------------------------------------------------------

    def degree(self, f: TupleLike) -> int:
        """Number of edges containing the legal tuple ``f``."""
        f = self.check_tuple(f)
        if not f.items:
            return len(self.edges)
        return self._projection(f.sides).get(f.values, 0)

    def neighbors(self, f: TupleLike, side: int) -> frozenset:
        """Vertices ``v`` on ``side`` such that ``f`` plus ``v`` lies in an edge."""
        f = self.check_tuple(f)
        if not 0 <= side < self.r:
            raise InvalidQuery(f"side {side} outside [0, {self.r})")
        if side in f.sides:
            raise InvalidQuery(f"side {side} is already occupied by {f}")
        key = (f.sides, side)
        index = self._extensions.get(key)
        if index is None:
            index = defaultdict(set)
            for e in self.edges:
                index[tuple(e[s] for s in f.sides)].add(e[side])
            index = {k: frozenset(v) for k, v in index.items()}
            self._extensions[key] = index
        return index.get(f.values, frozenset())

    def vertex_degree(self, side: int, index: int) -> int:
        return self.degree(PartialTuple(((side, index),)))

    def permute_sides(self, order: Sequence[int]) -> "Hypergraph":
        """New hypergraph whose side ``k`` is side ``order[k]`` of this one."""
        order = tuple(order)
        if sorted(order) != list(range(self.r)):
            raise InvalidQuery(f"{order} is not a permutation of the sides")
        return Hypergraph(self.r, self.n, (tuple(e[s] for s in order) for e in self.edges))

    # -- text format ----------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.r} {self.n}"]
        lines.extend(self.comments)
        lines.extend(" ".join(map(str, e)) for e in self.edges)
        return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the ``r n`` header plus one edge per line text format."""
    header = None
    comments = []
    edges = []
    for lineno, line in enumerate(text.split("\n"), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped)
            continue
        try:
            fields = [int(tok) for tok in stripped.split()]
        except ValueError:
            raise InvalidHypergraph(f"line {lineno}: expected integers, got {line!r}") from None
        if header is None:
            if len(fields) != 2:
                raise InvalidHypergraph(f"line {lineno}: header must be 'r n'")
            header = fields
        else:
            edges.append(fields)
    if header is None:
        raise InvalidHypergraph("missing 'r n' header")
    return Hypergraph(header[0], header[1], edges, comments=comments)


def read_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


def write_hypergraph(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(h.to_text())


def format_edge(edge: Sequence[int]) -> str:
    return ",".join(map(str, edge))


def parse_edge(token: str) -> Edge:
    return tuple(int(v) for v in token.split(","))


# -- matchings ---------------------------------------------------------------


class MatchingCheck(NamedTuple):
    valid: bool
    perfect: bool
    reason: str = ""


def validate_matching(h: Hypergraph, matching: Iterable[Sequence[int]]) -> MatchingCheck:
    """Check that ``matching`` is a set of disjoint edges of ``h``.

    Never raises; the verdict says why a candidate was rejected.
    """
    edges = [tuple(e) for e in matching]
    if len(set(edges)) != len(edges):
        return MatchingCheck(False, False, "repeated edge")
    used = [set() for _ in range(h.r)]
    for e in edges:
        if e not in h.edge_set:
            return MatchingCheck(False, False, f"{format_edge(e)} is not an edge")
        for s, v in enumerate(e):
            if v in used[s]:
                return MatchingCheck(False, False, f"vertex {v} on side {s} covered twice")
            used[s].add(v)
    perfect = len(edges) == h.n
    return MatchingCheck(True, perfect, "" if perfect else f"size {len(edges)} < {h.n}")


def enumerate_legal_tuples(h: Hypergraph, sides: Iterable[int]) -> Iterator[PartialTuple]:
    """All ``n**len(sides)`` tuples on ``sides`` in lexicographic order."""
    sides = tuple(sorted(set(sides)))
    for s in sides:
        if not 0 <= s < h.r:
            raise InvalidQuery(f"side {s} outside [0, {h.r})")
    for values in itertools.product(range(h.n), repeat=len(sides)):
        yield PartialTuple(tuple(zip(sides, values)))


def covered_vertices(matching: Iterable[Sequence[int]]) -> set:
    return {(s, v) for e in matching for s, v in enumerate(e)}
