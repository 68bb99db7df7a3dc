"""Fractional matchings and covers, solved exactly.

The matching LP has one variable per edge and one ``<= 1`` row per vertex;
the cover LP has one variable per vertex and one ``>= 1`` row per edge.  Each
is solved as its own program, so agreement of the two optima is a genuine
check on the engine rather than a restatement of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .conditions import _check_subset, _complement, check_fractional_condition, normalized_degrees
from .errors import ConditionViolated, NotACover
from .hypergraph import Edge, Hypergraph, PartialTuple, Vertex, format_edge
from .simplex import maximize

EDGE = "edge"
VERTEX = "vertex"


@dataclass
class FractionalAssignment:
    """Nonnegative rational weights on edges (a matching) or vertices (a cover).

    Keys absent from ``weights`` carry weight zero.
    """

    kind: str
    weights: Dict[tuple, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.weights = {k: Fraction(w) for k, w in self.weights.items() if w}
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def __getitem__(self, key) -> Fraction:
        return self.weights.get(tuple(key), Fraction(0))

    def loads(self, h: Hypergraph) -> Dict[Vertex, Fraction]:
        """Total edge weight at every vertex (edge kind only)."""
        loads = {(s, v): Fraction(0) for s in range(h.r) for v in range(h.n)}
        for e, w in self.weights.items():
            for s, v in enumerate(e):
                loads[(s, v)] += w
        return loads

    def is_matching(self, h: Hypergraph) -> bool:
        return (
            self.kind == EDGE
            and all(e in h.edge_set for e in self.weights)
            and all(load <= 1 for load in self.loads(h).values())
        )

    def is_perfect_matching(self, h: Hypergraph) -> bool:
        return self.is_matching(h) and all(load == 1 for load in self.loads(h).values())

    def edge_sum(self, edge: Sequence[int]) -> Fraction:
        return sum((self[(s, v)] for s, v in enumerate(edge)), Fraction(0))

    def uncovered(self, h: Hypergraph) -> List[Edge]:
        return [e for e in h.edges if self.edge_sum(e) < 1]

    def is_cover(self, h: Hypergraph) -> bool:
        return self.kind == VERTEX and not self.uncovered(h)

    def to_text(self) -> str:
        def render(key):
            return format_edge(key) if self.kind == EDGE else f"{key[0]}:{key[1]}"

        lines = [f"{render(k)} {w.numerator}/{w.denominator}" for k, w in sorted(self.weights.items())]
        return "".join(line + "\n" for line in lines)


def _vertices(h: Hypergraph) -> List[Vertex]:
    return [(s, v) for s in range(h.r) for v in range(h.n)]


def nu_star(h: Hypergraph) -> Tuple[Fraction, FractionalAssignment]:
    """Fractional matching number with an optimal edge weighting."""
    if not h.edges:
        return Fraction(0), FractionalAssignment(EDGE)
    rows = [[1 if e[s] == v else 0 for e in h.edges] for s, v in _vertices(h)]
    res = maximize([1] * len(h.edges), rows, [1] * len(rows))
    return res.value, FractionalAssignment(EDGE, dict(zip(h.edges, res.x)))


def tau_star(h: Hypergraph) -> Tuple[Fraction, FractionalAssignment]:
    """Fractional cover number with an optimal vertex weighting."""
    if not h.edges:
        return Fraction(0), FractionalAssignment(VERTEX)
    verts = _vertices(h)
    # min sum(g)  <=>  max -sum(g)  with  -g[e] <= -1
    rows = [[-1 if e[s] == v else 0 for s, v in verts] for e in h.edges]
    res = maximize([-1] * len(verts), rows, [-1] * len(rows))
    return -res.value, FractionalAssignment(VERTEX, dict(zip(verts, res.x)))


def cheapest_optimal_cover(h: Hypergraph, z: Sequence[int]) -> FractionalAssignment:
    """Optimal fractional cover putting the least total weight on the tuple ``z``.

    Solves ``min g[z]`` over covers with ``g[V] = tau*``.
    """
    tau, _ = tau_star(h)
    verts = _vertices(h)
    if not h.edges:
        return FractionalAssignment(VERTEX)
    rows = [[-1 if e[s] == v else 0 for s, v in verts] for e in h.edges]
    rows.append([1] * len(verts))
    rhs = [-1] * len(h.edges) + [tau]
    res = maximize([-1 if z[s] == v else 0 for s, v in verts], rows, rhs)
    return FractionalAssignment(VERTEX, dict(zip(verts, res.x)))


def verify_duality(h: Hypergraph) -> bool:
    """Exact equality of the two independently solved optima."""
    nu, matching = nu_star(h)
    tau, cover = tau_star(h)
    assert matching.is_matching(h) and cover.is_cover(h)
    return nu == tau


def decompose_complete_multipartite(n: int, k: int) -> List[List[Tuple[int, ...]]]:
    """Split all ``n**k`` tuples of ``[n]^k`` into ``n**(k-1)`` perfect matchings.

    Matching number ``c`` (offsets in lexicographic order) is
    ``{(i, i + c_1, ..., i + c_{k-1}) mod n : i < n}``.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    return [
        [(i,) + tuple((i + c) % n for c in offsets) for i in range(n)]
        for offsets in itertools.product(range(n), repeat=k - 1)
    ]


@dataclass
class GoodSelection:
    index: int
    family: List[PartialTuple]
    good_count: int
    zeta: Fraction


def select_good_matching(h: Hypergraph, subset, z: Sequence[int]) -> GoodSelection:
    """Decomposition matching holding the most tuples ``y`` on ``subset`` with ``y + z|rest`` an edge.

    Pigeonhole gives at least ``ceil(zeta * n)`` of them, where ``zeta`` is the
    fraction of good tuples; this is asserted.
    """
    subset = _check_subset(h, subset)
    comp = _complement(h, subset)
    z = tuple(z)
    h.check_tuple(PartialTuple.from_edge(z, range(h.r)))

    def good(values):
        e = list(z)
        for s, v in zip(subset, values):
            e[s] = v
        return tuple(e) in h.edge_set

    zeta = Fraction(h.degree(PartialTuple.from_edge(z, comp)), h.n ** len(subset))
    best = None
    for c, matching in enumerate(decompose_complete_multipartite(h.n, len(subset))):
        members = [y for y in matching if good(y)]
        if best is None or len(members) > len(best[1]):
            best = (c, members)
    c, members = best
    family = [PartialTuple(tuple(zip(subset, y))) for y in members]
    need = -((-zeta.numerator * h.n) // zeta.denominator)
    assert len(family) >= need, "pigeonhole over the decomposition failed"
    return GoodSelection(c, family, len(family), zeta)


@dataclass
class CoverAnalysis:
    """Replay of the cover lower bound for one vertex weighting.

    ``branch`` is ``"direct"`` when ``beta + gamma >= 1`` and ``"exchange"``
    otherwise; the latter fills ``theta``, ``zeta``, the good families and
    the per-part bounds.
    """

    subset: Tuple[int, ...]
    alpha: List[Fraction]
    z: Tuple[int, ...]
    beta: Fraction
    gamma: Fraction
    total: Fraction
    bound: Fraction
    branch: str
    theta: Optional[Fraction] = None
    zeta: Optional[Fraction] = None
    good_in: Optional[GoodSelection] = None
    good_out: Optional[GoodSelection] = None
    covered_sets: Dict[int, frozenset] = field(default_factory=dict)
    part_bounds: Tuple[Fraction, Fraction] = ()


def analyze_cover(h: Hypergraph, g: FractionalAssignment, subset) -> CoverAnalysis:
    """Lower-bound ``g[V]`` from the per-side minima of the cover ``g``.

    Let ``alpha[j]`` be the least weight on side ``j`` (attained first at
    ``z[j]``), ``beta`` the sum over ``subset`` and ``gamma`` over the rest.
    If ``beta + gamma >= 1`` the bound is ``n (beta + gamma)``.  Otherwise
    ``z`` is a non-edge, and a disjoint family of good tuples on each part
    gives ``zeta n (1-gamma) + (1-zeta) n beta + theta n (1-beta) + (1-theta) n gamma``.

    Asserts ``bound <= g[V]``, and ``bound >= n`` whenever ``theta + zeta >= 1``.
    """
    subset = _check_subset(h, subset)
    comp = _complement(h, subset)
    if g.kind != VERTEX:
        raise NotACover("expected vertex weights")
    missed = g.uncovered(h)
    if missed:
        raise NotACover(f"edge {format_edge(missed[0])} has weight {g.edge_sum(missed[0])} < 1")
    n = h.n
    alpha, z = [], []
    for s in range(h.r):
        w, v = min((g[(s, v)], v) for v in range(n))
        alpha.append(w)
        z.append(v)
    z = tuple(z)
    beta = sum((alpha[s] for s in subset), Fraction(0))
    gamma = sum((alpha[s] for s in comp), Fraction(0))
    total = sum((g[x] for x in _vertices(h)), Fraction(0))
    if beta + gamma >= 1:
        bound = n * (beta + gamma)
        analysis = CoverAnalysis(subset, alpha, z, beta, gamma, total, bound, "direct")
    else:
        assert z not in h.edge_set, "a cheap tuple cannot be an edge of a cover"
        theta, zeta = normalized_degrees(h, z, subset)
        good_in = select_good_matching(h, subset, z)
        good_out = select_good_matching(h, comp, z)
        covered = {s: frozenset(y.as_dict()[s] for y in good_in.family) for s in subset}
        covered.update({s: frozenset(y.as_dict()[s] for y in good_out.family) for s in comp})
        part_in = zeta * n * (1 - gamma) + (1 - zeta) * n * beta
        part_out = theta * n * (1 - beta) + (1 - theta) * n * gamma
        # the family bounds are the sharper intermediate step
        assert sum((g[(s, v)] for s in subset for v in range(n)), Fraction(0)) >= (
            good_in.good_count * (1 - gamma) + (n - good_in.good_count) * beta
        ) >= part_in
        assert sum((g[(s, v)] for s in comp for v in range(n)), Fraction(0)) >= (
            good_out.good_count * (1 - beta) + (n - good_out.good_count) * gamma
        ) >= part_out
        bound = part_in + part_out
        assert bound == n * (1 + (beta + gamma - 1) * (1 - zeta - theta))
        analysis = CoverAnalysis(
            subset, alpha, z, beta, gamma, total, bound, "exchange",
            theta=theta, zeta=zeta, good_in=good_in, good_out=good_out,
            covered_sets=covered, part_bounds=(part_in, part_out),
        )
        if theta + zeta >= 1:
            assert bound >= n
    assert analysis.bound <= total
    return analysis


def perfect_fractional_matching(h: Hypergraph, subset) -> FractionalAssignment:
    """Edge weights with load exactly 1 at every vertex.

    Raises :class:`ConditionViolated` carrying the fractional-condition report
    when some non-edge has ``theta + zeta < 1``.
    """
    report = check_fractional_condition(h, subset)
    if not report.holds:
        raise ConditionViolated(f"fractional condition fails at {report.violations[0].tuple}", report)
    value, weights = nu_star(h)
    if value != h.n:
        raise AssertionError(f"fractional condition holds but nu* = {value} != {h.n}")
    assert weights.is_perfect_matching(h)
    return weights
