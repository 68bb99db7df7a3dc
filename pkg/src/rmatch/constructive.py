"""Perfect matchings under the pair-degree hypothesis, by explicit exchanges.

Pipeline for a hypergraph ``h`` whose legal (r-1)-tuples avoiding a
``strict`` side have degree ``> n/2`` and those avoiding a ``weak`` side have
degree ``>= n/2``:

1. relabel sides so ``strict`` is side 0 and ``weak`` is the last side;
2. reduce to r = 3 (contract the middle sides along the diagonal matching,
   or pad a bipartite instance with a complete middle side);
3. build a matching of size ``n - 1``;
4. grow it to a perfect matching with one exchange step (:func:`augment_near_perfect`);
5. map the result back to ``h``.

In the 3-partite image, side 0 carries the strict bound: every pair on
sides 1, 2 lies in more than ``n/2`` edges.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .conditions import admissible_side_pairs, check_main_condition
from .errors import (
    BudgetExhausted,
    ConditionViolated,
    HypothesisViolated,
    InvalidMatching,
    NoNearPerfectFound,
    NothingToContract,
    UnsupportedArity,
)
from .hypergraph import Edge, Hypergraph, PartialTuple, format_edge, parse_edge, validate_matching
from .oracle import max_matching

CASE1 = "Case1"
CASE2A = "Case2a"
CASE2B = "Case2b"
CASE3_DIRECT = "Case3Direct"
CASE3_RECOUNT = "Case3Recount"
CASES = (CASE1, CASE2A, CASE2B, CASE3_DIRECT, CASE3_RECOUNT)


# -- reduction to r = 3 ------------------------------------------------------


@dataclass
class ContractionMap:
    """Diagonal matching ``g_i = (i, ..., i)`` of the middle sides.

    ``original`` is the hypergraph that was contracted; vertex ``i`` of the
    middle side of the image stands for ``g_i``.
    """

    original: Hypergraph
    F: List[Tuple[int, ...]]
    forward: Dict[Tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        self.forward = {g: i for i, g in enumerate(self.F)}

    def expand(self, edge: Sequence[int]) -> Edge:
        x, i, y = edge
        return (x,) + self.F[i] + (y,)


def contract_to_tripartite(h: Hypergraph) -> Tuple[Hypergraph, ContractionMap]:
    """3-partite image on sides ``(0, F, r-1)``.

    ``(x, i, y)`` is an edge iff ``(x, i, ..., i, y)`` is an edge of ``h``.
    """
    if h.r <= 3:
        raise NothingToContract(f"r = {h.r} needs no contraction")
    F = [(i,) * (h.r - 2) for i in range(h.n)]
    cmap = ContractionMap(h, F)
    edges = [(e[0], cmap.forward[e[1:-1]], e[-1]) for e in h.edges if e[1:-1] in cmap.forward]
    return Hypergraph(3, h.n, edges), cmap


def decontract_matching(matching: Iterable[Sequence[int]], cmap: ContractionMap) -> List[Edge]:
    """Expand every ``g_i``; raises :class:`InvalidMatching` unless the result is perfect."""
    expanded = sorted(cmap.expand(tuple(e)) for e in matching)
    check = validate_matching(cmap.original, expanded)
    if not check.perfect:
        raise InvalidMatching(f"not a perfect matching of the contracted hypergraph: {check.reason}")
    return expanded


@dataclass
class Reduction:
    original: Hypergraph
    strict: int
    weak: int
    order: Tuple[int, ...]
    image: Hypergraph
    contraction: Optional[ContractionMap] = None
    padded: bool = False

    def restore(self, matching: Iterable[Sequence[int]]) -> List[Edge]:
        """Map a matching of the image back to ``original``."""
        matching = [tuple(e) for e in matching]
        if self.contraction is not None:
            permuted = decontract_matching(matching, self.contraction)
        elif self.padded:
            permuted = [(e[0], e[2]) for e in matching]
        else:
            permuted = matching
        out = []
        for e in permuted:
            edge = [0] * self.original.r
            for k, side in enumerate(self.order):
                edge[side] = e[k]
            out.append(tuple(edge))
        return sorted(out)


def reduce_to_tripartite(h: Hypergraph, strict: int, weak: int) -> Reduction:
    middle = tuple(s for s in range(h.r) if s not in (strict, weak))
    order = (strict,) + middle + (weak,)
    permuted = h.permute_sides(order)
    if h.r == 2:
        # a complete middle side keeps both pair-degree bounds of the bipartite graph
        image = Hypergraph(3, h.n, ((a, i, b) for a, b in permuted.edges for i in range(h.n)))
        return Reduction(h, strict, weak, order, image, padded=True)
    if h.r == 3:
        return Reduction(h, strict, weak, order, permuted)
    image, cmap = contract_to_tripartite(permuted)
    return Reduction(h, strict, weak, order, image, contraction=cmap)


# -- near-perfect matching ---------------------------------------------------


def _free(h: Hypergraph, matching) -> List[List[int]]:
    used = [set(e[s] for e in matching) for s in range(h.r)]
    return [[v for v in range(h.n) if v not in used[s]] for s in range(h.r)]


def _disjoint_edges(candidates: List[Edge], count: int) -> Optional[List[Edge]]:
    """First (lexicographic) set of ``count`` pairwise disjoint candidates."""

    def go(start, chosen, used):
        if len(chosen) == count:
            return list(chosen)
        for k in range(start, len(candidates)):
            e = candidates[k]
            if any(e[s] in used[s] for s in range(len(e))):
                continue
            for s, v in enumerate(e):
                used[s].add(v)
            chosen.append(e)
            found = go(k + 1, chosen, used)
            chosen.pop()
            for s, v in enumerate(e):
                used[s].discard(v)
            if found:
                return found
        return None

    return go(0, [], [set() for _ in range(len(candidates[0]))] if candidates else [])


def _exchange(h: Hypergraph, matching: List[Edge], depth: int) -> Optional[List[Edge]]:
    """Replace ``depth`` matching edges by ``depth + 1`` edges, if possible."""
    free = _free(h, matching)
    for removed in itertools.combinations(matching, depth):
        allowed = [sorted(set(free[s]) | {e[s] for e in removed}) for s in range(h.r)]
        candidates = [t for t in itertools.product(*allowed) if t in h.edge_set]
        found = _disjoint_edges(candidates, depth + 1)
        if found:
            keep = [e for e in matching if e not in removed]
            return sorted(keep + found)
    return None


def build_near_perfect(h: Hypergraph, budget: Optional[int] = None) -> Tuple[List[Edge], Tuple[int, int, int]]:
    """A matching of size ``n - 1`` and the vertex it misses on each side.

    Greedy first, then exchanges that swap up to two matching edges for one
    more edge than they remove, and finally an exact search as a fallback.
    """
    if h.r != 3:
        raise UnsupportedArity("build_near_perfect works on 3-partite hypergraphs")
    target = h.n - 1
    matching: List[Edge] = []
    used = [set(), set(), set()]
    for e in h.edges:
        if len(matching) == target:
            break
        if all(e[s] not in used[s] for s in range(3)):
            matching.append(e)
            for s in range(3):
                used[s].add(e[s])
    while len(matching) < target:
        grown = _exchange(h, matching, 0) or _exchange(h, matching, 1) or _exchange(h, matching, 2)
        if grown is None:
            break
        matching = grown
    if len(matching) < target:
        try:
            best = max_matching(h, budget)
        except BudgetExhausted as exc:
            raise NoNearPerfectFound(f"search budget exhausted at size {len(exc.best or [])}") from exc
        if best.max_matching_size < target:
            raise NoNearPerfectFound(f"maximum matching has size {best.max_matching_size} < {target}")
        matching = sorted(best.witness)[:target]
    matching = sorted(matching)
    free = _free(h, matching)
    return matching, (free[0][0], free[1][0], free[2][0])


# -- augmentation ------------------------------------------------------------


@dataclass
class AugmentationTrace:
    """One exchange step: ``(input - removed) + added`` is the output matching.

    ``inner`` is the edge of the intermediate matching used by
    :data:`CASE3_RECOUNT`, which may itself be an edge added earlier in the
    same step.
    """

    case: str
    w: int
    removed: List[Edge]
    added: List[Edge]
    inner: Optional[Edge] = None

    def replay(self, matching: Iterable[Sequence[int]]) -> List[Edge]:
        current = {tuple(e) for e in matching}
        missing = [e for e in self.removed if e not in current]
        if missing:
            raise InvalidMatching(f"trace removes {format_edge(missing[0])}, which is not in the matching")
        return sorted((current - set(self.removed)) | set(self.added))

    def to_line(self) -> str:
        parts = [f"CASE {self.case}", f"w={self.w}"]
        parts += [f"-{format_edge(e)}" for e in self.removed]
        parts += [f"+{format_edge(e)}" for e in self.added]
        if self.inner is not None:
            parts.append(f"@{format_edge(self.inner)}")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "AugmentationTrace":
        tokens = line.split()
        if len(tokens) < 3 or tokens[0] != "CASE" or tokens[1] not in CASES or not tokens[2].startswith("w="):
            raise ValueError(f"malformed trace line: {line!r}")
        removed, added, inner = [], [], None
        for tok in tokens[3:]:
            if tok[0] == "-":
                removed.append(parse_edge(tok[1:]))
            elif tok[0] == "+":
                added.append(parse_edge(tok[1:]))
            elif tok[0] == "@":
                inner = parse_edge(tok[1:])
            else:
                raise ValueError(f"malformed trace token {tok!r}")
        return cls(tokens[1], int(tokens[2][2:]), removed, added, inner)


def _witness(h: Hypergraph, candidates: Iterable[Tuple[PartialTuple, bool]], message: str) -> HypothesisViolated:
    """Build the error for a failed counting step from a genuinely deficient tuple."""
    n = h.n
    for f, strict in candidates:
        d = h.degree(f)
        if (strict and 2 * d <= n) or (not strict and 2 * d < n):
            return HypothesisViolated(message, witness=f, degree=d, strict=strict)
    report = check_main_condition(h, 0, 2)
    if report.violations:
        v = report.violations[0]
        return HypothesisViolated(message, witness=v.tuple, degree=v.degree, strict=v.cmp == ">")
    raise AssertionError(f"{message}, yet the degree hypothesis holds")


def _pair(a: int, b: int, sides=(1, 2)) -> PartialTuple:
    return PartialTuple(((sides[0], a), (sides[1], b)))


def pivot_guarantee(n: int) -> int:
    """Least possible maximum number of matching pairs adjacent to one side-0 vertex.

    ``n - 1`` pairs each have at least ``n // 2 + 1`` side-0 neighbours,
    spread over ``n`` vertices.
    """
    return -(-(n - 1) * (n // 2 + 1) // n)


def augment_near_perfect(
    h: Hypergraph, matching: Iterable[Sequence[int]], unmatched: Sequence[int]
) -> Tuple[List[Edge], AugmentationTrace]:
    """Turn a matching of size ``n - 1`` into a perfect one.

    Requires side 0 strict and side 2 weak.  The pivot ``w`` is the side-0
    vertex adjacent to the most pairs ``(e[1], e[2])`` of matching edges
    (smallest index on ties); every candidate exchange edge is the
    lexicographically smallest one available.

    Raises :class:`HypothesisViolated` with a deficient tuple when a counting
    step comes up empty.
    """
    if h.r != 3:
        raise UnsupportedArity("augment_near_perfect works on 3-partite hypergraphs")
    n = h.n
    M = sorted({tuple(e) for e in matching})
    check = validate_matching(h, M)
    if not check.valid or len(M) != n - 1:
        raise InvalidMatching(f"expected a valid matching of size {n - 1}: {check.reason or len(M)}")
    x1, x2, x3 = (int(v) for v in unmatched)
    for s, v in enumerate((x1, x2, x3)):
        if not 0 <= v < n or any(e[s] == v for e in M):
            raise InvalidMatching(f"vertex {v} on side {s} is not unmatched")
    E = h.edge_set

    def done(new, case, w, inner=None):
        new = sorted(new)
        trace = AugmentationTrace(
            case, w, sorted(set(M) - set(new)), sorted(set(new) - set(M)), inner
        )
        assert validate_matching(h, new).perfect
        return new, trace

    if (x1, x2, x3) in E:
        return done(M + [(x1, x2, x3)], CASE1, x1)

    counts = [0] * n
    for e in M:
        for v in h.neighbors(_pair(e[1], e[2]), 0):
            counts[v] += 1
    w = max(range(n), key=lambda v: (counts[v], -v))
    if counts[w] < pivot_guarantee(n):
        raise _witness(h, ((_pair(e[1], e[2]), True) for e in M), "no side-0 vertex meets enough matching pairs")

    def without(edges, *drop):
        return [e for e in edges if e not in drop]

    if w == x1:
        cands = [e for e in M if (x1, e[1], e[2]) in E and (e[0], x2, x3) in E]
        if not cands:
            raise _witness(h, [(_pair(x2, x3), True)], "case 1: no exchange edge")
        e = cands[0]
        return done(without(M, e) + [(x1, e[1], e[2]), (e[0], x2, x3)], CASE1, w)

    f = next(e for e in M if e[0] == w)
    _, u2, u3 = f
    if (x1, x2, u3) in E:
        cands = [g for g in M if (g[0], u2, x3) in E and (w, g[1], g[2]) in E]
        if not cands:
            raise _witness(h, [(_pair(u2, x3), True)], "case 2: no exchange edge")
        g = cands[0]
        if g == f:
            return done(without(M, f) + [(x1, x2, u3), (w, u2, x3)], CASE2A, w)
        v1, v2, v3 = g
        return done(without(M, f, g) + [(x1, x2, u3), (v1, u2, x3), (w, v2, v3)], CASE2B, w)

    cands = [g for g in M if (g[0], u2, u3) in E and (x1, x2, g[2]) in E]
    if not cands:
        raise _witness(
            h, [(_pair(u2, u3), True), (_pair(x1, x2, (0, 1)), False)], "case 3: no exchange edge"
        )
    g = cands[0]
    v1, v2, v3 = g
    M1 = without(M, f, g) + [(v1, u2, u3), (x1, x2, v3)]
    if (w, v2, x3) in E:
        return done(M1 + [(w, v2, x3)], CASE3_DIRECT, w)
    cands = sorted(e for e in M1 if (w, e[1], e[2]) in E and (e[0], v2, x3) in E)
    if not cands:
        raise _witness(h, [(_pair(v2, x3), True)], "case 3: no edge for the recount step")
    e = cands[0]
    return done(without(M1, e) + [(w, e[1], e[2]), (e[0], v2, x3)], CASE3_RECOUNT, w, inner=e)


# -- top level ---------------------------------------------------------------


@dataclass
class Solution:
    matching: List[Edge]
    traces: List[AugmentationTrace]
    near_perfect: List[Edge]
    reduction: Reduction

    def to_text(self) -> str:
        red = self.reduction
        lines = [f"REDUCE strict={red.strict} weak={red.weak}"]
        lines += [f"NEAR {format_edge(e)}" for e in self.near_perfect]
        lines += [t.to_line() for t in self.traces]
        lines += [f"PM {format_edge(e)}" for e in self.matching]
        return "\n".join(lines) + "\n"


def solve(h: Hypergraph, budget: Optional[int] = None) -> Solution:
    """Perfect matching of ``h`` together with everything needed to replay it."""
    pair = next(admissible_side_pairs(h), None)
    if pair is None:
        report = check_main_condition(h, 0, h.r - 1)
        raise ConditionViolated("no (strict, weak) side pair satisfies the degree condition", report)
    red = reduce_to_tripartite(h, *pair)
    near, unmatched = build_near_perfect(red.image, budget)
    perfect, trace = augment_near_perfect(red.image, near, unmatched)
    matching = red.restore(perfect)
    if not validate_matching(h, matching).perfect:
        raise AssertionError("restored matching is not perfect")
    return Solution(matching, [trace], near, red)


def find_perfect_matching(h: Hypergraph, budget: Optional[int] = None) -> Tuple[List[Edge], List[AugmentationTrace]]:
    """Perfect matching of ``h`` plus the exchange traces that produced it.

    Raises :class:`ConditionViolated` when no ordered side pair satisfies
    the degree hypothesis.
    """
    sol = solve(h, budget)
    return sol.matching, sol.traces


def verify_solution_text(h: Hypergraph, text: str) -> Tuple[bool, str]:
    """Replay a :meth:`Solution.to_text` transcript against ``h``.

    Returns ``(ok, reason)``.
    """
    strict = weak = None
    near, traces, claimed = [], [], []
    try:
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head = line.split()[0]
            if head == "REDUCE":
                fields = dict(tok.split("=") for tok in line.split()[1:])
                strict, weak = int(fields["strict"]), int(fields["weak"])
            elif head == "NEAR":
                near.append(parse_edge(line.split()[1]))
            elif head == "CASE":
                traces.append(AugmentationTrace.from_line(line))
            elif head == "PM":
                claimed.append(parse_edge(line.split()[1]))
            else:
                return False, f"unknown line {line!r}"
    except (ValueError, KeyError, IndexError) as exc:
        return False, f"unparsable transcript: {exc}"
    if strict is None or strict == weak or not (0 <= strict < h.r and 0 <= weak < h.r):
        return False, "missing or invalid REDUCE line"
    red = reduce_to_tripartite(h, strict, weak)
    current = sorted(near)
    if not validate_matching(red.image, current).valid:
        return False, "NEAR edges are not a matching of the reduced hypergraph"
    for t in traces:
        if any(e not in red.image.edge_set for e in t.added):
            return False, f"{t.case} adds a non-edge"
        try:
            nxt = t.replay(current)
        except InvalidMatching as exc:
            return False, str(exc)
        if len(nxt) != len(current) + 1 or not validate_matching(red.image, nxt).valid:
            return False, f"{t.case} does not grow the matching by one"
        current = nxt
    try:
        restored = red.restore(current)
    except InvalidMatching as exc:
        return False, str(exc)
    if not validate_matching(h, restored).perfect:
        return False, "replayed matching is not perfect"
    if sorted(claimed) != restored:
        return False, "replayed matching differs from the PM lines"
    return True, "ok"
