"""Exact maximum matching by memoized backtracking (desk-scale ground truth)."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import BudgetExhausted
from .hypergraph import Edge, Hypergraph

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    return int(os.environ.get("RMATCH_BUDGET", DEFAULT_BUDGET))


@dataclass
class OracleResult:
    max_matching_size: int
    witness: List[Edge]
    perfect_exists: bool
    nodes_explored: int = 0


class _Search:
    def __init__(self, h: Hypergraph, budget: int):
        self.h = h
        self.budget = budget
        self.nodes = 0
        self.best: List[Edge] = []
        self.edges = h.edges
        self.array = np.array(h.edges, dtype=np.int64).reshape(len(h.edges), h.r)

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(
                f"oracle budget of {self.budget} nodes exhausted", best=list(self.best), nodes=self.nodes
            )

    def pick(self, avail):
        """Available vertex with the fewest usable edges (fail first).

        Returns ``((side, index), candidate_edges)``; ties go to the lowest
        ``(side, index)``.
        """
        n = self.h.n
        flags = [np.array([mask >> v & 1 for v in range(n)], dtype=bool) for mask in avail]
        usable = np.ones(len(self.edges), dtype=bool)
        for s, f in enumerate(flags):
            usable &= f[self.array[:, s]]
        rows = self.array[usable]
        best = None
        for s, f in enumerate(flags):
            counts = np.bincount(rows[:, s], minlength=n)
            counts = np.where(f, counts, np.iinfo(np.int64).max)
            v = int(np.argmin(counts))
            if f[v] and (best is None or counts[v] < best[2]):
                best = (s, v, counts[v])
        if best is None:
            return None
        s, v, _ = best
        idx = np.flatnonzero(usable & (self.array[:, s] == v))
        return (s, v), [self.edges[i] for i in idx]


def _remove(avail, edge):
    return tuple(mask & ~(1 << edge[s]) for s, mask in enumerate(avail))


def max_matching(h: Hypergraph, budget: Optional[int] = None) -> OracleResult:
    """Maximum matching of ``h`` with a witness.

    Raises :class:`BudgetExhausted` (carrying the best matching seen) if more
    than ``budget`` search nodes are needed.
    """
    search = _Search(h, default_budget() if budget is None else budget)
    memo: Dict[tuple, List[Edge]] = {}

    def solve(avail) -> List[Edge]:
        hit = memo.get(avail)
        if hit is not None:
            return hit
        search.tick()
        ceiling = min(bin(mask).count("1") for mask in avail)
        picked = search.pick(avail) if ceiling else None
        if picked is None:
            memo[avail] = []
            return []
        (s, v), cands = picked
        best: List[Edge] = []
        for e in cands:
            sub = [e] + solve(_remove(avail, e))
            if len(sub) > len(best):
                best = sub
                if len(best) > len(search.best):
                    search.best = best
                if len(best) == ceiling:
                    break
        if len(best) < ceiling:
            skipped = tuple(mask & ~(1 << v) if t == s else mask for t, mask in enumerate(avail))
            sub = solve(skipped)
            if len(sub) > len(best):
                best = sub
        memo[avail] = best
        return best

    full = tuple((1 << h.n) - 1 for _ in range(h.r))
    witness = sorted(solve(full))
    return OracleResult(len(witness), witness, len(witness) == h.n, search.nodes)


def find_perfect(h: Hypergraph, budget: Optional[int] = None) -> Tuple[Optional[List[Edge]], int]:
    """A perfect matching or ``None``, plus the number of nodes explored."""
    search = _Search(h, default_budget() if budget is None else budget)
    dead = set()

    def solve(avail, chosen) -> Optional[List[Edge]]:
        if not avail[0]:
            return list(chosen)
        if avail in dead:
            return None
        search.tick()
        picked = search.pick(avail)
        if picked is None:
            return None
        _, cands = picked
        for e in cands:
            chosen.append(e)
            if len(chosen) > len(search.best):
                search.best = list(chosen)
            found = solve(_remove(avail, e), chosen)
            chosen.pop()
            if found is not None:
                return found
        dead.add(avail)
        return None

    full = tuple((1 << h.n) - 1 for _ in range(h.r))
    found = solve(full, [])
    return (sorted(found) if found is not None else None), search.nodes


def has_perfect_matching(h: Hypergraph, budget: Optional[int] = None) -> bool:
    """Early-exit perfect matching test; raises :class:`BudgetExhausted` when undecided."""
    found, _ = find_perfect(h, budget)
    return found is not None
