"""Degree-hypothesis checkers with violation witnesses.

Every threshold of the form ``n/2`` is compared in integers (``2*d`` against
``n``) or with :class:`fractions.Fraction`, so instances sitting exactly on the
threshold are classified correctly.  The one exception is the Kühn-Osthus
bound, which involves a square root and a logarithm.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .errors import InvalidSides, InvalidSubset, UnsupportedArity
from .hypergraph import Hypergraph, PartialTuple, enumerate_legal_tuples

MAIN = "main"
KO = "ko"
ITUPLE = "ituple"
FRACTIONAL = "fractional"
VERTEX = "vertex"
LATIN = "latin"

# 555/878 - (1 - 1/e) ~ -2.1e-6
DEFAULT_VERTEX_FRACTION = Fraction(555, 878)

MAX_REPORTED_VIOLATIONS = 20


@dataclass(frozen=True)
class Violation:
    tuple: PartialTuple
    degree: int
    cmp: str
    bound: Fraction
    note: str = ""

    def __str__(self) -> str:
        line = f"VIOLATION {self.tuple} d={self.degree} need{self.cmp}{_fmt(self.bound)}"
        return f"{line} {self.note}" if self.note else line


@dataclass
class ConditionReport:
    condition_name: str
    violations: List[Violation] = field(default_factory=list)
    normalized_degrees: Optional[Tuple[Fraction, Fraction]] = None
    metadata: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.holds

    def to_text(self, limit: int = MAX_REPORTED_VIOLATIONS) -> str:
        lines = [f"CONDITION {self.condition_name} {'HOLDS' if self.holds else 'FAILS'}"]
        lines.extend(str(v) for v in self.violations[:limit])
        if self.violations:
            lines.append(f"TOTAL {len(self.violations)}")
        if self.normalized_degrees is not None:
            theta, zeta = self.normalized_degrees
            lines.append(f"WORST theta={_fmt(theta)} zeta={_fmt(zeta)}")
        for key in sorted(self.metadata):
            lines.append(f"META {key}={self.metadata[key]}")
        return "\n".join(lines) + "\n"


def _fmt(q) -> str:
    if isinstance(q, Fraction):
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return repr(q)


def _complement(h: Hypergraph, sides: Iterable[int]) -> Tuple[int, ...]:
    sides = set(sides)
    return tuple(s for s in range(h.r) if s not in sides)


def _check_subset(h: Hypergraph, subset) -> Tuple[int, ...]:
    subset = tuple(sorted(set(int(s) for s in subset)))
    if any(not 0 <= s < h.r for s in subset):
        raise InvalidSubset(f"{subset} is not a subset of the sides [0, {h.r})")
    if not subset or len(subset) == h.r:
        raise InvalidSubset("the side subset must be non-empty and proper")
    return subset


def _scan(h, sides, predicate, cmp, bound, out):
    for f in enumerate_legal_tuples(h, sides):
        d = h.degree(f)
        if not predicate(d):
            out.append(Violation(f, d, cmp, bound))


def check_main_condition(h: Hypergraph, strict_side: int = 0, weak_side: Optional[int] = None) -> ConditionReport:
    """``d(f) > n/2`` off ``strict_side`` and ``d(g) >= n/2`` off ``weak_side``."""
    if weak_side is None:
        weak_side = h.r - 1
    for s in (strict_side, weak_side):
        if not 0 <= s < h.r:
            raise InvalidSides(f"side {s} outside [0, {h.r})")
    if strict_side == weak_side:
        raise InvalidSides("strict and weak sides must differ")
    n = h.n
    half = Fraction(n, 2)
    report = ConditionReport(MAIN, metadata={"strict_side": strict_side, "weak_side": weak_side})
    _scan(h, _complement(h, [strict_side]), lambda d: 2 * d > n, ">", half, report.violations)
    _scan(h, _complement(h, [weak_side]), lambda d: 2 * d >= n, ">=", half, report.violations)
    return report


def min_degree_avoiding(h: Hypergraph, side: int) -> int:
    """Least degree of a legal (r-1)-tuple that avoids ``side``."""
    sides = _complement(h, [side])
    proj = h._projection(sides)
    if len(proj) < h.n ** len(sides):
        return 0
    return min(proj.values())


def admissible_side_pairs(h: Hypergraph):
    """Ordered ``(strict, weak)`` pairs, in lexicographic order, for which the main condition holds."""
    mins = [min_degree_avoiding(h, s) for s in range(h.r)]
    for a in range(h.r):
        for b in range(h.r):
            if a != b and 2 * mins[a] > h.n and 2 * mins[b] >= h.n:
                yield a, b


def ko_threshold(n: int) -> float:
    """``n/2 + sqrt(2 n ln n)``; natural logarithm."""
    return n / 2 + math.sqrt(2 * n * math.log(n))


def check_ko_threshold(h: Hypergraph) -> ConditionReport:
    """Every legal (r-1)-tuple has degree at least the Kühn-Osthus bound.

    Degrees within one ulp of the floating-point threshold are listed under
    the ``guard_band`` metadata key so callers can treat them as undecided.
    """
    threshold = ko_threshold(h.n)
    ulp = math.ulp(threshold)
    report = ConditionReport(KO, metadata={"log": "natural", "threshold": repr(threshold)})
    near = []
    for missing in range(h.r):
        for f in enumerate_legal_tuples(h, _complement(h, [missing])):
            d = h.degree(f)
            if abs(d - threshold) <= ulp:
                near.append(str(f))
            if d < threshold:
                report.violations.append(Violation(f, d, ">=", Fraction(threshold)))
    report.metadata["guard_band"] = len(near)
    return report


def check_itupl_condition(h: Hypergraph, subset) -> ConditionReport:
    """``I``-tuples above half their complete degree, ``I^c``-tuples at least half."""
    subset = _check_subset(h, subset)
    comp = _complement(h, subset)
    n, k = h.n, len(subset)
    report = ConditionReport(ITUPLE, metadata={"I": ",".join(map(str, subset))})
    strict_full = n ** (h.r - k)
    weak_full = n**k
    _scan(h, subset, lambda d: 2 * d > strict_full, ">", Fraction(strict_full, 2), report.violations)
    _scan(h, comp, lambda d: 2 * d >= weak_full, ">=", Fraction(weak_full, 2), report.violations)
    return report


def normalized_degrees(h: Hypergraph, z, subset) -> Tuple[Fraction, Fraction]:
    """``(theta, zeta)`` for the full tuple ``z``.

    ``theta = d(z|I) / n^(r-|I|)`` and ``zeta = d(z|I^c) / n^|I|``.
    """
    subset = tuple(sorted(subset))
    comp = _complement(h, subset)
    theta = Fraction(h.degree(PartialTuple.from_edge(z, subset)), h.n ** (h.r - len(subset)))
    zeta = Fraction(h.degree(PartialTuple.from_edge(z, comp)), h.n ** len(subset))
    return theta, zeta


def check_fractional_condition(h: Hypergraph, subset, strict: bool = False) -> ConditionReport:
    """``theta + zeta >= 1`` (``> 1`` if strict) at every non-edge ``z``.

    A violation lists the non-edge ``z`` itself (so its degree is 0) and
    carries ``theta + zeta`` against the bound 1 in ``note``.
    """
    subset = _check_subset(h, subset)
    report = ConditionReport(FRACTIONAL, metadata={"I": ",".join(map(str, subset)), "strict": strict})
    worst = None
    for z in itertools.product(range(h.n), repeat=h.r):
        if z in h.edge_set:
            continue
        theta, zeta = normalized_degrees(h, z, subset)
        total = theta + zeta
        if worst is None or total < worst[0]:
            worst = (total, theta, zeta, z)
        if total < 1 or (strict and total == 1):
            z_tuple = PartialTuple.from_edge(z, range(h.r))
            note = f"theta+zeta={_fmt(total)}"
            report.violations.append(Violation(z_tuple, 0, ">" if strict else ">=", Fraction(1), note))
    if worst is not None:
        report.normalized_degrees = (worst[1], worst[2])
        report.metadata["worst_z"] = ",".join(map(str, worst[3]))
    return report


def check_vertex_degree(h: Hypergraph, fraction=DEFAULT_VERTEX_FRACTION) -> ConditionReport:
    """``d(x) >= fraction * n^(r-1)`` for every vertex, compared exactly."""
    fraction = Fraction(fraction)
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    bound = fraction * h.n ** (h.r - 1)
    report = ConditionReport(VERTEX, metadata={"fraction": _fmt(fraction)})
    for s in range(h.r):
        _scan(h, [s], lambda d: d >= bound, ">=", bound, report.violations)
    return report


def check_latin_property(h: Hypergraph) -> ConditionReport:
    """Every legal pair of a 3-partite hypergraph lies in exactly one edge."""
    if h.r != 3:
        raise UnsupportedArity(f"the Latin property needs r = 3, got r = {h.r}")
    report = ConditionReport(LATIN)
    for pair in ((0, 1), (0, 2), (1, 2)):
        _scan(h, pair, lambda d: d == 1, "==", Fraction(1), report.violations)
    return report
