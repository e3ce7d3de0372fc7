"""Star patterns, 5-neighbour classes, and minor star matching.

Cyclic patterns ``<k1,...,k5>`` bound the degrees of the five neighbours of
a 5-vertex in cyclic order; they match up to rotation and reflection.
Unordered patterns ``(k1,...,kk)`` bound the degrees of some ``k``
neighbours in any order. An unbounded entry is ``math.inf`` and is written
``*`` in pattern files.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations, permutations
from typing import Iterable, Literal, Sequence, Union

from .planegraph import PlaneGraph

INF = math.inf
Bound = Union[int, float]

Orientation = Literal["forward", "reflected"]


class PatternError(ValueError):
    pass


def _format_bound(b: Bound) -> str:
    return "*" if b == INF else str(int(b))


@dataclass(frozen=True)
class CyclicPattern:
    bounds: tuple[Bound, ...]

    def __post_init__(self):
        if len(self.bounds) != 5:
            raise PatternError(f"cyclic pattern needs 5 bounds, got {len(self.bounds)}")
        for b in self.bounds:
            if b != INF and (not float(b).is_integer() or b < 5):
                raise PatternError(f"bound {b} is not an integer >= 5")

    def __str__(self) -> str:
        return "<" + ",".join(_format_bound(b) for b in self.bounds) + ">"

    def reflected(self) -> "CyclicPattern":
        return CyclicPattern((self.bounds[0],) + tuple(reversed(self.bounds[1:])))

    def max_weight(self) -> Bound:
        """Largest weight of a minor 5-star matching this pattern."""
        return 5 + sum(self.bounds)

    def max_height(self) -> Bound:
        return max(self.bounds)


@dataclass(frozen=True)
class UnorderedPattern:
    bounds: tuple[Bound, ...]

    def __post_init__(self):
        if not 1 <= len(self.bounds) <= 5:
            raise PatternError(f"unordered pattern needs 1..5 bounds, got {len(self.bounds)}")
        for b in self.bounds:
            if b != INF and (not float(b).is_integer() or b < 1):
                raise PatternError(f"bound {b} is not a positive integer")

    @property
    def k(self) -> int:
        return len(self.bounds)

    def __str__(self) -> str:
        return "(" + ",".join(_format_bound(b) for b in self.bounds) + ")"


@dataclass(frozen=True)
class StarMatch:
    """A concrete minor star: ``leaves[j]`` is the neighbour aligned with bound ``j``."""

    center: int
    leaves: tuple[int, ...]
    pattern: CyclicPattern
    orientation: Orientation
    offset: int
    weight: int
    height: int
    list_index: int | None = field(default=None, compare=False)

    def describe(self) -> str:
        where = f" (#{self.list_index})" if self.list_index is not None else ""
        leaves = " ".join(str(v + 1) for v in self.leaves)
        return (f"{self.pattern}{where} at vertex {self.center + 1} leaves [{leaves}] "
                f"{self.orientation} offset {self.offset} weight {self.weight} height {self.height}")


class NeighborClass(enum.Flag):
    """Classes of a 5-neighbour ``v_i`` of a vertex ``v``.

    strong: the two flanking neighbours ``v_{i-1}``, ``v_{i+1}`` are 6+.
    weak: ``v_{i-1}``, ``v_i``, ``v_{i+1}`` are all 5-vertices.
    twice-weak: ``v_{i-2}`` .. ``v_{i+2}`` are all 5-vertices.
    A 6+-neighbour has no flags.
    """

    NONE = 0
    STRONG = enum.auto()
    NON_STRONG = enum.auto()
    WEAK = enum.auto()
    TWICE_WEAK = enum.auto()


def classify_neighbor(g: PlaneGraph, v: int, i: int) -> NeighborClass:
    rot = g.rotation[v]
    k = len(rot)
    if not 0 <= i < k:
        raise IndexError(f"position {i} out of range for vertex {v + 1} of degree {k}")
    deg = g.degrees
    if deg[rot[i]] != 5:
        return NeighborClass.NONE
    five = [deg[rot[(i + j) % k]] == 5 for j in (-2, -1, 0, 1, 2)]
    if not five[1] and not five[3]:
        return NeighborClass.STRONG
    flags = NeighborClass.NON_STRONG
    if five[1] and five[3]:
        flags |= NeighborClass.WEAK
        if five[0] and five[4]:
            flags |= NeighborClass.TWICE_WEAK
    return flags


def _alignments(rot: Sequence[int]):
    for r in range(5):
        yield r, "forward", tuple(rot[(r + j) % 5] for j in range(5))
        yield r, "reflected", tuple(rot[(r - j) % 5] for j in range(5))


def match_cyclic(g: PlaneGraph, v: int, p: CyclicPattern) -> list[StarMatch]:
    """Every alignment of the neighbours of the 5-vertex ``v`` that fits ``p``.

    Order: offset ascending, forward before reflected.
    """
    rot = g.rotation[v]
    if len(rot) != 5:
        return []
    deg = g.degrees
    out = []
    for r, orient, leaves in _alignments(rot):
        if all(deg[u] <= b for u, b in zip(leaves, p.bounds)):
            ds = [deg[u] for u in leaves]
            out.append(StarMatch(v, leaves, p, orient, r, 5 + sum(ds), max(5, *ds)))
    return out


def _degree_alignments(g: PlaneGraph, v: int) -> list[tuple[int, ...]]:
    deg = g.degrees
    return [tuple(deg[u] for u in leaves) for _, _, leaves in _alignments(g.rotation[v])]


def _fits(aligned: list[tuple[int, ...]], bounds: tuple[Bound, ...]) -> bool:
    b0, b1, b2, b3, b4 = bounds
    return any(d0 <= b0 and d1 <= b1 and d2 <= b2 and d3 <= b3 and d4 <= b4
               for d0, d1, d2, d3, d4 in aligned)


def _five_vertex_alignments(g: PlaneGraph) -> list[tuple[int, list[tuple[int, ...]]]]:
    # graphs are immutable; memoize in the instance dict like functools.cached_property
    cached = g.__dict__.get("_five_alignments")
    if cached is None:
        cached = [(v, _degree_alignments(g, v)) for v in range(g.n) if g.degrees[v] == 5]
        g.__dict__["_five_alignments"] = cached
    return cached


def find_listed_star(g: PlaneGraph, patterns: Sequence[CyclicPattern]) -> StarMatch | None:
    """First match scanning patterns in list order, then vertices, then alignments."""
    if g.min_degree < 5:
        raise ValueError(f"minimum degree is {g.min_degree}, expected at least 5")
    fives = _five_vertex_alignments(g)
    for idx, p in enumerate(patterns, 1):
        for v, aligned in fives:
            if _fits(aligned, p.bounds):
                m = match_cyclic(g, v, p)[0]
                return StarMatch(m.center, m.leaves, m.pattern, m.orientation, m.offset,
                                 m.weight, m.height, idx)
    return None


def listed_star_centers(g: PlaneGraph, patterns: Sequence[CyclicPattern]) -> set[int]:
    """Centers of all 5-vertices that carry at least one listed pattern."""
    return {v for v, aligned in _five_vertex_alignments(g) if any(_fits(aligned, p.bounds) for p in patterns)}


def has_cyclic_star(g: PlaneGraph, p: CyclicPattern) -> bool:
    return any(_fits(aligned, p.bounds) for _, aligned in _five_vertex_alignments(g))


def _sorted_bounds(p: UnorderedPattern) -> list[Bound]:
    return sorted(p.bounds)


def match_unordered(g: PlaneGraph, v: int, p: UnorderedPattern) -> bool:
    """Can ``p.k`` distinct neighbours of ``v`` be assigned to the bounds?

    Pairing the k smallest neighbour degrees with the sorted bounds is
    optimal, so this is a single elementwise comparison.
    """
    ds = sorted(g.degrees[u] for u in g.rotation[v])
    if len(ds) < p.k:
        raise ValueError(f"vertex {v + 1} has degree {len(ds)} < {p.k}")
    return all(d <= b for d, b in zip(ds, _sorted_bounds(p)))


def match_unordered_brute(degrees: Sequence[int], bounds: Sequence[Bound]) -> bool:
    """Reference check over every neighbour subset and every assignment."""
    k = len(bounds)
    for sub in combinations(degrees, k):
        for perm in permutations(sub):
            if all(d <= b for d, b in zip(perm, bounds)):
                return True
    return False


def has_minor_unordered_star(g: PlaneGraph, p: UnorderedPattern) -> int | None:
    """Lowest minor center (degree <= 5) carrying ``p``, if any."""
    for v in range(g.n):
        if p.k <= g.degrees[v] <= 5 and match_unordered(g, v, p):
            return v
    return None


def _minor_k_stars(g: PlaneGraph, k: int):
    if not 1 <= k <= 5:
        raise ValueError(f"k must be in 1..5, got {k}")
    deg = g.degrees
    for v in range(g.n):
        if k <= deg[v] <= 5:
            ds = sorted(deg[u] for u in g.rotation[v])[:k]
            yield v, deg[v] + sum(ds), max(deg[v], ds[-1])


def min_weight_minor_star(g: PlaneGraph, k: int) -> int | None:
    return min((w for _, w, _ in _minor_k_stars(g, k)), default=None)


def min_height_minor_star(g: PlaneGraph, k: int) -> int | None:
    return min((h for _, _, h in _minor_k_stars(g, k)), default=None)


def minor_star_profiles(g: PlaneGraph, k: int) -> list[tuple[int, int, int]]:
    """``(center, weight, height)`` of the lightest minor k-star at each center."""
    return list(_minor_k_stars(g, k))


_BOUND = r"\s*(\*|\d+)\s*"
_CYCLIC_RE = re.compile(r"^<(.*)>$")
_UNORDERED_RE = re.compile(r"^\((.*)\)$")


def _parse_bounds(body: str, text: str) -> tuple[Bound, ...]:
    out: list[Bound] = []
    for tok in body.split(","):
        m = re.fullmatch(_BOUND, tok)
        if not m:
            raise PatternError(f"malformed token {tok.strip()!r} in {text!r}")
        out.append(INF if m.group(1) == "*" else int(m.group(1)))
    for b in out:
        if b < 5:
            raise PatternError(f"bound {int(b)} < 5 in {text!r}")
    return tuple(out)


def parse_pattern(text: str) -> CyclicPattern | UnorderedPattern:
    s = text.strip()
    if m := _CYCLIC_RE.match(s):
        bounds = _parse_bounds(m.group(1), s)
        if len(bounds) != 5:
            raise PatternError(f"cyclic pattern {s!r} has arity {len(bounds)}, expected 5")
        return CyclicPattern(bounds)
    if m := _UNORDERED_RE.match(s):
        bounds = _parse_bounds(m.group(1), s)
        if not 1 <= len(bounds) <= 5:
            raise PatternError(f"unordered pattern {s!r} has arity {len(bounds)}, expected 1..5")
        return UnorderedPattern(bounds)
    raise PatternError(f"malformed pattern {s!r}")


def parse_pattern_list(text: str) -> list[CyclicPattern]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p = parse_pattern(line)
        except PatternError as exc:
            raise PatternError(f"line {no}: {exc}") from None
        if not isinstance(p, CyclicPattern):
            raise PatternError(f"line {no}: pattern lists hold cyclic patterns only, got {line!r}")
        out.append(p)
    return out


def format_pattern_list(patterns: Iterable[CyclicPattern]) -> str:
    return "".join(f"{p}\n" for p in patterns)


def _load_builtin(name: str) -> tuple[CyclicPattern, ...]:
    text = resources.files("minorstars").joinpath("data").joinpath(name).read_text(encoding="ascii")
    return tuple(parse_pattern_list(text))


THEOREM1 = _load_builtin("theorem1.pat")
THEOREM2 = _load_builtin("theorem2.pat")

BUILTIN_LISTS = {"thm1": THEOREM1, "thm2": THEOREM2}


def load_pattern_list(spec: str) -> tuple[CyclicPattern, ...]:
    """``thm1``/``thm2`` or a path to a pattern file."""
    if spec in BUILTIN_LISTS:
        return BUILTIN_LISTS[spec]
    with open(spec, encoding="utf-8") as fh:
        return tuple(parse_pattern_list(fh.read()))
