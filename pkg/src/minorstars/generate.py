"""Seeded random triangulations with minimum degree five.

Graphs grow from the icosahedron by vertex splits and are mixed by edge
flips. The icosahedron itself admits neither move (every vertex has degree
5 and there is no 13-vertex triangulation with minimum degree 5), so a third
move, :func:`try_expand`, adds two vertices at once: split an edge end into
a 4-vertex, split the other end, and repair the one remaining 4-vertex with
a flip.

Randomness: one ``numpy`` PCG64 stream per graph, seeded with
``SeedSequence([seed, index])``.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .planegraph import PlaneGraph, check_embedding

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy PCG64, SeedSequence([seed, graph_index])"

Rotation = list[list[int]]


@functools.cache
def icosahedron() -> PlaneGraph:
    # two poles (0, 11), an upper ring 1..5 and a lower ring 6..10
    rot = [
        [1, 2, 3, 4, 5],
        [0, 5, 10, 6, 2],
        [0, 1, 6, 7, 3],
        [0, 2, 7, 8, 4],
        [0, 3, 8, 9, 5],
        [0, 4, 9, 10, 1],
        [1, 10, 11, 7, 2],
        [2, 6, 11, 8, 3],
        [3, 7, 11, 9, 4],
        [4, 8, 11, 10, 5],
        [5, 9, 11, 6, 1],
        [6, 10, 9, 8, 7],
    ]
    return PlaneGraph.from_rotation(rot)


@dataclass(frozen=True)
class GenConfig:
    seed: int = 1
    count: int = 100
    min_n: int = 12
    max_n: int = 50
    flip_fraction: float = 0.5

    def __post_init__(self):
        if self.min_n < 12:
            raise ValueError("min_n must be at least 12")
        if self.max_n < self.min_n:
            raise ValueError("max_n must be >= min_n")
        if self.max_n > 255:
            raise ValueError("max_n must be <= 255 (1-byte planar_code)")
        if not 0.0 <= self.flip_fraction <= 1.0:
            raise ValueError("flip_fraction must lie in [0, 1]")
        if self.count < 0:
            raise ValueError("count must be non-negative")


# -- in-place moves on mutable rotations ---------------------------------

def _flip(rot: Rotation, u: int, v: int, min_deg: int = 5) -> bool:
    """Replace edge uv by the other diagonal of its two triangles, if allowed."""
    ru = rot[u]
    du = len(ru)
    i = ru.index(v)
    x, y = ru[(i + 1) % du], ru[(i - 1) % du]
    if x == y or y in rot[x]:
        return False
    if du - 1 < min_deg or len(rot[v]) - 1 < min_deg:
        return False
    ru.pop(i)
    rot[v].remove(u)
    for a, b in ((x, y), (y, x)):
        ra = rot[a]
        pu, pv = ra.index(u), ra.index(v)
        da = len(ra)
        at = pu + 1 if ra[(pu + 1) % da] == v else pv + 1
        ra.insert(at, b)
    return True


def _replace_with_pair(ra: list[int], old: int, inner: int, first: int, second: int) -> None:
    """Replace ``old`` by ``first, second`` where ``first`` sits next to ``inner``."""
    p = ra.index(old)
    if ra[(p - 1) % len(ra)] == inner:
        ra[p:p + 1] = [first, second]
    else:
        ra[p:p + 1] = [second, first]


def _split(rot: Rotation, v: int, start: int, length: int) -> int:
    """Split ``v``: it keeps the arc of ``length + 1`` neighbours from ``start``.

    The new vertex takes the complementary arc; both arc ends become
    adjacent to both halves. Returns the new vertex.
    """
    c = rot[v]
    d = len(c)
    arc1 = [c[(start + k) % d] for k in range(length + 1)]
    arc2 = [c[(start + length + k) % d] for k in range(d - length + 1)]
    new = len(rot)
    rot[v] = arc1 + [new]
    rot.append(arc2 + [v])
    for u in arc2[1:-1]:
        ru = rot[u]
        ru[ru.index(v)] = new
    a, b = arc1[0], arc1[-1]
    _replace_with_pair(rot[a], v, arc1[1], v, new)
    _replace_with_pair(rot[b], v, arc1[-2], v, new)
    return new


def _split_ok(d: int, length: int) -> bool:
    return length + 2 >= 5 and d - length + 2 >= 5


def _freeze(rot: Rotation) -> PlaneGraph:
    return PlaneGraph(tuple(tuple(r) for r in rot))


def _thaw(g: PlaneGraph) -> Rotation:
    return [list(r) for r in g.rotation]


# -- public guarded moves --------------------------------------------------

def try_flip(g: PlaneGraph, edge: tuple[int, int]) -> PlaneGraph | None:
    """Flip ``edge`` if the result stays simple with minimum degree 5."""
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"{u + 1}-{v + 1} is not an edge")
    rot = _thaw(g)
    return _freeze(rot) if _flip(rot, u, v) else None


def try_split(g: PlaneGraph, vertex: int, cut: tuple[int, int]) -> PlaneGraph | None:
    """Split ``vertex`` along neighbours ``cut = (a, b)``.

    ``vertex`` keeps the neighbours from ``a`` to ``b`` in rotation order;
    the new vertex ``n`` gets those from ``b`` back to ``a``. Returns ``None``
    unless both halves end with degree >= 5.
    """
    a, b = cut
    if a == b:
        return None
    d = g.degree(vertex)
    i, j = g.position(vertex, a), g.position(vertex, b)
    length = (j - i) % d
    if not _split_ok(d, length):
        return None
    rot = _thaw(g)
    _split(rot, vertex, i, length)
    return _freeze(rot)


def _expand(rot: Rotation, u: int, v: int, length: int, order: list[int]) -> bool:
    ru = rot[u]
    du = len(ru)
    i = ru.index(v)
    _split(rot, u, (i - 1) % du, 2)  # u keeps (x, v, y) plus the new vertex
    rv = rot[v]
    dv = len(rv)
    if not 2 <= length <= dv - 2:
        return False
    _split(rot, v, rv.index(u), length)
    low = [t for t in range(len(rot)) if len(rot[t]) < 5]
    if not low:
        return True
    if len(low) != 1 or len(rot[low[0]]) != 4:
        return False
    t = low[0]
    link = rot[t]
    for k in order:
        a, b = link[k % 4], link[(k + 1) % 4]
        if _flip(rot, a, b):
            if min(len(r) for r in rot) >= 5:
                return True
            return False
    return False


def try_expand(g: PlaneGraph, edge: tuple[int, int], length: int, flip_order=(0, 1, 2, 3)) -> PlaneGraph | None:
    """Grow by two vertices around ``edge``; ``None`` if degrees cannot be kept >= 5."""
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"{u + 1}-{v + 1} is not an edge")
    rot = _thaw(g)
    return _freeze(rot) if _expand(rot, u, v, length, list(flip_order)) else None


# -- random walk -----------------------------------------------------------

def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def _random_flip(rot: Rotation, rng: np.random.Generator) -> bool:
    n = len(rot)
    if rng.random() < 0.5:
        # grow a high-degree vertex: flip the edge opposite to it in one of its faces
        deg = np.fromiter(map(len, rot), dtype=np.float64, count=n)
        weights = (deg - 4.0) ** 3
        h = int(rng.choice(n, p=weights / weights.sum()))
        rh = rot[h]
        k = int(rng.integers(len(rh)))
        a, b = rh[k], rh[(k + 1) % len(rh)]
    else:
        a = int(rng.integers(n))
        b = rot[a][int(rng.integers(len(rot[a])))]
    return _flip(rot, a, b)


def _random_growth(rot: Rotation, rng: np.random.Generator, room: int) -> bool:
    n = len(rot)
    big = [v for v in range(n) if len(rot[v]) >= 6]
    if big and (room < 2 or rng.random() < 0.85):
        v = big[int(rng.integers(len(big)))]
        d = len(rot[v])
        length = int(rng.integers(3, d - 2))
        if rng.random() < 0.5:
            # an arc end gains an edge; anchoring at the largest neighbour grows hubs
            r = rot[v]
            start = max(range(d), key=lambda i: (len(rot[r[i]]), -i))
        else:
            start = int(rng.integers(d))
        _split(rot, v, start, length)
        return True
    if room < 2:
        return False
    u = int(rng.integers(n))
    v = rot[u][int(rng.integers(len(rot[u])))]
    trial = [list(r) for r in rot]
    dv = len(rot[v])
    length = int(rng.integers(2, dv - 1))
    order = [int(x) for x in rng.permutation(4)]
    if _expand(trial, u, v, length, order):
        rot[:] = trial
        return True
    return False


def random_triangulation(seed: int, index: int, config: GenConfig) -> PlaneGraph | None:
    """One walk of the corpus; ``None`` if it got stuck below the target size."""
    rng = _rng(seed, index)
    target = int(rng.integers(config.min_n, config.max_n + 1))
    rot = _thaw(icosahedron())
    budget = 60 * config.max_n
    f = config.flip_fraction
    while len(rot) < target and budget > 0:
        budget -= 1
        if rng.random() < f:
            _random_flip(rot, rng)
        else:
            _random_growth(rot, rng, config.max_n - len(rot))
    if len(rot) < target:
        return None
    for _ in range(int(round(f * 2 * len(rot)))):
        _random_flip(rot, rng)
    g = _freeze(rot)
    check_embedding(g)
    return g


class Corpus:
    """Iterable over the graphs of a :class:`GenConfig`; counts stuck walks."""

    def __init__(self, config: GenConfig):
        self.config = config
        self.stuck = 0

    def __iter__(self) -> Iterator[PlaneGraph]:
        self.stuck = 0
        for i in range(self.config.count):
            g = random_triangulation(self.config.seed, i, self.config)
            if g is None:
                self.stuck += 1
                continue
            yield g
        if self.stuck:
            log.warning("%d of %d walks got stuck and were skipped", self.stuck, self.config.count)


def corpus(config: GenConfig) -> Iterator[PlaneGraph]:
    return iter(Corpus(config))
