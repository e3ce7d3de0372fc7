"""Plane graphs stored as rotation systems.

A :class:`PlaneGraph` keeps, for every vertex, the cyclic order of its
neighbours in the embedding. Everything else (faces, Euler characteristic,
triangulation status) is derived from that order. Vertices are 0-based here;
the file formats in :mod:`minorstars.formats` use 1-based indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class EmbeddingError(ValueError):
    """A rotation system that is not a simple connected plane graph.

    ``vertex`` is the 0-based vertex the problem was detected at, when there
    is one; ``neighbor_pos`` is the position inside that vertex's rotation.
    """

    def __init__(self, message: str, vertex: int | None = None, neighbor_pos: int | None = None):
        super().__init__(message)
        self.vertex = vertex
        self.neighbor_pos = neighbor_pos


@dataclass(frozen=True)
class FaceSet:
    """Face boundary walks, one per face, as vertex sequences."""

    faces: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def lengths(self) -> list[int]:
        return [len(f) for f in self.faces]


@dataclass(frozen=True)
class PlaneGraph:
    """Simple connected plane graph given by its rotation system.

    Build instances through :meth:`from_rotation`, which validates. The bare
    constructor trusts its input and is meant for code that already
    guarantees the invariants.
    """

    rotation: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rotation(cls, rotation: Iterable[Iterable[int]], *, check: bool = True) -> "PlaneGraph":
        rot = tuple(tuple(int(x) for x in r) for r in rotation)
        g = cls(rot)
        if check:
            check_embedding(g)
        return g

    @property
    def n(self) -> int:
        return len(self.rotation)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rotation)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    @cached_property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    @cached_property
    def min_degree(self) -> int:
        return min(self.degrees)

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees)

    @cached_property
    def _position(self) -> tuple[dict[int, int], ...]:
        return tuple({u: i for i, u in enumerate(r)} for r in self.rotation)

    def position(self, v: int, u: int) -> int:
        """Index of ``u`` inside the rotation of ``v``."""
        return self._position[v][u]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._position[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, r in enumerate(self.rotation) for v in r if u < v]

    @cached_property
    def faces(self) -> FaceSet:
        return trace_faces(self)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.n - self.num_edges + self.num_faces


def _next_dart(g: PlaneGraph, u: int, v: int) -> tuple[int, int]:
    rv = g.rotation[v]
    return v, rv[(g.position(v, u) + 1) % len(rv)]


def trace_faces(g: PlaneGraph) -> FaceSet:
    """Trace all face boundary walks.

    The face to the side of dart ``u -> v`` continues with ``v -> w`` where
    ``w`` follows ``u`` in the rotation of ``v``. Walks are started from
    unvisited darts in increasing ``(u, v)`` order, so the result is
    deterministic and each face starts at its lowest dart.
    """
    seen: set[tuple[int, int]] = set()
    faces = []
    for u in range(g.n):
        for v in sorted(g.rotation[u]):
            if (u, v) in seen:
                continue
            walk = []
            dart = (u, v)
            while dart not in seen:
                seen.add(dart)
                walk.append(dart[0])
                dart = _next_dart(g, *dart)
            faces.append(tuple(walk))
    return FaceSet(tuple(faces))


def _components(n: int, rotation: Sequence[Sequence[int]], removed: frozenset[int] = frozenset()) -> int:
    seen = set(removed)
    count = 0
    for s in range(n):
        if s in seen:
            continue
        count += 1
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in rotation[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def check_embedding(g: PlaneGraph) -> None:
    """Raise :class:`EmbeddingError` unless ``g`` is a simple connected plane graph."""
    n = g.n
    if n < 3:
        raise EmbeddingError(f"need at least 3 vertices, got {n}")
    for v, r in enumerate(g.rotation):
        seen = set()
        for pos, u in enumerate(r):
            if not 0 <= u < n:
                raise EmbeddingError(f"neighbor {u + 1} out of range", v, pos)
            if u == v:
                raise EmbeddingError("loop", v, pos)
            if u in seen:
                raise EmbeddingError(f"duplicate neighbor {u + 1}", v, pos)
            seen.add(u)
    for v, r in enumerate(g.rotation):
        for pos, u in enumerate(r):
            if v not in g.rotation[u]:
                raise EmbeddingError(f"asymmetric adjacency: {u + 1} does not list {v + 1}", v, pos)
    for v, r in enumerate(g.rotation):
        if not r:
            raise EmbeddingError("isolated vertex", v)
    if _components(n, g.rotation) != 1:
        raise EmbeddingError("graph is disconnected")
    chi = g.euler_characteristic()
    if chi != 2:
        raise EmbeddingError(f"rotation system has genus {(2 - chi) // 2}, not 0 (V-E+F={chi})")
    short = [f for f in g.faces if len(f) < 3]
    if short:
        raise EmbeddingError(f"face of length {len(short[0])}")


def is_triangulation(g: PlaneGraph) -> bool:
    return all(len(f) == 3 for f in g.faces)


def mirror(g: PlaneGraph) -> PlaneGraph:
    """Reverse the orientation of the embedding."""
    return PlaneGraph(tuple(tuple(reversed(r)) for r in g.rotation))


def _insert_after(rot: list[int], anchor: int, item: int) -> None:
    rot.insert(rot.index(anchor) + 1, item)


def triangulate(g: PlaneGraph) -> PlaneGraph:
    """Insert diagonals into 4+-faces until every face is a triangle.

    For four consecutive boundary vertices ``w1 w2 w3 w4`` of a long face the
    chord ``w1 w3`` is inserted when absent, otherwise ``w2 w4``; in a plane
    graph the two chords cannot both exist outside the face.
    """
    if g.min_degree < 5:
        raise ValueError(f"triangulate requires minimum degree 5, got {g.min_degree}")
    current = g
    while True:
        face = next((f for f in current.faces if len(f) >= 4), None)
        if face is None:
            return current
        k = len(face)
        w0, w1, w2, w3, w4 = (face[i % k] for i in range(-1, 4))
        rot = [list(r) for r in current.rotation]
        if not current.has_edge(w1, w3) and w1 != w3:
            # corner at w1 sits between w0 and w2; corner at w3 between w2 and w4
            _insert_after(rot[w1], w0, w3)
            _insert_after(rot[w3], w2, w1)
        else:
            assert w2 != w4 and not current.has_edge(w2, w4), "both diagonals present"
            _insert_after(rot[w2], w1, w4)
            _insert_after(rot[w4], w3, w2)
        current = PlaneGraph(tuple(tuple(r) for r in rot))


def _articulation_points(n: int, adj: Sequence[Sequence[int]], removed: int) -> bool:
    """True if the graph minus ``removed`` has a cut vertex or is disconnected."""
    start = 0 if removed != 0 else 1
    disc = [-1] * n
    low = [0] * n
    disc[removed] = -2
    timer = 0
    disc[start] = low[start] = timer
    timer += 1
    root_children = 0
    stack = [(start, -1, iter(adj[start]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == removed or w == parent:
                continue
            if disc[w] == -1:
                disc[w] = low[w] = timer
                timer += 1
                stack.append((w, v, iter(adj[w])))
                advanced = True
                break
            low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            p = stack[-1][0]
            low[p] = min(low[p], low[v])
            if p == start:
                root_children += 1
            elif low[v] >= disc[p]:
                return True
    if root_children > 1:
        return True
    return any(d == -1 for d in disc)


def is_three_connected(g: PlaneGraph) -> bool:
    """True iff no pair of vertices separates the graph.

    Removes each vertex in turn and looks for an articulation point in what
    remains, which is equivalent to trying every pair.
    """
    if g.n < 4:
        raise ValueError("3-connectivity needs at least 4 vertices")
    return not any(_articulation_points(g.n, g.rotation, x) for x in range(g.n))


def canonical_code(g: PlaneGraph, *, reflections: bool = True) -> tuple[int, ...]:
    """Lexicographically least BFS code over all starting darts.

    Two plane graphs have equal codes iff they are isomorphic as embeddings
    (orientation-reversing isomorphisms included when ``reflections``).
    """
    best: tuple[int, ...] | None = None
    orientations = (1, -1) if reflections else (1,)
    for u in range(g.n):
        for first in g.rotation[u]:
            for step in orientations:
                code = _bfs_code(g, u, first, step)
                if best is None or code < best:
                    best = code
    assert best is not None
    return best


def _bfs_code(g: PlaneGraph, root: int, first: int, step: int) -> tuple[int, ...]:
    number = {root: 0}
    entry = {root: first}
    order = [root]
    queue = deque([root])
    code: list[int] = []
    while queue:
        x = queue.popleft()
        r = g.rotation[x]
        d = len(r)
        start = g.position(x, entry[x])
        for k in range(d):
            y = r[(start + step * k) % d]
            if y not in number:
                number[y] = len(order)
                entry[y] = x
                order.append(y)
                queue.append(y)
            code.append(number[y] + 1)
        code.append(0)
    return tuple(code)


def is_isomorphic(a: PlaneGraph, b: PlaneGraph) -> bool:
    if a.n != b.n or a.num_edges != b.num_edges or sorted(a.degrees) != sorted(b.degrees):
        return False
    return canonical_code(a) == canonical_code(b)


def euler_degree_sum(g: PlaneGraph) -> int:
    """Sum of (deg(v) - 6) over vertices plus (2 deg(f) - 6) over faces; always -12."""
    return sum(d - 6 for d in g.degrees) + sum(2 * len(f) - 6 for f in g.faces)
