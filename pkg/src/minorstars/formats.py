"""Readers and writers for planar_code (1-byte variant) and a plain text format.

planar_code: optional header ``>>planar_code<<``, then per graph one byte
``n`` followed, for every vertex, by its neighbours (1-based, in embedding
order) and a terminating ``0`` byte.

Text: first line ``n``, then ``n`` lines ``i: a b c ...`` with the rotation of
vertex ``i``. Several graphs may be separated by blank lines.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .planegraph import EmbeddingError, PlaneGraph, check_embedding

HEADER = b">>planar_code<<"
_HEADERS = (HEADER, b">>planar_code le<<", b">>planar_code be<<")


class GraphFormatError(ValueError):
    """Malformed or invalid graph input.

    ``graph`` is the 1-based graph index within the input (``None`` for
    header problems). For binary input ``offset`` is a byte offset; for text
    input ``line`` is a 1-based line number.
    """

    def __init__(self, message: str, graph: int | None = None, offset: int | None = None,
                 line: int | None = None, source: str | None = None):
        self.reason = message
        self.graph = graph
        self.offset = offset
        self.line = line
        self.source = source
        super().__init__(self._render())

    def _render(self) -> str:
        parts = []
        if self.source:
            parts.append(self.source)
        if self.graph is not None:
            parts.append(f"graph {self.graph}")
        if self.offset is not None:
            parts.append(f"byte {self.offset}")
        if self.line is not None:
            parts.append(f"line {self.line}")
        parts.append(self.reason)
        return ": ".join(parts)

    def with_source(self, source: str) -> "GraphFormatError":
        return GraphFormatError(self.reason, self.graph, self.offset, self.line, source)


@dataclass(frozen=True)
class GraphRecord:
    """One graph read from an input, or the error that prevented reading it."""

    source: str
    index: int
    graph: PlaneGraph | None = None
    error: GraphFormatError | None = None

    @property
    def ident(self) -> str:
        return f"{self.source}#{self.index}"


def _header_length(data: bytes) -> int:
    if not data.startswith(b">>"):
        return 0
    for h in _HEADERS:
        if data.startswith(h):
            return len(h)
    end = data.find(b"<<")
    raise GraphFormatError(f"unrecognized header {data[: end + 2 if end >= 0 else 20]!r}", offset=0)


def _build(rotation: list[list[int]], offsets: list[list[int]], graph: int, start: int) -> PlaneGraph:
    g = PlaneGraph(tuple(tuple(x - 1 for x in r) for r in rotation))
    try:
        check_embedding(g)
    except EmbeddingError as exc:
        loc = start
        if exc.vertex is not None:
            row = offsets[exc.vertex]
            loc = row[exc.neighbor_pos] if exc.neighbor_pos is not None else row[-1]
        where = f"vertex {exc.vertex + 1}: " if exc.vertex is not None else ""
        raise GraphFormatError(where + str(exc), graph, loc) from None
    return g


def iter_planar_code(data: bytes) -> Iterator[PlaneGraph | GraphFormatError]:
    """Yield graphs in order; structural errors are yielded, framing errors end the stream.

    A graph whose bytes are well framed but describe an invalid embedding is
    yielded as a :class:`GraphFormatError` so that callers may continue with
    the next graph. Truncation and out-of-range bytes make the rest of the
    stream unreadable and are yielded last.
    """
    try:
        pos = _header_length(data)
    except GraphFormatError as exc:
        yield exc
        return
    index = 0
    size = len(data)
    while pos < size:
        index += 1
        start = pos
        n = data[pos]
        pos += 1
        if n == 0:
            yield GraphFormatError("multi-byte planar_code (n >= 256) is not supported", index, start)
            return
        rotation: list[list[int]] = []
        offsets: list[list[int]] = []
        for v in range(n):
            row: list[int] = []
            row_off: list[int] = []
            while True:
                if pos >= size:
                    yield GraphFormatError(
                        f"truncated: stream ends inside the neighbor list of vertex {v + 1} of {n}",
                        index, pos)
                    return
                b = data[pos]
                if b == 0:
                    row_off.append(pos)
                    pos += 1
                    break
                if b > n:
                    yield GraphFormatError(f"vertex {v + 1}: neighbor index {b} out of range 1..{n}", index, pos)
                    return
                row.append(b)
                row_off.append(pos)
                pos += 1
            rotation.append(row)
            offsets.append(row_off)
        try:
            yield _build(rotation, offsets, index, start)
        except GraphFormatError as exc:
            yield exc


def parse_planar_code(data: bytes) -> list[PlaneGraph]:
    """Decode every graph; raise the first :class:`GraphFormatError`."""
    out = []
    for item in iter_planar_code(data):
        if isinstance(item, GraphFormatError):
            raise item
        out.append(item)
    return out


def encode_planar_code(graphs: Iterable[PlaneGraph], *, header: bool = True) -> bytes:
    buf = bytearray(HEADER if header else b"")
    for i, g in enumerate(graphs, 1):
        if g.n > 255:
            raise ValueError(f"graph {i}: {g.n} vertices do not fit 1-byte planar_code")
        buf.append(g.n)
        for r in g.rotation:
            buf.extend(u + 1 for u in r)
            buf.append(0)
    return bytes(buf)


def encode_text(g: PlaneGraph) -> str:
    lines = [str(g.n)]
    lines += [f"{v + 1}: " + " ".join(str(u + 1) for u in r) for v, r in enumerate(g.rotation)]
    return "\n".join(lines) + "\n"


def encode_text_many(graphs: Iterable[PlaneGraph]) -> str:
    return "\n".join(encode_text(g) for g in graphs)


def _parse_text_block(lines: list[tuple[int, str]], graph: int) -> PlaneGraph:
    first_no, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise GraphFormatError(f"expected vertex count, got {first!r}", graph, line=first_no) from None
    if n < 1:
        raise GraphFormatError(f"vertex count must be positive, got {n}", graph, line=first_no)
    body = lines[1:]
    if len(body) != n:
        raise GraphFormatError(f"expected {n} rotation lines, got {len(body)}", graph,
                               line=(body[-1][0] if body else first_no))
    rotation: list[list[int]] = []
    for expected, (no, text) in enumerate(body, 1):
        label, sep, rest = text.partition(":")
        if not sep:
            raise GraphFormatError(f"missing ':' in {text!r}", graph, line=no)
        try:
            i = int(label)
            nbrs = [int(tok) for tok in rest.split()]
        except ValueError:
            raise GraphFormatError(f"non-integer token in {text!r}", graph, line=no) from None
        if i != expected:
            raise GraphFormatError(f"expected vertex {expected}, got {i}", graph, line=no)
        for u in nbrs:
            if not 1 <= u <= n:
                raise GraphFormatError(f"vertex {i}: neighbor index {u} out of range 1..{n}", graph, line=no)
        rotation.append(nbrs)
    g = PlaneGraph(tuple(tuple(u - 1 for u in r) for r in rotation))
    try:
        check_embedding(g)
    except EmbeddingError as exc:
        no = body[exc.vertex][0] if exc.vertex is not None else first_no
        where = f"vertex {exc.vertex + 1}: " if exc.vertex is not None else ""
        raise GraphFormatError(where + str(exc), graph, line=no) from None
    return g


def _text_blocks(text: str) -> Iterator[list[tuple[int, str]]]:
    block: list[tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            block.append((no, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


def iter_text(text: str) -> Iterator[PlaneGraph | GraphFormatError]:
    for index, block in enumerate(_text_blocks(text), 1):
        try:
            yield _parse_text_block(block, index)
        except GraphFormatError as exc:
            yield exc


def parse_text(text: str) -> PlaneGraph:
    """Parse exactly one graph in the text format."""
    blocks = list(_text_blocks(text))
    if len(blocks) != 1:
        raise GraphFormatError(f"expected one graph, found {len(blocks)}")
    return _parse_text_block(blocks[0], 1)


def parse_text_many(text: str) -> list[PlaneGraph]:
    out = []
    for item in iter_text(text):
        if isinstance(item, GraphFormatError):
            raise item
        out.append(item)
    return out


def looks_like_text(data: bytes) -> bool:
    if data.startswith(b">>"):
        return False
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        return False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.isdigit()
    return False


def read_records(path: str | os.PathLike[str]) -> Iterator[GraphRecord]:
    """Read a planar_code or text file graph by graph, auto-detecting the format."""
    source = os.fspath(path)
    with open(source, "rb") as fh:
        data = fh.read()
    items = iter_text(data.decode("ascii")) if looks_like_text(data) else iter_planar_code(data)
    for index, item in enumerate(items, 1):
        if isinstance(item, GraphFormatError):
            yield GraphRecord(source, item.graph or index, error=item.with_source(source))
        else:
            yield GraphRecord(source, index, graph=item)


def write_planar_code(path: str | os.PathLike[str], graphs: Iterable[PlaneGraph]) -> int:
    graphs = list(graphs)
    with open(path, "wb") as fh:
        fh.write(encode_planar_code(graphs))
    return len(graphs)
