"""Hand-built malformed inputs with their expected diagnostics.

Binary offsets count from the start of the file. The icosahedron encoding
used as a base is: 15 header bytes, the vertex count at byte 15, then six
bytes per vertex (five neighbours and a 0), so vertex ``i`` (1-based)
starts at byte ``16 + 6 * (i - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from minorstars.formats import HEADER, encode_planar_code, encode_text
from minorstars.generate import icosahedron


@dataclass(frozen=True)
class Case:
    name: str
    data: bytes
    reason: str  # fragment of the diagnostic
    graph: int | None
    offset: int | None = None
    line: int | None = None


ICOSA = encode_planar_code([icosahedron()])
ICOSA_TEXT = encode_text(icosahedron())


def _patch(data: bytes, at: int, value: int) -> bytes:
    b = bytearray(data)
    b[at] = value
    return bytes(b)


def _v(i: int) -> int:
    return 16 + 6 * (i - 1)


def _raw(*graphs: list[list[int]]) -> bytes:
    out = bytearray(HEADER)
    for rot in graphs:
        out.append(len(rot))
        for r in rot:
            out.extend(r)
            out.append(0)
    return bytes(out)


K7_TORUS = [[(i + d) % 7 + 1 for d in (1, 3, 2, 6, 4, 5)] for i in range(7)]


def _text_lines(lines: list[str]) -> bytes:
    return ("\n".join(lines) + "\n").encode()


_ICOSA_LINES = ICOSA_TEXT.splitlines()


def _text_with(idx: int, line: str) -> bytes:
    lines = list(_ICOSA_LINES)
    lines[idx] = line
    return _text_lines(lines)


CASES: list[Case] = [
    Case("bad header", b">>planar_cod<<" + ICOSA[15:], "header", None, 0),
    Case("truncated inside vertex 5", ICOSA[:_v(5) + 2], "truncated", 1, _v(5) + 2),
    Case("truncated after vertex count", ICOSA[:16], "truncated", 1, 16),
    Case("neighbor out of range", _patch(ICOSA, _v(1), 13), "out of range", 1, _v(1)),
    Case("multi-byte marker n=0", HEADER + b"\x00", "multi-byte", 1, 15),
    Case("loop", _patch(ICOSA, _v(1), 1), "loop", 1, _v(1)),
    Case("duplicate neighbor", _patch(ICOSA, _v(1) + 1, 2), "duplicate", 1, _v(1) + 1),
    Case("asymmetric adjacency", _patch(ICOSA, _v(1), 7), "asymmetric", 1, _v(1)),
    Case("isolated vertex", _raw([[2, 3], [3, 1], [1, 2], []]), "isolated", 1, 15 + 10),
    Case("disconnected", _raw([[2, 3], [3, 1], [1, 2], [5, 6], [6, 4], [4, 5]]), "connected", 1, 15),
    Case("genus one (K7 on the torus)", _raw(K7_TORUS), "genus", 1, 15),
    Case("swapped rotation entries", _patch(_patch(ICOSA, _v(1), 3), _v(1) + 1, 2), "genus", 1, 15),
    Case("two vertices only", _raw([[2], [1]]), "at least 3", 1, 15),
    Case("second graph corrupted", ICOSA + _patch(ICOSA, _v(3), 3)[15:], "loop", 2, len(ICOSA) + _v(3) - 15),
    Case("text: missing colon", _text_with(3, "3 1 7 8 4"), "missing ':'", 1, line=4),
    Case("text: non-integer token", _text_with(2, "2: 1 6 x 7 3"), "non-integer", 1, line=3),
    Case("text: too few rotation lines", _text_lines(_ICOSA_LINES[:-1]), "expected 12 rotation lines", 1, line=12),
    Case("text: repeated neighbor", _text_with(1, "1: 2 3 4 5 5"), "duplicate", 1, line=2),
    Case("text: neighbor out of range", _text_with(12, "12: 7 11 10 9 40"), "out of range", 1, line=13),
    Case("text: vertex labels out of order", _text_with(5, "7: 1 5 11 7 3"), "expected vertex 5", 1, line=6),
]
