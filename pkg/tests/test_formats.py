from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minorstars.formats import (
    HEADER,
    GraphFormatError,
    encode_planar_code,
    encode_text,
    encode_text_many,
    iter_planar_code,
    looks_like_text,
    parse_planar_code,
    parse_text,
    parse_text_many,
    read_records,
    write_planar_code,
)
from minorstars.generate import GenConfig, icosahedron, random_triangulation

from conftest import CLOSURE_COUNTS, CLOSURE_FILE
from malformed_cases import CASES, ICOSA, ICOSA_TEXT


def test_icosahedron_encoding_layout(icosa):
    data = encode_planar_code([icosa])
    assert data.startswith(HEADER)
    assert len(data) - len(HEADER) == 1 + 12 * 6
    assert data[len(HEADER)] == 12
    # vertex 1 lists 2..6 then a terminator
    assert list(data[16:22]) == [2, 3, 4, 5, 6, 0]


def test_decode_icosahedron(icosa):
    [g] = parse_planar_code(ICOSA)
    assert g == icosa
    assert (g.num_edges, g.num_faces) == (30, 20)


def test_empty_inputs():
    assert encode_planar_code([]) == HEADER
    assert parse_planar_code(HEADER) == []
    assert parse_planar_code(b"") == []


def test_headerless_and_variant_headers(icosa):
    body = encode_planar_code([icosa], header=False)
    assert parse_planar_code(body) == [icosa]
    assert parse_planar_code(b">>planar_code le<<" + body) == [icosa]


def test_encode_rejects_large_graphs():
    class Big:
        n = 256
        rotation = ()
    with pytest.raises(ValueError, match="1-byte"):
        encode_planar_code([Big()])


def test_closure_file_round_trips_byte_identically(closure_graphs):
    data = CLOSURE_FILE.read_bytes()
    assert encode_planar_code(closure_graphs) == data
    counts = {}
    for g in closure_graphs:
        counts[g.n] = counts.get(g.n, 0) + 1
    assert counts == {n: c for n, c in CLOSURE_COUNTS.items() if c}


def test_text_round_trip_matches_binary(small_corpus):
    text = encode_text_many(small_corpus)
    assert parse_text_many(text) == small_corpus
    assert parse_planar_code(encode_planar_code(small_corpus)) == small_corpus


def test_text_icosahedron(icosa):
    assert parse_text(ICOSA_TEXT) == icosa
    assert ICOSA_TEXT.splitlines()[1] == "1: 2 3 4 5 6"


def test_text_comments_and_blank_lines(icosa):
    text = "# a comment\n\n" + ICOSA_TEXT.replace("1: 2 3 4 5 6", "1: 2 3 4 5 6  # pole")
    assert parse_text(text) == icosa


def test_parse_text_wants_one_graph(icosa):
    with pytest.raises(GraphFormatError, match="one graph"):
        parse_text(encode_text_many([icosa, icosa]))


def test_format_detection(icosa):
    assert looks_like_text(ICOSA_TEXT.encode())
    assert not looks_like_text(ICOSA)
    assert not looks_like_text(encode_planar_code([icosa], header=False))


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_malformed_inputs(case, tmp_path):
    path = tmp_path / "bad.in"
    path.write_bytes(case.data)
    errors = [r.error for r in read_records(path) if r.error is not None]
    assert errors, "parser accepted a malformed file"
    err = errors[0]
    assert case.reason in err.reason
    assert (err.graph, err.offset, err.line) == (case.graph, case.offset, case.line)
    assert str(err).startswith(str(path))


def test_stream_continues_after_structural_error(icosa):
    bad = bytearray(encode_planar_code([icosa], header=False))
    bad[1] = 1  # loop at vertex 1
    data = HEADER + bytes(bad) + encode_planar_code([icosa], header=False)
    items = list(iter_planar_code(data))
    assert isinstance(items[0], GraphFormatError) and items[0].graph == 1
    assert items[1] == icosa


def test_truncation_ends_stream(icosa):
    data = ICOSA + ICOSA[15:40]
    items = list(iter_planar_code(data))
    assert items[0] == icosa
    assert isinstance(items[1], GraphFormatError) and "truncated" in items[1].reason
    assert len(items) == 2


def test_write_and_read_records(tmp_path, small_corpus):
    path = tmp_path / "c.pc"
    assert write_planar_code(path, small_corpus[:5]) == 5
    recs = list(read_records(path))
    assert [r.graph for r in recs] == small_corpus[:5]
    assert recs[2].ident == f"{path}#3"


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), index=st.integers(0, 10**3))
def test_round_trip_property(seed, index):
    g = random_triangulation(seed, index, GenConfig(min_n=12, max_n=60))
    assert parse_planar_code(encode_planar_code([g])) == [g]
    assert parse_text(encode_text(g)) == g
