import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcon.graph import (
    Graph,
    GraphFormatError,
    RelabelMap,
    from_edges,
    induced_degree,
    largest_connected_component,
    load_cache,
    load_graph,
    parse_edge_list,
    save_cache,
    write_edge_list,
)


def parse(lines):
    return parse_edge_list(io.StringIO("\n".join(lines) + "\n"))


def test_parse_path():
    g, rm = parse(["0 1", "1 2"])
    assert (g.n, g.m) == (3, 2)
    assert list(g.degrees) == [1, 2, 1]


def test_parse_dedupes_both_orientations():
    g, _ = parse(["0 1", "1 0", "0 1"])
    assert (g.n, g.m) == (2, 1)


def test_parse_drops_self_loops_and_relabels():
    g, rm = parse(["5 5", "5 6"])
    assert (g.n, g.m) == (2, 1)
    assert [rm.to_original(i) for i in range(2)] == [5, 6]
    assert rm.to_dense(6) == 1


def test_parse_skips_comments_and_tabs():
    g, _ = parse(["# FromNodeId\tToNodeId", "10\t20", "", "20\t30"])
    assert g.m == 2


@pytest.mark.parametrize("bad", ["0 x", "1", "a b"])
def test_parse_error_has_line_number(bad):
    with pytest.raises(GraphFormatError, match="line 2"):
        parse(["0 1", bad])


def test_parse_empty_graph_is_error():
    with pytest.raises(GraphFormatError):
        parse(["# nothing", "3 3"])


def test_adjacency_sorted_and_symmetric(rng):
    u = rng.integers(0, 50, 400)
    v = rng.integers(0, 50, 400)
    g = from_edges(u, v, n=50)
    for a in range(g.n):
        nb = g.neighbors(a)
        assert np.all(np.diff(nb) > 0)
        assert a not in nb
        for b in nb:
            assert a in g.neighbors(b)
    assert g.degrees.sum() == 2 * g.m


def test_graph_arrays_are_read_only(barbell):
    with pytest.raises(ValueError):
        barbell.indices[0] = 3


@given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 40)), min_size=1, max_size=120))
@settings(max_examples=80, deadline=None)
def test_parse_serialize_parse_idempotent(pairs):
    text = "\n".join(f"{a} {b}" for a, b in pairs)
    if all(a == b for a, b in pairs):
        with pytest.raises(GraphFormatError):
            parse_edge_list(io.StringIO(text))
        return
    g, rm = parse_edge_list(io.StringIO(text))
    buf = io.StringIO()
    write_edge_list(g, buf, rm)
    g2, rm2 = parse_edge_list(io.StringIO(buf.getvalue()))
    assert np.array_equal(g.indptr, g2.indptr)
    assert np.array_equal(g.indices, g2.indices)
    assert np.array_equal(rm.original, rm2.original)
    assert g.degrees.sum() == 2 * g.m


def test_relabel_roundtrip():
    rm = RelabelMap(np.array([7, 3, 11]))
    for dense in range(3):
        assert rm.to_dense(rm.to_original(dense)) == dense
    with pytest.raises(ValueError):
        RelabelMap(np.array([1, 1]))


def test_lcc_tie_break_smallest_original_id():
    g, rm = parse(["3 4", "4 5", "5 3", "0 1", "1 2", "2 0"])
    lcc, lrm = largest_connected_component(g, rm)
    assert sorted(lrm.original) == [0, 1, 2]


def test_lcc_tie_break_uses_original_ids_not_dense():
    g, rm = parse(["10 11", "11 12", "12 10", "2 30", "30 31", "31 2"])
    _, lrm = largest_connected_component(g, rm)
    assert sorted(lrm.original) == [2, 30, 31]


def test_lcc_triangle_beats_edge():
    g, rm = parse(["0 1", "1 2", "2 0", "7 8"])
    lcc, lrm = largest_connected_component(g, rm)
    assert (lcc.n, lcc.m) == (3, 3)


def test_lcc_connected_is_identity(barbell):
    lcc, rm = largest_connected_component(barbell)
    assert lcc is barbell
    assert list(rm.original) == list(range(6))


def test_lcc_drops_isolated_vertices():
    g = from_edges([0, 1], [1, 2], n=6)
    lcc, rm = largest_connected_component(g)
    assert lcc.n == 3 and list(rm.original) == [0, 1, 2]


def test_induced_degree_examples(barbell):
    tri = from_edges([0, 0, 1], [1, 2, 2])
    assert induced_degree(tri, {0, 1}, 0) == 1
    for u in range(barbell.n):
        assert induced_degree(barbell, set(range(6)), u) == barbell.degree(u)
    # bridge endpoint 2 inside its own triangle
    assert induced_degree(barbell, {0, 1, 2}, 2) == 2
    with pytest.raises(ValueError):
        induced_degree(barbell, {0, 1}, 2)


def test_cache_roundtrip(tmp_path, rng):
    g, rm = parse([f"{a} {b}" for a, b in zip(rng.integers(0, 1000, 300), rng.integers(0, 1000, 300))])
    path = tmp_path / "g.bin"
    save_cache(path, g, rm)
    g2, rm2 = load_cache(path)
    assert np.array_equal(g.indptr, g2.indptr) and np.array_equal(g.indices, g2.indices)
    assert np.array_equal(rm.original, rm2.original)
    g3, _ = load_graph(path)
    assert isinstance(g3, Graph) and g3.m == g.m


def test_cache_rejects_garbage(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"PCONCSR\x00" + b"\x09\x00\x00\x00" + b"\x00" * 16)
    with pytest.raises(GraphFormatError):
        load_cache(path)
