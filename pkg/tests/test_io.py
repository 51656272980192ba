"""Link/node file parsing, strict field handling, and byte-stable writers."""

import io
import json

import pytest

from hgsparse import (
    LinkFileOptions,
    LinkFormatError,
    NodeFileError,
    build_graph,
    read_link_file,
    read_node_file,
    write_link_file,
    write_node_file,
    write_report,
)


def test_two_line_parse():
    recs = read_link_file(io.StringIO("1\t2\t0\n1\t3\t0\n"))
    assert [r.key for r in recs] == [(1, 2, 0), (1, 3, 0)]
    assert all(r.weight is None for r in recs)


def test_weighted_parse():
    opts = LinkFileOptions(has_weight=True)
    recs = read_link_file(io.StringIO("1\t2\t0\t0.5\n"), opts)
    assert recs == [(1, 2, 0, 0.5)]


def test_two_fields_is_an_error():
    with pytest.raises(LinkFormatError) as err:
        read_link_file(io.StringIO("1\t2\n"))
    assert err.value.line_no == 1
    assert "expected 3" in str(err.value) and "got 2" in str(err.value)


def test_field_count_must_match_weight_flag():
    # 4 fields requires has_weight, 3 fields forbids it
    with pytest.raises(LinkFormatError):
        read_link_file(io.StringIO("1\t2\t0\t0.5\n"))
    with pytest.raises(LinkFormatError):
        read_link_file(io.StringIO("1\t2\t0\n"), LinkFileOptions(has_weight=True))


def test_line_numbers_count_skipped_lines():
    text = "# header\n\n1\t2\t0\nbad\t2\t0\n"
    opts = LinkFileOptions(comment_prefix="#")
    with pytest.raises(LinkFormatError) as err:
        read_link_file(io.StringIO(text), opts)
    assert err.value.line_no == 4


def test_non_finite_weight_rejected_at_parse():
    opts = LinkFileOptions(has_weight=True)
    with pytest.raises(LinkFormatError):
        read_link_file(io.StringIO("1\t2\t0\tnan\n"), opts)
    with pytest.raises(LinkFormatError):
        read_link_file(io.StringIO("1\t2\t0\tinf\n"), opts)


def test_custom_delimiter():
    recs = read_link_file(io.StringIO("1,2,0\n"), LinkFileOptions(delimiter=","))
    assert recs == [(1, 2, 0, None)]


def test_delimiter_validation():
    with pytest.raises(ValueError):
        LinkFileOptions(delimiter="::")
    with pytest.raises(ValueError):
        LinkFileOptions(delimiter="7")
    with pytest.raises(ValueError):
        LinkFileOptions(comment_prefix="too long")


def test_node_file_basic():
    assert read_node_file(io.StringIO("7\tgeneX\t0\n")) == {7: ("geneX", 0)}


def test_node_file_duplicate_id():
    with pytest.raises(NodeFileError) as err:
        read_node_file(io.StringIO("7\ta\t0\n7\tb\t0\n"))
    assert err.value.line_no == 2


def test_node_file_empty():
    assert read_node_file(io.StringIO("")) == {}


def test_node_file_extra_columns_warn_once():
    with pytest.warns(UserWarning, match="attribute column"):
        got = read_node_file(io.StringIO("1\tx\t0\textra\n2\ty\t1\textra\n"))
    assert got == {1: ("x", 0), 2: ("y", 1)}


def test_node_file_short_line():
    with pytest.raises(NodeFileError):
        read_node_file(io.StringIO("1\tx\n"))


def test_write_all_edges_canonical(g1):
    out = io.StringIO()
    assert write_link_file(g1, out) == 3
    assert out.getvalue() == "1\t2\t0\n1\t3\t0\n1\t4\t1\n"


def test_write_subset(g1):
    out = io.StringIO()
    assert write_link_file(g1, out, selected=[(1, 4, 1)]) == 1
    assert out.getvalue() == "1\t4\t1\n"


def test_write_preserves_weight_column():
    g = build_graph([(1, 2, 0, 0.5), (2, 3, 0)])
    out = io.StringIO()
    write_link_file(g, out)
    assert out.getvalue() == "1\t2\t0\t0.5\n2\t3\t0\n"


def test_roundtrip_is_byte_stable(tmp_path):
    text = "5\t1\t2\n1\t5\t0\n1\t2\t0\n1\t2\t1\n"
    g = build_graph(read_link_file(io.StringIO(text)))
    first = tmp_path / "a.dat"
    second = tmp_path / "b.dat"
    write_link_file(g, first)
    write_link_file(build_graph(read_link_file(first)), second)
    assert first.read_bytes() == second.read_bytes()


def test_write_node_file(tmp_path):
    path = tmp_path / "node.dat"
    write_node_file(path, [3, 7], [1, 0], names=["a", "b"])
    assert path.read_text() == "3\ta\t1\n7\tb\t0\n"
    write_node_file(path, [3], [1])
    assert path.read_text() == "3\tn3\t1\n"
    assert read_node_file(path) == {3: ("n3", 1)}


def test_report_is_sorted_json(tmp_path):
    path = tmp_path / "r.json"
    write_report({"b": 1, "a": [1, 2]}, path)
    text = path.read_text()
    assert text.endswith("\n")
    assert json.loads(text) == {"a": [1, 2], "b": 1}
    assert text.index('"a"') < text.index('"b"')
