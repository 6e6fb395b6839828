import json

import pytest

from gfregular.core.errors import MatrixFormatError
from gfregular.core.field import field_of_order, tower
from gfregular.core.geometry import bar_matrix, pg_matrix
from gfregular.core.linalg import Mat
from gfregular.shell.services.matrix_file_service import MatrixFileService
from gfregular.shell.services.report_service import ReportService

FANO_TEXT = """\
# the Fano plane
field 2 1 0 1

3 7
0 0 0 1 1 1 1
0 1 1 0 0 1 1
1 0 1 0 1 0 1
labels p1 p2 p3 p4 p5 p6 p7
"""


def test_parse_with_comments_and_blank_lines():
    parsed = MatrixFileService.parse(FANO_TEXT)
    assert parsed.field == field_of_order(2)
    assert parsed.mat == pg_matrix(3, 2).mat
    assert parsed.roles == {}


def test_writer_output_is_stable(tmp_path):
    for family in (pg_matrix(3, 3), bar_matrix(3, 2)):
        text = MatrixFileService.format(family.mat, family.roles)
        parsed = MatrixFileService.parse(text)
        assert parsed.mat == family.mat
        assert MatrixFileService.format(parsed.mat, parsed.roles) == text
    path = tmp_path / "bar.txt"
    family = bar_matrix(3, 2)
    MatrixFileService.write(str(path), family.mat, family.roles)
    read = MatrixFileService.read(str(path))
    assert read.field == tower(2).field
    assert read.role("X") == family.role("X")
    assert read.role("f") == family.role("f")
    assert read.role("x_L0") == ("x0",)


def test_bar_header_names_the_extension():
    text = MatrixFileService.format(bar_matrix(3, 2).mat)
    assert text.splitlines()[0] == "ext 2 1 1 1"
    assert "x0 " in text and "[" not in text


def test_unlabelled_matrix_has_no_labels_line():
    text = MatrixFileService.format(Mat(field_of_order(3), [[1, 2], [0, 1]]))
    assert text == "field 3 1 0 1\n2 2\n1 2\n0 1\n"
    assert MatrixFileService.parse(text).mat.labels is None


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("field 2 1 0 1\n1 2\n1 2\n", 3, "not an element"),
        ("field 2 1 0 1\n1 2\n1 x\n", 3, "not a non-negative integer"),
        ("field 2 1 0 1\n1 2\n1\n", 3, "expected 2 entries"),
        ("field 2 1 0 1\n2 2\n1 0\n", 3, "expected 2 rows"),
        ("field 2 1 0 1\nthree\n", 2, "rows cols"),
        ("field 4 1 1\n1 1\n1\n", 1, ""),
        ("field 2 1 0 1\n1 2\n1 0\nlabels a a\n", 4, "duplicate labels"),
        ("field 2 1 0 1\n1 2\n1 0\nlabels a\n", 4, "expected 2 labels"),
        ("field 2 1 0 1\n1 2\n1 0\nlabels a b\nlabels c d\n", 5, "after the labels"),
        ("field 2 1 0 1\n1 2\n1 0\nnames a b\n", 4, "unexpected line"),
        ("field 2 1 0 1\n1 1\n1\nlabels a[X,]\n", 4, "empty role"),
    ],
)
def test_malformed_files_name_the_line(text, line, fragment):
    with pytest.raises(MatrixFormatError) as info:
        MatrixFileService.parse(text)
    assert info.value.line == line
    assert f"line {line}:" in str(info.value)
    assert fragment in str(info.value)


def test_empty_and_missing_files(tmp_path):
    with pytest.raises(MatrixFormatError):
        MatrixFileService.parse("# nothing here\n\n")
    with pytest.raises(OSError):
        MatrixFileService.read(str(tmp_path / "missing.txt"))


def test_expand_labels():
    assert MatrixFileService.expand_labels("p1..p3,x1") == ("p1", "p2", "p3", "x1")
    assert MatrixFileService.expand_labels("") == ()
    assert MatrixFileService.expand_labels(" a , b ") == ("a", "b")
    with pytest.raises(MatrixFormatError):
        MatrixFileService.expand_labels("p3..p1")
    with pytest.raises(MatrixFormatError):
        MatrixFileService.expand_labels("p1..x3")


def test_report_trailer_and_sorted_keys():
    text = ReportService.render("demo", {"b": {3, 1}, "a": (1, 2)}, "OK")
    assert ReportService.verdict_of(text) == "OK"
    body = json.loads(text.rsplit("\nVERDICT:", 1)[0])
    assert body == {"a": [1, 2], "b": [1, 3], "command": "demo"}
    assert text.index('"a"') < text.index('"b"') < text.index('"command"')
    assert ReportService.label_sets([{"b", "a"}, {"c"}]) == [["c"], ["a", "b"]]
    with pytest.raises(ValueError):
        ReportService.verdict_of("{}\n")
