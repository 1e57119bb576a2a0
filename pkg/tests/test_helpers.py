import codecs
import io
import typing

import pytest

import seizure.exceptions
import seizure.helpers


EXPECTED_CONSTANTS = [
    ("MAX_SAMPLE_CHUNKSIZE", int),
    ("LINE_TERMINATORS", typing.List),
    ("LINE_TERMINATOR_DEFAULT", str),
    ("CANDIDATE_DELIMITERS", typing.List),
]


def test_are_expected_constants_defined():
    for name, typ in EXPECTED_CONSTANTS:
        if name not in seizure.helpers.__dict__:
            raise Exception(
                "{typ} constant seizure.helpers.{name} expected but undefined".format(
                    name=name, typ=typ,
                ))


def test_typecheck_constants():
    for name, typ in EXPECTED_CONSTANTS:
        if not isinstance(seizure.helpers.__dict__.get(name), typ):
            raise Exception(
                "constant seizure.helpers.{name} expected to be of type {typ}".format(
                    name=name, typ=typ,
                ))


def test_detect_unexpected_constants():
    constant_names = [record[0] for record in EXPECTED_CONSTANTS]
    for name in seizure.helpers.__dict__.keys():
        if name == name.upper() and not name.startswith("_"):
            if name not in constant_names:
                raise Exception(
                    ("constant seizure.helpers.{name} found but unexpected; "
                     "should be added to tests?").format(
                        name=name,
                    ))


def test_default_dialect_override():
    obj1 = seizure.helpers.DefaultDialect()
    obj2 = seizure.helpers.DefaultDialect.override(delimiter=";")

    assert obj1.delimiter == ","
    assert obj2.delimiter == ";"
    assert obj1.lineterminator == obj2.lineterminator == "\n"

    with pytest.raises(AttributeError):
        seizure.helpers.DefaultDialect.override(no_such_field=True)


class TestDetectLineTerminator:

    @pytest.mark.parametrize("sample, expected", [
        ("a\nb\nc", "\n"),
        ("a\r\nb\r\nc", "\r\n"),
        ("a\rb\rc", "\r"),
        ("a\r\nb\nc\n", "\n"),
    ])
    def test_detect(self, sample, expected):
        assert seizure.helpers.detect_line_terminator(sample) == expected

    @pytest.mark.parametrize("sample", ["", "no line break", None, b"a\r\nb"])
    def test_default(self, sample):
        assert seizure.helpers.detect_line_terminator(sample, default="X") == "X"


class TestOpenBinary:

    SOME_BYTES = b"\x00\x01\x02seizure"

    def test_bytes(self):
        assert seizure.helpers.open_binary(self.SOME_BYTES).read() == self.SOME_BYTES

    def test_path(self, tmp_path):
        path = tmp_path / "blob.bin"
        path.write_bytes(self.SOME_BYTES)

        stream = seizure.helpers.open_binary(path)
        assert stream.read() == self.SOME_BYTES
        assert stream.name == str(path)

    def test_stream(self):
        source = io.BytesIO(self.SOME_BYTES)
        source.read(3)
        # streams are read from the start
        assert seizure.helpers.open_binary(source).read() == self.SOME_BYTES

    def test_missing_path(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            seizure.helpers.open_binary(tmp_path / "missing.edf")

    @pytest.mark.parametrize("source", [io.StringIO("text"), 42, None])
    def test_unsupported(self, source):
        with pytest.raises(seizure.exceptions.SeizureTypeError):
            seizure.helpers.open_binary(source)


class TestOpenStream:

    SOME_TEXT = "patient,value\r\nchb01,1\r\n"

    def test_text(self):
        stream = seizure.helpers.open_stream(self.SOME_TEXT)
        assert stream.read() == "patient,value\nchb01,1\n"

    @pytest.mark.parametrize("encoding", ["utf-8", "utf-16", "utf-8-sig"])
    def test_bytes(self, encoding):
        data = self.SOME_TEXT.encode(encoding)
        stream = seizure.helpers.open_stream(data)
        assert stream.read() == "patient,value\nchb01,1\n"

    def test_explicit_encoding(self):
        data = "Jérémie,1\n".encode("latin-1")
        stream = seizure.helpers.open_stream(data, encoding="latin-1")
        assert stream.read() == "Jérémie,1\n"

    def test_bom_is_stripped(self):
        data = codecs.BOM_UTF8 + b"a,b\n"
        assert seizure.helpers.open_stream(data).read() == "a,b\n"


class TestOpenCsv:

    def test_header_and_blank_lines(self):
        info = seizure.helpers.open_csv("x,y\n1,2\n\n3,4\n")

        assert info["header"] == ["x", "y"]
        assert info["rows"] == [["1", "2"], ["3", "4"]]
        assert info["line_numbers"] == [2, 4]
        assert info["first_line"] == 2
        assert info["source_name"] is None

    def test_no_header(self):
        info = seizure.helpers.open_csv("1,2\n3,4\n")

        assert info["header"] is None
        assert info["rows"] == [["1", "2"], ["3", "4"]]
        assert info["first_line"] == 1

    def test_semicolons(self):
        info = seizure.helpers.open_csv("a;b\n1;2\n3;4\n5;6\n")

        assert info["header"] == ["a", "b"]
        assert info["rows"] == [["1", "2"], ["3", "4"], ["5", "6"]]

    def test_single_column(self):
        info = seizure.helpers.open_csv("1\n2\n3\n")
        assert info["rows"] == [["1"], ["2"], ["3"]]

    def test_source_name(self, tmp_path):
        path = tmp_path / "rec.csv"
        path.write_text("1,2\n", encoding="utf-8")
        assert seizure.helpers.open_csv(str(path))["source_name"] == str(path)


class TestCells:

    def test_parse_float_cell(self):
        assert seizure.helpers.parse_float_cell(" 1.5 ", row=1, column=1) == 1.5
        assert seizure.helpers.parse_float_cell("-2e3", row=1, column=1) == -2000.0

    def test_parse_float_cell_error_position(self):
        with pytest.raises(seizure.exceptions.CsvParseException) as exc:
            seizure.helpers.parse_float_cell("abc", row=7, column=3, source="rec.csv")
        assert exc.value.row == 7
        assert exc.value.column == 3
        assert "rec.csv" in str(exc.value)
        assert "row 7, column 3" in str(exc.value)

    def test_parse_float_cell_nan(self):
        with pytest.raises(seizure.exceptions.CsvParseException):
            seizure.helpers.parse_float_cell("nan", row=1, column=1)

    @pytest.mark.parametrize("value", [0.1, 1 / 3, 1e-300, 256.0, -0.0])
    def test_format_float(self, value):
        assert float(seizure.helpers.format_float(value)) == value

    def test_write_csv(self):
        stream = io.StringIO()
        seizure.helpers.write_csv(stream, [["a", 1, 0.1], ["b", 2, 1 / 3]], header=["x", "y", "z"])
        assert stream.getvalue() == "x,y,z\na,1,0.1\nb,2,0.3333333333333333\n"
