import csv
import io
import math
import os
import typing

import seizure.exceptions
import seizure.extras
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "MAX_SAMPLE_CHUNKSIZE",
    "LINE_TERMINATORS",
    "LINE_TERMINATOR_DEFAULT",
    "CANDIDATE_DELIMITERS",

    "DefaultDialect",

    "is_number",
    "source_name",
    "detect_line_terminator",
    "open_stream",
    "open_binary",
    "open_csv",
    "parse_float_cell",
    "format_float",
    "write_csv",
]


MAX_SAMPLE_CHUNKSIZE = 10000

LINE_TERMINATORS = ["\r\n", "\r", "\n"]

LINE_TERMINATOR_DEFAULT = "\n"

CANDIDATE_DELIMITERS = [",", ";", "\t"]


class DefaultDialect(csv.Dialect):
    """
    The dialect of every file the package writes (comma-separated, LF line
    endings, minimal quoting); also used for reading when sniffing fails.
    """

    @classmethod
    def override(cls, **kwargs) -> csv.Dialect:
        """
        Creates a `csv.Dialect` object that only overrides certain
        settings from the default dialect.
        """
        obj = cls()

        for field, value in kwargs.items():
            if field not in obj.__dict__:
                raise AttributeError(
                    "Class `{}` does not have a field `{}` to override".format(
                        cls, field))
            obj.__dict__[field] = value

        return obj

    def __init__(self):
        self.delimiter = ","
        self.doublequote = True
        self.escapechar = None
        self.lineterminator = LINE_TERMINATOR_DEFAULT
        self.quotechar = '"'
        self.quoting = csv.QUOTE_MINIMAL
        self.skipinitialspace = True
        self.strict = False


def is_number(value: typing.Any) -> bool:
    """
    Returns `True` if `value` parses as a finite or infinite float
    (surrounding whitespace allowed).
    """
    try:
        float(value)
        return True
    except (TypeError, ValueError):
        return False


def source_name(source: typing.Any) -> typing.Optional[str]:
    """
    Returns a caption for a data source, to be used in error messages: the
    path for paths, the `name` attribute for file objects, `None` for raw
    data.
    """
    if isinstance(source, os.PathLike):
        return os.fspath(source)
    if isinstance(source, str) and "\n" not in source and "\r" not in source:
        return source
    name = getattr(source, "name", None)
    if isinstance(name, str):
        return name
    return None


def detect_line_terminator(
        sample: typing.Optional[typing.AnyStr],
        default: typing.Optional[typing.AnyStr] = None
) -> str:
    """
    Detects the most likely line terminator (from `\\r`, `\\n`, `\\r\\n`) of a
    sample string: the most frequent pattern wins, and the longer pattern
    wins among equally frequent ones (every `\\r\\n` also counts as one `\\r`
    and one `\\n`).
    """

    if default is None:
        default = LINE_TERMINATOR_DEFAULT

    if not isinstance(sample, str):
        return default

    ranked_options = sorted(
        ((sample.count(lt), len(lt), lt) for lt in LINE_TERMINATORS),
        reverse=True)

    count, _, best = ranked_options[0]

    if count == 0:
        return default

    return best


def open_binary(source: seizure.typing.SourceType) -> typing.BinaryIO:
    """
    Returns a seekable binary stream on `source`, which can be a local file
    path, a string of bytes, or a binary stream (read entirely into memory if
    it cannot seek). Raises `FileNotFoundError` for paths that do not exist.
    """

    if isinstance(source, (str, os.PathLike)):
        path = os.path.expanduser(os.fspath(source))
        if not os.path.isfile(path):
            raise FileNotFoundError(
                "no such file: '{}'".format(path))
        with open(path, mode="rb") as stream:
            data = stream.read()
        buffer = io.BytesIO(data)
        buffer.name = path
        return buffer

    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(bytes(source))

    if hasattr(source, "read"):
        if hasattr(source, "seekable") and source.seekable():
            source.seek(0)
        data = source.read()
        if isinstance(data, str):
            raise seizure.exceptions.SeizureTypeError(
                "a binary stream was expected, got a text stream")
        buffer = io.BytesIO(data)
        name = getattr(source, "name", None)
        if name is not None:
            buffer.name = name
        return buffer

    raise seizure.exceptions.SeizureTypeError(
        "unsupported source of type `{}`".format(type(source).__name__))


def open_stream(
    source: seizure.typing.SourceType,
    encoding: typing.Optional[str] = None,
) -> typing.TextIO:
    """
    Returns a seekable stream of decoded text, ready to be read. The `source`
    can be the text itself (any string with a line break), a local file path,
    a string of bytes, or a stream. The encoding of bytes is detected (byte
    order mark, then `chardet` if available) unless `encoding` is provided;
    UTF-8 is tried as a fallback. Line endings are normalized to `\\n`.
    """

    # text given directly
    if isinstance(source, str) and ("\n" in source or "\r" in source):
        newline = detect_line_terminator(sample=source, default="\n")
        return io.StringIO(initial_value=source.replace(newline, "\n"), newline="\n")

    # text stream
    if hasattr(source, "read") and isinstance(getattr(source, "encoding", None), str):
        if hasattr(source, "seekable") and source.seekable():
            source.seek(0)
        text = source.read()
        newline = detect_line_terminator(sample=text, default="\n")
        stream = io.StringIO(initial_value=text.replace(newline, "\n"), newline="\n")
        return stream

    if isinstance(source, io.StringIO):
        source.seek(0)
        return io.StringIO(initial_value=source.read(), newline="\n")

    # everything else goes through bytes
    binary = open_binary(source)
    data = binary.read()

    if encoding is None:
        encoding = seizure.extras.detect_encoding(data[:MAX_SAMPLE_CHUNKSIZE])

    candidates = [encoding] if encoding is not None else []
    if "utf-8" not in candidates:
        candidates.append("utf-8")

    for candidate in candidates:
        try:
            text = data.decode(candidate)
        except (UnicodeError, LookupError):
            continue
        newline = detect_line_terminator(sample=text, default="\n")
        stream = io.StringIO(initial_value=text.replace(newline, "\n"), newline="\n")
        stream.name = getattr(binary, "name", None)
        return stream

    raise seizure.exceptions.SeizureEncodingException(
        "no suitable encoding could be found, tried: {}".format(candidates))


def open_csv(
    source: seizure.typing.SourceType,
    encoding: typing.Optional[str] = None,
    delimiters: typing.Optional[typing.Iterable[str]] = None,
) -> seizure.typing.CsvInfoType:
    """
    Returns a `CsvInfoType` typed dictionary with the rows of a CSV source
    and its header, if any. The dialect is sniffed with
    `seizure.extras.detect_csv_type()` among `delimiters` (comma, semicolon
    and tab by default). The first row is a header when none of its cells is
    a number; empty lines are skipped.
    """

    name = source_name(source)
    stream = open_stream(source=source, encoding=encoding)

    sample = stream.read(MAX_SAMPLE_CHUNKSIZE)
    stream.seek(0)

    if delimiters is None:
        delimiters = CANDIDATE_DELIMITERS
    delimiters = list(delimiters)

    dialect = None
    if any(delimiter in sample for delimiter in delimiters):
        params = seizure.extras.detect_csv_type(sample=sample, delimiters=delimiters)
        dialect = params.get("dialect")
    if dialect is None or dialect.delimiter not in delimiters:
        dialect = DefaultDialect()

    numbered_rows = [
        (lineno, row)
        for lineno, row in enumerate(csv.reader(stream, dialect=dialect), start=1)
        if len(row) > 0 and any(cell.strip() != "" for cell in row)
    ]

    header = None
    first_line = 1
    if numbered_rows:
        first_lineno, first_row = numbered_rows[0]
        if not any(is_number(cell) for cell in first_row):
            header = [cell.strip() for cell in first_row]
            numbered_rows = numbered_rows[1:]
            first_line = first_lineno + 1
        else:
            first_line = first_lineno

    return {
        "rows": [row for _, row in numbered_rows],
        "line_numbers": [lineno for lineno, _ in numbered_rows],
        "header": header,
        "first_line": first_line,
        "source_name": name,
    }


def parse_float_cell(
    value: str,
    row: int,
    column: int,
    source: typing.Optional[str] = None,
) -> float:
    """
    Returns the float in a CSV cell, or raises a `CsvParseException` naming
    the (1-based) `row` and `column` of the cell.
    """
    try:
        result = float(value)
    except (TypeError, ValueError):
        raise seizure.exceptions.CsvParseException(
            "{}row {}, column {}: cannot parse {!r} as a number".format(
                "{}: ".format(source) if source else "",
                row, column, value),
            row=row,
            column=column)
    if math.isnan(result):
        raise seizure.exceptions.CsvParseException(
            "{}row {}, column {}: NaN is not a valid sample".format(
                "{}: ".format(source) if source else "",
                row, column),
            row=row,
            column=column)
    return result


def format_float(value: float) -> str:
    """
    Returns the shortest decimal text that reads back as exactly `value`.
    """
    return repr(float(value))


def write_csv(
    stream: typing.TextIO,
    rows: typing.Iterable[typing.Sequence[typing.Any]],
    header: typing.Optional[typing.Sequence[str]] = None,
    dialect: typing.Optional[csv.Dialect] = None,
) -> None:
    """
    Writes an optional `header` and the `rows` to a text `stream`; floats are
    written with `format_float()` so files are byte-identical across runs.
    """

    writer = csv.writer(stream, dialect=dialect or DefaultDialect())

    if header is not None:
        writer.writerow(list(header))

    for row in rows:
        writer.writerow([
            format_float(cell) if isinstance(cell, float) else cell
            for cell in row
        ])
