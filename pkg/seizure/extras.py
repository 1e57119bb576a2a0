import codecs
import csv
import typing

import seizure.helpers


__author__ = ("Jérémie Lumbroso <lumbroso@cs.princeton.edu>")

__all__ = [
    "detect_csv_type",
    "is_binary_string",
    "detect_encoding",
]


DEFAULT_DELIMITER = ","


# Dialect detection of sample files: `clevercsv` when available, the
# standard `csv.Sniffer` otherwise

def _default_detect_csv_type(
    sample: str,
    delimiters: typing.Optional[typing.Iterable[str]] = None
) -> dict:
    """
    Returns the dialect, header guess and line terminator of a CSV sample,
    using the `csv.Sniffer` of the standard library. The dialect is `None`
    when the sniffer gives up.
    """

    sample = sample[:seizure.helpers.MAX_SAMPLE_CHUNKSIZE]
    line_terminator = seizure.helpers.detect_line_terminator(sample)

    sniffer = csv.Sniffer()
    delimiters = "".join(delimiters) if delimiters is not None else None

    try:
        dialect = sniffer.sniff(sample=sample, delimiters=delimiters)
        dialect.lineterminator = line_terminator
        has_header = sniffer.has_header(sample=sample)
    except csv.Error:
        dialect = None
        has_header = False

    return {
        "dialect": dialect,
        "has_header": has_header,
        "line_terminator": line_terminator,
    }


detect_csv_type = _default_detect_csv_type

try:
    import clevercsv

    def detect_csv_type(
        sample: str,
        delimiters: typing.Optional[typing.Iterable[str]] = None
    ) -> dict:
        """
        Returns the dialect, header guess and line terminator of a CSV
        sample, using the data consistency measure of `clevercsv`
        (https://github.com/alan-turing-institute/CleverCSV).
        """

        sample = sample[:seizure.helpers.MAX_SAMPLE_CHUNKSIZE]
        line_terminator = seizure.helpers.detect_line_terminator(sample)

        sniffer = clevercsv.Sniffer()
        simple_dialect = sniffer.detect(
            sample=sample,
            delimiters=list(delimiters) if delimiters is not None else None)

        if simple_dialect is None:
            return {
                "dialect": None,
                "has_header": False,
                "line_terminator": line_terminator,
            }

        dialect = simple_dialect.to_csv_dialect()
        dialect.lineterminator = line_terminator

        # single-column files come back without a delimiter
        if dialect.delimiter is None or dialect.delimiter == "":
            dialect.delimiter = DEFAULT_DELIMITER

        has_header = False
        try:
            has_header = sniffer.has_header(sample=sample)
        except StopIteration:
            pass

        return {
            "dialect": dialect,
            "has_header": has_header,
            "line_terminator": line_terminator,
        }

except ImportError:  # pragma: no cover
    clevercsv = None


# Binary sniffing (tells EDF files from text recordings when the extension
# says nothing), with `binaryornot` when available

# bytes found in text files, after file(1)
TEXT_CHARS = bytearray({7, 8, 9, 10, 12, 13, 27} |
                       set(range(0x20, 0x100)) - {0x7f})


def _is_binary_string_internal(bytestring: bytes) -> bool:
    """
    Returns `True` if the bytes contain a character that never appears in
    text files.
    """
    if not bytestring:
        return False
    return bool(bytestring.translate(None, TEXT_CHARS))


_is_binary_string = _is_binary_string_internal

try:
    import binaryornot
    import binaryornot.helpers

    _is_binary_string = binaryornot.helpers.is_binary_string

except ImportError:  # pragma: no cover
    binaryornot = None


def is_binary_string(bytestring: typing.Optional[bytes], truncate: bool = True) -> bool:
    """
    Detects, using heuristics, whether a string of bytes is text or binary
    data. Only the first `MAX_SAMPLE_CHUNKSIZE` bytes are examined unless
    `truncate` is `False`.
    """

    if bytestring is None:
        return False

    try:
        length = len(bytestring)
    except TypeError:
        return False

    if truncate and length > seizure.helpers.MAX_SAMPLE_CHUNKSIZE:
        bytestring = bytestring[:seizure.helpers.MAX_SAMPLE_CHUNKSIZE]

    return bool(_is_binary_string(bytestring))


# Encoding detection of text recordings and label files: byte order marks
# first, then `chardet` when available

_NULL = b"\x00"


def _detect_encoding_by_bom(
    sample: bytes,
    default: typing.Optional[str] = None
) -> typing.Optional[str]:
    """
    Returns the Unicode variant announced by the byte order mark of `sample`,
    or suggested by the position of null bytes in its first four bytes (text
    in our files always starts with ASCII characters); `default` otherwise.
    """

    head = sample[:4]

    if head in (codecs.BOM_UTF32_LE, codecs.BOM_UTF32_BE):
        return "utf-32"
    if head[:3] == codecs.BOM_UTF8:
        return "utf-8-sig"
    if head[:2] in (codecs.BOM_UTF16_LE, codecs.BOM_UTF16_BE):
        return "utf-16"

    nulls = head.count(_NULL)

    if nulls == 2:
        if head[::2] == _NULL * 2:
            return "utf-16-be"
        if head[1::2] == _NULL * 2:
            return "utf-16-le"

    if nulls == 3:
        if head[:3] == _NULL * 3:
            return "utf-32-be"
        if head[1:] == _NULL * 3:
            return "utf-32-le"

    return default


detect_encoding = _detect_encoding_by_bom

try:
    import chardet

    def detect_encoding(
        sample: bytes,
        default: typing.Optional[str] = "utf-8"
    ) -> typing.Optional[str]:
        """
        Detects the encoding of a `sample` of bytes:

        1. from its byte order mark, if it has one;

        2. otherwise with the statistical model of `chardet`;

        3. otherwise returns `default` (`"utf-8"` if unchanged).
        """

        encoding = _detect_encoding_by_bom(sample)
        if encoding is not None:
            return encoding

        result = chardet.detect(sample)
        if result is not None and result.get("encoding") is not None:
            return result.get("encoding")

        return default

except ImportError:  # pragma: no cover
    chardet = None
