
__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "SeizureException",
    "SeizureTypeError",
    "SeizureValueError",
    "SeizureKeyError",
    "SeizureEncodingException",
    "EdfHeaderException",
    "EdfRateMismatchException",
    "EdfTruncatedException",
    "CsvParseException",
    "SeizureDimensionError",
    "SeizureSingleClassException",
    "SeizureUnknownClassifierException",
    "SeizureConfigException",
    "SeizureContainerException",
    "SeizureProtocolException",
]


class SeizureException(Exception):
    """
    The base exception for the `seizure` package.
    """
    pass


class SeizureTypeError(SeizureException, TypeError):
    """
    The type error for the `seizure` package.
    """
    pass


class SeizureValueError(SeizureException, ValueError):
    """
    A value is outside of the domain an operation accepts.
    """
    pass


class SeizureKeyError(SeizureException, KeyError):
    """
    A requested key (patient, classifier, configuration field) is unknown.
    """
    pass


class SeizureEncodingException(SeizureException):
    """
    Auto-detection of encoding is failing; default UTF-8 encoding is
    failing. Consider providing an encoding when opening the source.
    """
    pass


class EdfHeaderException(SeizureValueError):
    """
    The EDF header is malformed: a field could not be parsed, or the declared
    header size does not match the number of signals.
    """
    pass


class EdfRateMismatchException(SeizureValueError):
    """
    The signals of an EDF file do not all share the same sampling rate, or
    that rate is not a whole number of samples per second.
    """
    pass


class EdfTruncatedException(SeizureValueError):
    """
    The data section of an EDF file holds fewer bytes than its header
    declares.
    """
    pass


class CsvParseException(SeizureValueError):
    """
    A cell of a CSV file could not be parsed, or a row has the wrong number
    of columns. The (1-based) `row` and `column` are kept as attributes.
    """

    def __init__(self, message: str, row: int = None, column: int = None):
        super().__init__(message)
        self.row = row
        self.column = column


class SeizureDimensionError(SeizureValueError):
    """
    Two objects that must agree on a dimension (vector length, layer sizes,
    channel count) do not.
    """
    pass


class SeizureSingleClassException(SeizureValueError):
    """
    A training set contains a single class where both are required.
    """
    pass


class SeizureUnknownClassifierException(SeizureKeyError):
    """
    The requested classifier kind is not one of the supported kinds.
    """
    pass


class SeizureConfigException(SeizureValueError):
    """
    A configuration file or override is invalid.
    """
    pass


class SeizureContainerException(SeizureValueError):
    """
    A model container could not be read: wrong magic bytes, unsupported
    version, unknown classifier tag or truncated payload.
    """
    pass


class SeizureProtocolException(SeizureValueError):
    """
    An evaluation protocol cannot be run with the provided data or model.
    """
    pass
