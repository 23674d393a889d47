"""Exceptions raised by bofdb.

Every exception carries a ``code`` attribute naming the error condition.
The line-protocol service reports failures as ``ERR <code> <message>``.
"""


class BofdbError(Exception):
    code = "Error"


# features


class MalformedImage(BofdbError, ValueError):
    code = "MalformedImage"


class ImageTooSmall(BofdbError, ValueError):
    code = "ImageTooSmall"


class MalformedDescriptorFile(BofdbError, ValueError):
    code = "MalformedDescriptorFile"


class DimensionMismatch(BofdbError, ValueError):
    code = "DimensionMismatch"


# vocab


class InvalidK(BofdbError, ValueError):
    code = "InvalidK"


class TooFewDistinctPoints(BofdbError, ValueError):
    code = "TooFewDistinctPoints"


# svm


class SingleClassData(BofdbError, ValueError):
    code = "SingleClassData"


# store


class CorruptStore(BofdbError):
    code = "CorruptStore"


class MalformedRecord(BofdbError, ValueError):
    code = "MalformedRecord"


class UnknownFileId(BofdbError, KeyError):
    code = "UnknownFileId"

    def __str__(self):
        # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class UnknownRecord(BofdbError, KeyError):
    code = "UnknownRecord"

    def __str__(self):
        return Exception.__str__(self)


class ForeignKeyViolation(BofdbError, ValueError):
    code = "ForeignKeyViolation"


# query


class QuerySyntaxError(BofdbError, ValueError):
    """Raised by the query parser.

    Args:
        message (str): what was expected or found
        line (int): 1-based line of the offending token
        column (int): 1-based column of the offending token
    """

    code = "SyntaxError"

    def __init__(self, message, line, column):
        self.message = message
        self.line = line
        self.column = column
        super().__init__("{}:{} {}".format(line, column, message))


class UnknownTable(BofdbError, ValueError):
    code = "UnknownTable"


class UnknownFunction(BofdbError, ValueError):
    code = "UnknownFunction"


class UnknownColumn(BofdbError, ValueError):
    code = "UnknownColumn"


class TypeMismatch(BofdbError, TypeError):
    code = "TypeMismatch"


class ModelNotLoaded(BofdbError):
    code = "ModelNotLoaded"
