"""Exception hierarchy shared by every stage of the pipeline."""


class CWACError(Exception):
    """Base class for all errors raised by this package."""


class DataError(CWACError):
    """Input data could not be turned into a valid dataset."""


class ParseError(DataError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class EmptyInputError(DataError):
    pass


class SchemaError(DataError):
    pass


class ConversionError(DataError):
    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        super().__init__(message)


class ParameterError(CWACError, ValueError):
    pass


class ConsistencyError(CWACError):
    """Two objects that must describe the same data do not."""


class UndefinedConfidenceError(CWACError, ZeroDivisionError):
    pass


class OracleScaleError(CWACError):
    pass


class BudgetError(CWACError):
    pass


class StageError(CWACError):
    """Wraps an error raised inside one named pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
