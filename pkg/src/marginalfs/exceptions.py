"""Exception types raised by marginalfs."""


class DegenerateGroupError(ValueError):
    """A two-sample statistic was requested for a sample with an empty group."""


class InconsistentStatisticError(ValueError):
    """An observed statistic is not attainable for the given group sizes."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


class DataFormatError(ValueError):
    """Input data could not be parsed.

    Parameters
    ----------
    message : str
        Human readable description.
    row, column : int or str, optional
        Location of the offending cell (1-based data row, column name).
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class FeatureComputationError(RuntimeError):
    """Computing the statistic or p-value of one feature failed."""

    def __init__(self, feature, cause):
        self.feature = feature
        self.cause = cause
        super().__init__(f"feature {feature}: {type(cause).__name__}: {cause}")
