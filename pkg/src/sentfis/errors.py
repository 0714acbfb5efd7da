"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class SentfisError(Exception):
    """Base class; the CLI maps any subclass to a nonzero exit."""


class DomainError(SentfisError, ValueError):
    pass


# -- ingestion --------------------------------------------------------------


class FileUnreadable(SentfisError):
    pass


class MissingColumn(SentfisError):
    def __init__(self, name: str):
        super().__init__(f"missing column: {name!r}")
        self.name = name


class RowError(SentfisError):
    """A single bad data row. ``row`` is the 1-based line number in the file,
    or None when the record was built directly rather than read from a file."""

    def __init__(self, row: int | None, message: str):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EmptyText(RowError):
    def __init__(self, row: int | None):
        super().__init__(row, "english text is empty")


class BadStar(RowError):
    def __init__(self, row: int | None, value: str):
        super().__init__(row, f"bad star rating {value!r} (expected integer 1..5 or empty)")
        self.value = value


class BadItemCount(RowError):
    def __init__(self, row: int | None, value: str):
        super().__init__(row, f"bad items_purchased {value!r}")
        self.value = value


class DuplicateId(RowError):
    def __init__(self, row: int, record_id: str):
        super().__init__(row, f"duplicate id {record_id!r}")
        self.record_id = record_id


class IngestError(SentfisError):
    """Raised after a full pass when one or more rows were rejected.

    Carries both the accepted records and the per-row problems so callers can
    report every diagnostic at once.
    """

    def __init__(self, records, problems):
        self.records = list(records)
        self.problems = list(problems)
        lines = "\n".join(str(p) for p in self.problems)
        super().__init__(f"{len(self.problems)} row(s) rejected:\n{lines}")


class WriteFailure(SentfisError):
    pass


# -- scoring ----------------------------------------------------------------


class EmptyLexicon(SentfisError):
    pass


# -- fuzzy ------------------------------------------------------------------


class MissingInput(SentfisError, KeyError):
    def __init__(self, variable: str):
        super().__init__(f"no value supplied for input variable {variable!r}")
        self.variable = variable

    def __str__(self) -> str:
        return self.args[0]


class OutOfUniverse(DomainError):
    def __init__(self, variable: str, value: float):
        super().__init__(f"{variable}={value!r} lies outside its universe")
        self.variable = variable
        self.value = value


class ZeroArea(SentfisError):
    pass


class ConfigError(SentfisError):
    pass


class EmptyGrid(SentfisError):
    pass


# -- analysis ---------------------------------------------------------------


class MissingApproach(SentfisError, KeyError):
    def __init__(self, approach, record_id: str | None = None):
        where = f" on record {record_id!r}" if record_id else ""
        super().__init__(f"approach {approach} not evaluated{where}")
        self.approach = approach
        self.record_id = record_id

    def __str__(self) -> str:
        return self.args[0]


class InsufficientData(SentfisError):
    pass


class UndefinedCorrelation(SentfisError):
    pass


# -- pipeline ---------------------------------------------------------------


class PipelineError(SentfisError):
    """Wraps a failure with the stage and record it happened in."""

    def __init__(self, stage: str, record_id: str | None, cause: BaseException):
        where = f" (record {record_id!r})" if record_id else ""
        super().__init__(f"{stage}{where}: {cause}")
        self.stage = stage
        self.record_id = record_id
        self.cause = cause
