"""Exception hierarchy.

Domain errors (``NoBreakeven``, ``TooLarge``) are distinct from input
validation errors so the CLI can map them to different exit codes.
"""


class FormularyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FormularyError, ValueError):
    """An argument lies outside the domain of an operation."""


class MissingBid(DomainError):
    """A required rebate bid is absent (e.g. no exclusive bid)."""


class NoBreakeven(DomainError):
    """The shared assignment can never equalize the exclusive one."""


class DegenerateShare(DomainError):
    """An average net price is undefined because a competitor serves no units."""


class UnbalancedMenu(DomainError):
    """A position menu could not be balanced into a square cost matrix."""


class TooLarge(DomainError):
    """Brute-force enumeration refused for an oversized matrix."""


class ScenarioParseError(FormularyError):
    """A scenario file is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ScenarioValidationError(FormularyError):
    """One or more scenario fields violate their constraints.

    ``problems`` holds ``(field_path, message)`` pairs, one per invalid field.
    """

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = list(problems)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.problems))

    @property
    def paths(self) -> list[str]:
        return [path for path, _ in self.problems]


class ScenarioIOError(FormularyError, OSError):
    """Reading or writing a scenario or report file failed."""
