"""Exception types shared across the workbench."""


class LdwbError(Exception):
    """Base class for all workbench errors."""


class TermSyntaxError(LdwbError):
    """Input text does not conform to the term grammar."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"syntax error at position {position}: expected {expected}, found {found}"
        )


class UnknownGeneratorError(LdwbError):
    """A token names a generator that is not in the ambient signature."""

    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        where = f" at position {position}" if position >= 0 else ""
        super().__init__(f"unknown generator {name!r}{where}")


class TermTooLargeError(LdwbError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"term has {size} leaves, configured limit is {limit}")


class InvalidSignatureError(LdwbError):
    """Operands do not live over the expected ambient signature."""


class MissingAssignmentError(LdwbError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no value assigned to generator {name!r}")


class LimitExceededError(LdwbError):
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"table index {n} exceeds configured maximum {limit}")


class FormatError(LdwbError):
    """Table file is structurally malformed (magic, version, or length)."""


class ValidationError(LdwbError):
    """Table file parses but violates a defining table property."""
