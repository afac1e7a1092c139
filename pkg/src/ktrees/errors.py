"""Exception types shared across the package."""


class KTreesError(Exception):
    pass


class NonExactDivision(KTreesError, ArithmeticError):
    """A closed form produced a quotient that is not an integer."""


class InvalidParams(KTreesError, ValueError):
    pass


class LimitExceeded(KTreesError):
    """Brute-force enumeration requested beyond the configured size cap."""


class IndexOutOfRange(KTreesError, IndexError):
    pass


class UnsupportedBranch(KTreesError):
    pass


class ParseError(KTreesError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
