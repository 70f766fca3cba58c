"""Exception types shared across the package."""

from __future__ import annotations


class BrailleError(Exception):
    """Base class for every obrkit-specific error."""


class UnmappedCharacter(BrailleError):
    """A character has no cell in the code table."""

    def __init__(self, char: str, index: int | None = None):
        self.char = char
        self.index = index
        where = "" if index is None else f" at position {index}"
        super().__init__(f"no braille cell for character {char!r}{where}")


class UnmappedCell(BrailleError):
    """A 6-bit dot pattern has no character in the code table."""

    def __init__(self, pattern: tuple[int, ...], index: int | None = None):
        self.pattern = tuple(pattern)
        self.index = index
        where = "" if index is None else f" (cell {index})"
        super().__init__(f"no character for dot pattern {self.pattern}{where}")


class LengthNotMultipleOfSix(BrailleError):
    def __init__(self, length: int):
        self.length = length
        super().__init__(f"bit vector length {length} is not a multiple of 6")


class LengthMismatch(BrailleError):
    def __init__(self, a: int, b: int, what: str = "inputs"):
        self.lengths = (a, b)
        super().__init__(f"{what} have different lengths ({a} vs {b})")


class MalformedLine(BrailleError):
    """A line of an input data file could not be parsed."""

    def __init__(self, line_no: int, text: str, reason: str = "expected 'word frequency'"):
        self.line_no = line_no
        self.text = text
        super().__init__(f"line {line_no}: {reason}: {text!r}")


class NonNumericFrequency(MalformedLine):
    def __init__(self, line_no: int, text: str):
        super().__init__(line_no, text, reason="frequency is not a non-negative integer")


class LineTooLong(BrailleError):
    def __init__(self, line_no: int, length: int, limit: int):
        self.line_no = line_no
        super().__init__(f"line {line_no} has {length} cells, page limit is {limit}")


class NoLinesFound(BrailleError):
    def __init__(self, message: str = "no braille lines detected in the image"):
        super().__init__(message)


class CorruptionInfeasible(BrailleError):
    def __init__(self, word: str, percent: float, attempts: int):
        self.word = word
        self.percent = percent
        super().__init__(
            f"could not find a decodable {percent}% corruption of {word!r} "
            f"after {attempts} attempts"
        )
