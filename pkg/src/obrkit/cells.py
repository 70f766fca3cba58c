"""Braille cells, the Portuguese code table, and word/bit-vector transcription.

A cell is six binary dot states in the standard numbering (dots 1-2-3 down
the left column, 4-5-6 down the right). A word maps to a flat 0/1 vector of
six entries per character, in dot order; the inverse mapping turns such a
vector back into text. Both directions are table-driven so other Grade-1
alphabets can be dropped in.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    LengthNotMultipleOfSix,
    MalformedLine,
    UnmappedCell,
    UnmappedCharacter,
)

DOTS_PER_CELL = 6

APOSTROPHE = "'"
# Apostrophe look-alikes folded onto the canonical one before any lookup.
_APOSTROPHE_VARIANTS = "`´‘’"
_APOSTROPHE_FOLD = str.maketrans(dict.fromkeys(_APOSTROPHE_VARIANTS, APOSTROPHE))


def fold_apostrophes(text: str) -> str:
    """Replace backtick/typographic apostrophes with the canonical ``'``."""
    return text.translate(_APOSTROPHE_FOLD)


@dataclass(frozen=True, slots=True)
class BrailleCell:
    """One 3x2 braille cell; ``dots[k]`` is the state of dot ``k + 1``."""

    dots: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        if len(self.dots) != DOTS_PER_CELL or any(d not in (0, 1) for d in self.dots):
            raise ValueError(f"a braille cell is six 0/1 dot states, got {self.dots!r}")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BrailleCell":
        return cls(tuple(int(b) for b in bits))

    @classmethod
    def from_raised(cls, raised: Iterable[int]) -> "BrailleCell":
        """Build a cell from raised dot numbers, e.g. ``from_raised((1, 4))``."""
        dots = [0] * DOTS_PER_CELL
        for n in raised:
            if not 1 <= int(n) <= DOTS_PER_CELL:
                raise ValueError(f"dot number out of range 1..6: {n}")
            dots[int(n) - 1] = 1
        return cls(tuple(dots))

    @property
    def is_blank(self) -> bool:
        return not any(self.dots)

    def raised(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, d in enumerate(self.dots) if d)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.dots)


BLANK_CELL = BrailleCell((0, 0, 0, 0, 0, 0))


class CodeTable:
    """Bijective character <-> cell mapping.

    The table is partial over the 64 possible patterns; looking up an
    unmapped character or cell raises. Instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(self, pairs: Iterable[tuple[str, BrailleCell]]):
        char_to_cell: dict[str, BrailleCell] = {}
        cell_to_char: dict[BrailleCell, str] = {}
        for char, cell in pairs:
            if len(char) != 1:
                raise ValueError(f"table keys must be single characters, got {char!r}")
            char = fold_apostrophes(char)
            if not isinstance(cell, BrailleCell):
                cell = BrailleCell.from_bits(cell)
            if char in char_to_cell:
                raise ValueError(f"duplicate character in code table: {char!r}")
            if cell in cell_to_char:
                raise ValueError(
                    f"cell {cell} mapped to both {cell_to_char[cell]!r} and {char!r}"
                )
            char_to_cell[char] = cell
            cell_to_char[cell] = char
        if BLANK_CELL in cell_to_char and cell_to_char[BLANK_CELL] != " ":
            raise ValueError("the all-blank cell must map to the space character")
        if " " in char_to_cell and not char_to_cell[" "].is_blank:
            raise ValueError("the space character must map to the all-blank cell")

        self.char_to_cell = char_to_cell
        self.cell_to_char = cell_to_char
        # Lookup caches for the hot transcription paths.
        self._cell_bytes = {c: bytes(cell.dots) for c, cell in char_to_cell.items()}
        self._bytes_char = {bytes(cell.dots): c for cell, c in cell_to_char.items()}
        self._packed6 = {
            c: sum(b << i for i, b in enumerate(cell.dots))
            for c, cell in char_to_cell.items()
        }

    @classmethod
    def load(cls, path: str | Path) -> "CodeTable":
        """Parse a table file: ``<char><TAB><6 bits>``, ``#`` comments, SPACE token."""
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise MalformedLine(line_no, line, reason="expected '<char>\\t<6 bits>'")
                token, bits = parts[0], parts[1].strip()
                char = " " if token == "SPACE" else token
                if len(char) != 1 or len(bits) != 6 or any(b not in "01" for b in bits):
                    raise MalformedLine(line_no, line, reason="expected '<char>\\t<6 bits>'")
                pairs.append((char, BrailleCell(tuple(int(b) for b in bits))))
        return cls(pairs)

    @property
    def chars(self) -> frozenset[str]:
        return frozenset(self.char_to_cell)

    def __contains__(self, char: str) -> bool:
        return fold_apostrophes(char) in self.char_to_cell

    def __len__(self) -> int:
        return len(self.char_to_cell)

    def encode_char(self, char: str) -> BrailleCell:
        try:
            return self.char_to_cell[fold_apostrophes(char)]
        except KeyError:
            raise UnmappedCharacter(char) from None

    def decode_cell(self, cell: BrailleCell) -> str:
        try:
            return self.cell_to_char[cell]
        except KeyError:
            raise UnmappedCell(cell.dots) from None

    def encodable(self, word: str) -> bool:
        cells = self._cell_bytes
        return all(fold_apostrophes(c) in cells for c in word)

    def pack_word(self, word: str) -> int:
        """Pack a word's dot vector into an int, bit ``i`` = vector entry ``i``."""
        packed = self._packed6
        value = 0
        shift = 0
        try:
            for c in word:
                value |= packed[fold_apostrophes(c)] << shift
                shift += DOTS_PER_CELL
        except KeyError:
            raise UnmappedCharacter(c, shift // DOTS_PER_CELL) from None
        return value


def word_to_bits(word: str, table: CodeTable) -> list[int]:
    """Flatten ``word`` into one 0/1 list, six entries per character in dot order."""
    cells = table._cell_bytes
    try:
        return list(b"".join([cells[fold_apostrophes(c)] for c in word]))
    except KeyError:
        for i, c in enumerate(word):
            if fold_apostrophes(c) not in cells:
                raise UnmappedCharacter(c, i) from None
        raise  # pragma: no cover - unreachable

def bits_to_word(bits: Sequence[int], table: CodeTable) -> str:
    """Inverse of :func:`word_to_bits`; requires ``len(bits)`` divisible by 6."""
    if isinstance(bits, (bytes, bytearray)):
        data = bytes(bits)
    elif isinstance(bits, np.ndarray):
        data = np.asarray(bits, dtype=np.uint8).tobytes()
    else:
        data = bytes(bytearray(bits))
    if len(data) % DOTS_PER_CELL:
        raise LengthNotMultipleOfSix(len(data))
    lut = table._bytes_char
    chars = []
    for i in range(0, len(data), DOTS_PER_CELL):
        chunk = data[i : i + DOTS_PER_CELL]
        char = lut.get(chunk)
        if char is None:
            raise UnmappedCell(tuple(chunk), i // DOTS_PER_CELL)
        chars.append(char)
    return "".join(chars)


def data_path(*parts: str) -> Path:
    """Path of a file shipped in ``obrkit/data``."""
    return Path(str(resources.files("obrkit").joinpath("data", *parts)))


@functools.lru_cache(maxsize=None)
def default_table() -> CodeTable:
    """The Portuguese Grade-1 table shipped with the package."""
    return CodeTable.load(data_path("pt_grade1.table"))
