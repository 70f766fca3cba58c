"""Word-frequency list ingestion and the length-bucketed lexicon.

The input format is the WordFrequency project's: UTF-8 text, one
``word<SPACE>count`` pair per line. Ingest lowercases every word, folds
apostrophe variants, drops words containing characters outside the allowed
set, and buckets the survivors by length so the corrector can scan
same-length candidates.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

from .cells import fold_apostrophes
from .errors import MalformedLine, NonNumericFrequency

ACCENTED_LETTERS = "áàâãéêíóôõúç"

# Characters kept by dictionary preprocessing: the Portuguese alphabet with
# its accented letters, plus hyphen and apostrophe.
DEFAULT_ALLOWED_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz" + ACCENTED_LETTERS + "-'")


@dataclass(frozen=True, slots=True)
class RawEntry:
    word: str
    frequency: int


def load_frequency_list(source: IO[bytes] | IO[str]) -> list[RawEntry]:
    """Parse a frequency list from an open stream.

    Returns entries in file order; a word repeated verbatim keeps its first
    occurrence. Blank lines are skipped.
    """
    if isinstance(source, io.TextIOBase):
        text = source
    else:
        text = io.TextIOWrapper(source, encoding="utf-8")
    entries: list[RawEntry] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(text, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(line_no, raw.rstrip("\n"))
        word, freq_text = parts
        try:
            freq = int(freq_text)
        except ValueError:
            raise NonNumericFrequency(line_no, raw.rstrip("\n")) from None
        if freq < 0:
            raise NonNumericFrequency(line_no, raw.rstrip("\n"))
        if word in seen:
            continue
        seen.add(word)
        entries.append(RawEntry(word, freq))
    return entries


def read_frequency_file(path: str | Path) -> list[RawEntry]:
    """Load a frequency list from disk; gzip-compressed files are detected."""
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    opener = gzip.open if magic == b"\x1f\x8b" else open
    with opener(path, "rb") as fh:
        return load_frequency_list(fh)


@dataclass(frozen=True)
class Lexicon:
    """Deduplicated word->frequency map with per-length candidate buckets.

    Buckets are ordered by descending frequency, ties broken
    lexicographically, which makes every downstream argmin deterministic.
    Instances are immutable after build; concurrent reads are safe.
    """

    entries: dict[str, int]
    buckets: dict[int, tuple[str, ...]]
    allowed_chars: frozenset[str]
    dropped: int = 0
    source: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return _normalize(word) in self.entries

    def __iter__(self):
        return iter(self.entries)

    def frequency(self, word: str) -> int | None:
        """Frequency count if the word is present, else None."""
        return self.entries.get(_normalize(word))

    def words_of_length(self, n: int) -> tuple[str, ...]:
        """All words of length exactly ``n`` in bucket order; empty if none."""
        if n < 1:
            raise ValueError(f"word length must be positive, got {n}")
        return self.buckets.get(n, ())

    def rank_key(self, word: str):
        """Sort key implementing the bucket order (frequency desc, then word)."""
        return (-self.entries.get(word, 0), word)


def _normalize(word: str) -> str:
    return fold_apostrophes(word.lower())


def build_lexicon(
    entries: Iterable[RawEntry],
    allowed_chars: Iterable[str] = DEFAULT_ALLOWED_CHARS,
    source: str = "",
) -> Lexicon:
    """Filter, lowercase and bucket raw entries into a Lexicon.

    Words containing any character outside ``allowed_chars`` are dropped.
    Duplicates after lowercasing keep the first occurrence's frequency.
    """
    allowed = frozenset(allowed_chars)
    if not allowed:
        raise ValueError("allowed_chars must not be empty")
    kept: dict[str, int] = {}
    dropped = 0
    for entry in entries:
        word = _normalize(entry.word)
        if not word:
            continue
        if any(c not in allowed for c in word):
            dropped += 1
            continue
        if word not in kept:
            kept[word] = entry.frequency
    by_length: dict[int, list[str]] = {}
    for word in kept:
        by_length.setdefault(len(word), []).append(word)
    buckets = {
        n: tuple(sorted(words, key=lambda w: (-kept[w], w)))
        for n, words in sorted(by_length.items())
    }
    return Lexicon(
        entries=kept,
        buckets=buckets,
        allowed_chars=allowed,
        dropped=dropped,
        source=source,
    )


def load_lexicon(
    path: str | Path,
    allowed_chars: Iterable[str] = DEFAULT_ALLOWED_CHARS,
) -> Lexicon:
    """Convenience wrapper: read a frequency file and build the lexicon."""
    return build_lexicon(read_frequency_file(path), allowed_chars, source=str(path))
