"""Corpus loading and the text preprocessing shared by both experiments.

Raw text is lowercased, digits are removed, and tokens keep only hyphen
and apostrophe as punctuation (leading/trailing punctuation is stripped).
Tokens that still contain characters without a braille cell are dropped,
since both the bit-corruption experiment and the renderer need fully
encodable words.
"""

from __future__ import annotations

import logging
import unicodedata
from pathlib import Path

from .cells import CodeTable, fold_apostrophes

log = logging.getLogger(__name__)

_KEPT_PUNCT = "-'"


def tokenize(text: str) -> list[str]:
    """Split raw text into normalized tokens."""
    text = unicodedata.normalize("NFC", fold_apostrophes(text.lower()))
    tokens = []
    for raw in text.split():
        t = "".join(c for c in raw if not c.isdigit())
        start, stop = 0, len(t)
        while start < stop and not (t[start].isalpha() or t[start] in _KEPT_PUNCT):
            start += 1
        while stop > start and not (t[stop - 1].isalpha() or t[stop - 1] in _KEPT_PUNCT):
            stop -= 1
        t = t[start:stop]
        if t:
            tokens.append(t)
    return tokens


def encodable_tokens(tokens: list[str], table: CodeTable) -> list[str]:
    kept = [t for t in tokens if table.encodable(t)]
    if len(kept) != len(tokens):
        log.debug("dropped %d tokens without a braille encoding", len(tokens) - len(kept))
    return kept


def corpus_tokens(text: str, table: CodeTable) -> list[str]:
    return encodable_tokens(tokenize(text), table)


def load_corpus_dir(path: str | Path, table: CodeTable) -> list[tuple[str, list[str]]]:
    """(name, tokens) for each ``.txt`` file in the directory, sorted by name."""
    path = Path(path)
    docs = []
    for file in sorted(path.glob("*.txt")):
        tokens = corpus_tokens(file.read_text(encoding="utf-8"), table)
        if tokens:
            docs.append((file.stem, tokens))
    if not docs:
        raise FileNotFoundError(f"no usable .txt files in {path}")
    return docs


def wrap_tokens(tokens: list[str], max_cols: int) -> list[str]:
    """Greedy word wrap into lines of at most ``max_cols`` cells."""
    if max_cols < 1:
        raise ValueError("max_cols must be positive")
    lines: list[str] = []
    current = ""
    for token in tokens:
        while len(token) > max_cols:  # hard-split oversized words
            if current:
                lines.append(current)
                current = ""
            lines.append(token[:max_cols])
            token = token[max_cols:]
        if not token:
            continue
        if not current:
            current = token
        elif len(current) + 1 + len(token) <= max_cols:
            current = current + " " + token
        else:
            lines.append(current)
            current = token
    if current:
        lines.append(current)
    return lines


def paginate(lines: list[str], lines_per_page: int) -> list[list[str]]:
    if lines_per_page < 1:
        raise ValueError("lines_per_page must be positive")
    return [lines[i : i + lines_per_page] for i in range(0, len(lines), lines_per_page)]
