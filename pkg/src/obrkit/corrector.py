"""Word revision: braille-cell Hamming corrector and the frequency baseline.

The braille corrector replaces every token by the same-length dictionary
word whose cell encoding is nearest in Hamming distance, scanning the
length bucket linearly over packed bit vectors. The baseline mirrors the
classic frequency-list spell checkers (pyspellchecker-style): candidates
within edit distance two - insert, delete, substitute, adjacent
transposition - nearer tier first, ranked by corpus frequency.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import kernels
from .cells import CodeTable, fold_apostrophes
from .errors import LengthMismatch, UnmappedCharacter
from .lexicon import Lexicon

log = logging.getLogger(__name__)

_LIMB_BITS = 64
_LIMB_MASK = (1 << _LIMB_BITS) - 1
_UTF32 = "utf-32-le" if sys.byteorder == "little" else "utf-32-be"


def braille_distance(a: str, b: str, table: CodeTable) -> int:
    """Number of differing dots between the cell encodings of two words.

    Both words must have the same length and be fully encodable.
    """
    if len(a) != len(b):
        raise LengthMismatch(len(a), len(b), "words")
    return (table.pack_word(a) ^ table.pack_word(b)).bit_count()


def _limb_count(word_len: int) -> int:
    return max(1, -(-(6 * word_len) // _LIMB_BITS))


def _split_limbs(value: int, limbs: int) -> list[int]:
    return [(value >> (_LIMB_BITS * j)) & _LIMB_MASK for j in range(limbs)]


@dataclass(frozen=True, slots=True)
class RevisionResult:
    """Outcome of revising one token.

    ``braille_distance`` is the dot distance to the chosen word; it is 0
    exactly when the token itself is a dictionary word, and None when no
    same-length candidate existed (or the token was not encodable).
    """

    original: str
    corrected: str
    changed: bool
    braille_distance: int | None
    candidate_count: int


class BrailleCorrector:
    """Nearest same-length dictionary word under the cell-dot distance.

    Bit vectors for each length bucket are packed into uint64 rows on first
    use and scanned with the kernel backend. Ties resolve to the bucket
    order (frequency descending, then lexicographic). Tokens already in the
    lexicon are kept: their self-distance 0 cannot be beaten. Note there is
    no rejection threshold - a correct word absent from the dictionary will
    be replaced by its nearest same-length neighbour.
    """

    def __init__(self, lexicon: Lexicon, table: CodeTable):
        self.lexicon = lexicon
        self.table = table
        self._packed: dict[int, tuple[tuple[str, ...], np.ndarray]] = {}

    def _bucket(self, n: int) -> tuple[tuple[str, ...], np.ndarray]:
        cached = self._packed.get(n)
        if cached is None:
            words = self.lexicon.words_of_length(n)
            usable = [w for w in words if self.table.encodable(w)]
            if len(usable) != len(words):
                log.warning(
                    "length %d: %d dictionary words are not encodable and are "
                    "ignored as candidates", n, len(words) - len(usable),
                )
            limbs = _limb_count(n)
            matrix = np.zeros((len(usable), limbs), dtype=np.uint64)
            pack = self.table.pack_word
            for r, w in enumerate(usable):
                matrix[r, :] = _split_limbs(pack(w), limbs)
            cached = (tuple(usable), matrix)
            self._packed[n] = cached
        return cached

    def revise_word(self, word: str) -> RevisionResult:
        if not word:
            raise ValueError("cannot revise an empty word")
        query = self.table.pack_word(word)  # raises UnmappedCharacter
        if word in self.lexicon:
            count = len(self.lexicon.words_of_length(len(word)))
            return RevisionResult(word, word, False, 0, count)
        words, matrix = self._bucket(len(word))
        if not words:
            return RevisionResult(word, word, False, None, 0)
        q = np.array(_split_limbs(query, matrix.shape[1]), dtype=np.uint64)
        idx, dist = kernels.nearest_hamming(q, matrix)
        corrected = words[idx]
        return RevisionResult(word, corrected, corrected != word, dist, len(words))

    def revise_text(self, tokens: list[str]) -> tuple[list[str], list[RevisionResult]]:
        """Element-wise revision; tokens that cannot be encoded pass through."""
        out: list[str] = []
        results: list[RevisionResult] = []
        passed = 0
        for token in tokens:
            if token:
                try:
                    result = self.revise_word(token)
                    out.append(result.corrected)
                    results.append(result)
                    continue
                except UnmappedCharacter:
                    passed += 1
            out.append(token)
            results.append(RevisionResult(token, token, False, None, 0))
        if passed:
            log.debug("%d tokens passed through unrevised (not encodable)", passed)
        return out, results


def _edits1(word: str, alphabet: tuple[str, ...]) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [left + right[1:] for left, right in splits if right]
    transposes = [
        left + right[1] + right[0] + right[2:] for left, right in splits if len(right) > 1
    ]
    replaces = [left + c + right[1:] for left, right in splits if right for c in alphabet]
    inserts = [left + c + right for left, right in splits for c in alphabet]
    return set(deletes + transposes + replaces + inserts)


class FrequencyBaseline:
    """Edit-distance corrector ranked by word frequency.

    A word already in the lexicon is returned as-is. Otherwise all lexicon
    words within OSA distance ``max_distance`` are collected; distance-1
    candidates are preferred over distance-2, and the most frequent wins
    (ties break lexicographically). With no candidate the input is returned
    unchanged.

    With the compiled kernels the candidate search sweeps encoded
    same-length groups; the fallback generates the edit neighbourhood and
    filters by membership. Both produce the same candidate set.
    """

    def __init__(self, lexicon: Lexicon, max_distance: int = 2, use_scan: bool | None = None):
        if max_distance not in (1, 2):
            raise ValueError("max_distance must be 1 or 2")
        self.lexicon = lexicon
        self.max_distance = max_distance
        self.use_scan = kernels.HAS_SCAN if use_scan is None else use_scan
        if self.use_scan and not kernels.HAS_SCAN:
            raise ValueError("compiled kernels are not available for use_scan=True")
        self._alphabet = tuple(sorted(lexicon.allowed_chars))
        self._codes: dict[int, np.ndarray] = {}

    def _group_codes(self, n: int) -> np.ndarray:
        codes = self._codes.get(n)
        if codes is None:
            words = self.lexicon.words_of_length(n)
            blob = "".join(words).encode(_UTF32)
            codes = np.frombuffer(blob, dtype=np.int32).reshape(len(words), n)
            self._codes[n] = codes
        return codes

    def _tiers_scan(self, word: str) -> dict[int, list[str]]:
        tiers: dict[int, list[str]] = {1: [], 2: []}
        for n in range(max(1, len(word) - self.max_distance), len(word) + self.max_distance + 1):
            words = self.lexicon.words_of_length(n)
            if not words:
                continue
            for idx, d in kernels.osa_scan(word, self._group_codes(n), self.max_distance):
                tiers[d].append(words[idx])
        return tiers

    def _tiers_generate(self, word: str) -> dict[int, list[str]]:
        entries = self.lexicon.entries
        e1 = _edits1(word, self._alphabet)
        tier1 = {c for c in e1 if c in entries}
        tiers = {1: list(tier1), 2: []}
        if self.max_distance >= 2:
            tier2: set[str] = set()
            for e in e1:
                for c in _edits1(e, self._alphabet):
                    if (
                        c in entries
                        and c != word
                        and c not in tier1
                        and c not in tier2
                        and kernels.osa_limited(word, c, 2) <= 2
                    ):
                        tier2.add(c)
            tiers[2] = list(tier2)
        return tiers

    def correct(self, word: str) -> str:
        w = fold_apostrophes(word.lower())
        if not w:
            return word
        if w in self.lexicon.entries:
            return w
        tiers = self._tiers_scan(w) if self.use_scan else self._tiers_generate(w)
        for d in range(1, self.max_distance + 1):
            pool = tiers.get(d)
            if pool:
                return min(pool, key=self.lexicon.rank_key)
        return word

    def correct_text(self, tokens: list[str]) -> list[str]:
        cache: dict[str, str] = {}
        out = []
        for token in tokens:
            fixed = cache.get(token)
            if fixed is None:
                fixed = self.correct(token)
                cache[token] = fixed
            out.append(fixed)
        return out
