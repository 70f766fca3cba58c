"""Evaluation metrics: edit distance, hit rate, char/word error, coverage."""

from __future__ import annotations

from . import kernels
from .errors import LengthMismatch
from .lexicon import Lexicon


def levenshtein(a: str, b: str) -> int:
    """Minimum number of insertions, deletions and substitutions."""
    return kernels.levenshtein(a, b)


def hit_rate(predicted: list[str], truth: list[str]) -> float:
    """Percentage of positions where the predicted token equals the truth."""
    if len(predicted) != len(truth):
        raise LengthMismatch(len(predicted), len(truth), "token lists")
    if not truth:
        return 100.0
    hits = sum(p == t for p, t in zip(predicted, truth))
    return 100.0 * hits / len(truth)


def avg_levenshtein(predicted: list[str], truth: list[str]) -> float:
    """Mean edit distance to the ground truth, per token."""
    if len(predicted) != len(truth):
        raise LengthMismatch(len(predicted), len(truth), "token lists")
    if not truth:
        return 0.0
    return sum(levenshtein(p, t) for p, t in zip(predicted, truth)) / len(truth)


def char_error(predicted: list[str], truth: list[str]) -> float:
    """Percentage of mismatched character positions over aligned tokens.

    Tokens are compared position by position; a length difference counts
    every unmatched position as an error. The denominator is the total
    number of ground-truth characters.
    """
    if len(predicted) != len(truth):
        raise LengthMismatch(len(predicted), len(truth), "token lists")
    total = sum(len(t) for t in truth)
    if total == 0:
        return 0.0
    wrong = 0
    for p, t in zip(predicted, truth):
        common = min(len(p), len(t))
        wrong += sum(pc != tc for pc, tc in zip(p, t)) + abs(len(p) - len(t))
    return 100.0 * wrong / total


def word_error(predicted: list[str], truth: list[str]) -> float:
    """Percentage of tokens that differ from the ground truth."""
    return 100.0 - hit_rate(predicted, truth)


def dict_coverage(truth: list[str], lexicon: Lexicon) -> float:
    """Percentage of ground-truth tokens present in the lexicon.

    This bounds the accuracy any dictionary-replacement corrector can reach.
    """
    if not truth:
        return 100.0
    known = sum(t in lexicon for t in truth)
    return 100.0 * known / len(truth)


def align_token_lines(
    predicted_lines: list[list[str]],
    truth_lines: list[list[str]],
) -> tuple[list[str], list[str]]:
    """Position-align recognised tokens with ground-truth tokens.

    Lines pair up by index and tokens pair up by position within the line;
    missing positions on either side become empty strings so the metric
    functions above see equal-length lists. Recognition normally preserves
    both counts; padding only kicks in under heavy noise (lost or split
    cells).
    """
    pred_out: list[str] = []
    truth_out: list[str] = []
    for i in range(max(len(predicted_lines), len(truth_lines))):
        pred = predicted_lines[i] if i < len(predicted_lines) else []
        truth = truth_lines[i] if i < len(truth_lines) else []
        width = max(len(pred), len(truth))
        pred_out.extend(pred + [""] * (width - len(pred)))
        truth_out.extend(truth + [""] * (width - len(truth)))
    return pred_out, truth_out
