"""The two evaluation harnesses and their reports.

Experiment A corrupts words directly in braille-bit space: a percentage of
the word's dot vector is flipped at distinct random positions, the vector
is decoded back to text, and both correctors try to recover the original.
Experiment B renders texts to synthetic pages, degrades the images (blur,
pixel spread), recognises them, and revises the recognised tokens.

Reports carry one row of metrics per (condition, method). Written CSVs are
byte-stable for a fixed seed: run metadata embedded in the file excludes
anything non-deterministic (timestamps stay in the in-memory report).
"""

from __future__ import annotations

import csv
import io
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .cells import CodeTable, bits_to_word, word_to_bits
from .corrector import BrailleCorrector, FrequencyBaseline
from .corpus import paginate, wrap_tokens
from .errors import CorruptionInfeasible, UnmappedCell
from .lexicon import Lexicon
from .recognize import RecognizeConfig, recognize
from .render import RenderConfig, gaussian_blur, render, spread_noise

log = logging.getLogger(__name__)

DEFAULT_SEED = 42
DEFAULT_ERROR_PERCENTS = tuple(np.arange(2.5, 30.1, 2.5).round(1).tolist())

OURS = "ours"
BASELINE = "baseline"


@dataclass(frozen=True, slots=True)
class CorruptedWord:
    """A word after bit-level corruption.

    ``flipped`` is the number of dot positions actually flipped (0 when the
    requested percentage rounds to zero); ``redraws`` counts how many flip
    sets were rejected because some corrupted cell had no character.
    """

    word: str
    flipped: int
    redraws: int


def corrupt_word(
    word: str,
    percent: float,
    rng: np.random.Generator,
    table: CodeTable,
    max_redraws: int = 200,
) -> CorruptedWord:
    """Flip ``percent`` of the word's dot vector at distinct random positions.

    The flip count is the nearest integer (ties away from zero). Flip sets
    whose corrupted cells do not all decode are redrawn; after
    ``max_redraws`` rejections CorruptionInfeasible is raised.
    """
    if not 0 < percent <= 100:
        raise ValueError(f"percent must be in (0, 100], got {percent}")
    bits = word_to_bits(word, table)
    k = int(percent / 100 * len(bits) + 0.5)
    if k == 0:
        return CorruptedWord(word, 0, 0)
    for attempt in range(max_redraws + 1):
        positions = rng.choice(len(bits), size=k, replace=False)
        corrupted = list(bits)
        for p in positions:
            corrupted[p] ^= 1
        try:
            return CorruptedWord(bits_to_word(corrupted, table), k, attempt)
        except UnmappedCell:
            continue
    raise CorruptionInfeasible(word, percent, max_redraws)


@dataclass(frozen=True, slots=True)
class Metrics:
    avg_levenshtein: float
    hit_rate: float
    char_error: float
    word_error: float
    dict_coverage: float


@dataclass(frozen=True, slots=True)
class ReportRow:
    condition: str
    method: str
    metrics: Metrics


@dataclass
class Report:
    rows: list[ReportRow]
    metadata: dict[str, str] = field(default_factory=dict)

    # metadata keys never written to disk (they would break run-to-run
    # byte identity of the CSV)
    VOLATILE = frozenset({"timestamp"})

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key in sorted(self.metadata):
            if key not in self.VOLATILE:
                buf.write(f"# {key}={self.metadata[key]}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["condition", "method", "avg_levenshtein", "hit_rate_pct",
             "char_error_pct", "word_error_pct", "dict_coverage_pct"]
        )
        for row in self.rows:
            m = row.metrics
            writer.writerow(
                [row.condition, row.method, f"{m.avg_levenshtein:.4f}",
                 f"{m.hit_rate:.4f}", f"{m.char_error:.4f}",
                 f"{m.word_error:.4f}", f"{m.dict_coverage:.4f}"]
            )
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def pretty(self) -> str:
        lines = ["condition            method    avg_lev  hit%   char_err%  word_err%  coverage%"]
        for row in self.rows:
            m = row.metrics
            lines.append(
                f"{row.condition:<20} {row.method:<9} {m.avg_levenshtein:7.3f}"
                f" {m.hit_rate:6.2f} {m.char_error:10.2f} {m.word_error:10.2f}"
                f" {m.dict_coverage:10.2f}"
            )
        return "\n".join(lines)


def _method_metrics(
    predicted: list[str],
    truth: list[str],
    recognised: list[str],
    lexicon: Lexicon,
) -> Metrics:
    """Metrics of one corrector's output against the ground truth.

    char/word error describe the uncorrected input (the recognition or
    corruption stage); they are method-independent context columns.
    """
    return Metrics(
        avg_levenshtein=metrics.avg_levenshtein(predicted, truth),
        hit_rate=metrics.hit_rate(predicted, truth),
        char_error=metrics.char_error(recognised, truth),
        word_error=metrics.word_error(recognised, truth),
        dict_coverage=metrics.dict_coverage(truth, lexicon),
    )


@dataclass(frozen=True)
class BitflipConfig:
    """Experiment A: random bit errors injected per word."""

    error_percents: tuple[float, ...] = DEFAULT_ERROR_PERCENTS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for p in self.error_percents:
            if not 0 < p <= 100:
                raise ValueError(f"error percent out of (0, 100]: {p}")


def run_bitflip_experiment(
    cfg: BitflipConfig,
    texts: list[tuple[str, list[str]]],
    lexicon: Lexicon,
    table: CodeTable,
) -> Report:
    """Corrupt every token of every text at each error level; compare both
    correctors on average edit distance and hit rate."""
    ours = BrailleCorrector(lexicon, table)
    baseline = FrequencyBaseline(lexicon)
    rows: list[ReportRow] = []
    for percent in cfg.error_percents:
        truth: list[str] = []
        corrupted: list[str] = []
        for text_index, (_, tokens) in enumerate(texts):
            for token_index, token in enumerate(tokens):
                rng = np.random.default_rng(
                    (cfg.seed, text_index, token_index)
                )
                try:
                    damaged = corrupt_word(token, percent, rng, table)
                except CorruptionInfeasible:
                    log.warning(
                        "skipping %r at %s%%: no decodable corruption",
                        token, percent,
                    )
                    continue
                truth.append(token)
                corrupted.append(damaged.word)
        revised, _ = ours.revise_text(corrupted)
        base = baseline.correct_text(corrupted)
        condition = f"bitflip {percent:g}%"
        rows.append(ReportRow(
            condition, OURS, _method_metrics(revised, truth, corrupted, lexicon)
        ))
        rows.append(ReportRow(
            condition, BASELINE, _method_metrics(base, truth, corrupted, lexicon)
        ))
    return Report(rows, _metadata(cfg.seed, lexicon, texts, {
        "percents": ",".join(f"{p:g}" for p in cfg.error_percents),
    }))


@dataclass(frozen=True, slots=True)
class NoiseSpec:
    """One image degradation: kind 'blur' (parameter = sigma) or 'spread'
    (parameter = max displacement in pixels)."""

    kind: str
    parameter: float
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in ("blur", "spread"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "blur" and self.parameter <= 0:
            raise ValueError("blur sigma must be positive")
        if self.kind == "spread" and self.parameter < 0:
            raise ValueError("spread amount must be >= 0")

    @property
    def label(self) -> str:
        return f"{self.kind} {self.parameter:g}"


DEFAULT_NOISE_SPECS = (
    NoiseSpec("blur", 3.0),
    NoiseSpec("blur", 5.0),
    NoiseSpec("spread", 10),
    NoiseSpec("spread", 20),
)


@dataclass(frozen=True)
class ImageNoiseConfig:
    """Experiment B: the full image pipeline under noise."""

    noise_specs: tuple[NoiseSpec, ...] = DEFAULT_NOISE_SPECS
    seed: int = DEFAULT_SEED
    render: RenderConfig = RenderConfig()
    recognize: RecognizeConfig = RecognizeConfig()
    max_cols: int = 24
    lines_per_page: int = 16


def _apply_noise(
    img: np.ndarray, spec: NoiseSpec | None, text_index: int, page_index: int
) -> np.ndarray:
    if spec is None:
        return img
    if spec.kind == "blur":
        return gaussian_blur(img, spec.parameter)
    return spread_noise(img, int(spec.parameter), (spec.seed, text_index, page_index))


def run_image_experiment(
    cfg: ImageNoiseConfig,
    texts: list[tuple[str, list[str]]],
    lexicon: Lexicon,
    table: CodeTable,
) -> Report:
    """Render, degrade, recognise and revise every text per condition.

    The plain (no noise) condition always runs first; it doubles as the
    clean-pipeline fidelity check.
    """
    ours = BrailleCorrector(lexicon, table)
    baseline = FrequencyBaseline(lexicon)
    pages_per_text = []
    truth_lines_per_text = []
    for _, tokens in texts:
        lines = wrap_tokens(tokens, cfg.max_cols)
        pages = paginate(lines, cfg.lines_per_page)
        pages_per_text.append([render(page, table, cfg.render) for page in pages])
        truth_lines_per_text.append([line.split() for line in lines])
    conditions: list[NoiseSpec | None] = [None, *cfg.noise_specs]
    rows: list[ReportRow] = []
    for spec in conditions:
        recognised_lines: list[list[str]] = []
        truth_lines: list[list[str]] = []
        for text_index, pages in enumerate(pages_per_text):
            for page_index, page in enumerate(pages):
                noisy = _apply_noise(page, spec, text_index, page_index)
                out = recognize(noisy, table, cfg.recognize)
                recognised_lines.extend([line.split() for line in out.text])
            truth_lines.extend(truth_lines_per_text[text_index])
        recognised, truth = metrics.align_token_lines(recognised_lines, truth_lines)
        revised, _ = ours.revise_text(recognised)
        base = baseline.correct_text(recognised)
        condition = spec.label if spec else "plain"
        rows.append(ReportRow(
            condition, OURS, _method_metrics(revised, truth, recognised, lexicon)
        ))
        rows.append(ReportRow(
            condition, BASELINE, _method_metrics(base, truth, recognised, lexicon)
        ))
    return Report(rows, _metadata(cfg.seed, lexicon, texts, {
        "noise": ",".join(s.label for s in cfg.noise_specs),
    }))


def _metadata(
    seed: int,
    lexicon: Lexicon,
    texts: list[tuple[str, list[str]]],
    extra: dict[str, str],
) -> dict[str, str]:
    meta = {
        "seed": str(seed),
        "dictionary": f"{lexicon.source or 'in-memory'} ({len(lexicon)} words)",
        "texts": ",".join(name for name, _ in texts),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    meta.update(extra)
    return meta
