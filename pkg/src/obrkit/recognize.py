"""Recognition: preprocess, segment with axis-aligned Hough lines, decode.

The page is binarised and cleaned, each braille line is merged into a solid
band by dilation, and band boundaries are read off as horizontal Hough
lines over Canny edges. The same procedure runs vertically inside every
band to find cell runs. Detected runs are then snapped to a uniform cell
lattice so that empty slots (spaces) reappear, and each slot is split into
the 3x2 dot regions; a region is a raised dot when enough of it is
foreground.

Lattice inference leans on two facts about Grade-1 cells: every mapped
non-blank cell has a dot in the left column (so run left edges are in
phase), and text lines virtually always contain a top-row dot (so the band
top anchors the dot rows). When a page is too small to measure - no
two-column cell, no adjacent cell pair - the model falls back to standard
braille proportions relative to the measured dot radius; see
:class:`RecognizeConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .cells import BrailleCell, CodeTable
from .errors import NoLinesFound, UnmappedCell

# Constants of the published preprocessing recipe.
THRESHOLD = 120
MEDIAN_SIZE = 5
OPEN_SIZE = 3
MIN_BLOB_AREA = 10

WHITE = 255


@dataclass(frozen=True)
class RecognizeConfig:
    """Tunables of segmentation and decoding.

    ``dot_ratio`` is the minimum foreground fraction for a region to count
    as a raised dot. ``merge_extent`` is the dilation reach that fuses dot
    rows/columns of one cell without bridging neighbouring cells; it must
    exceed the intra-cell dot gap and stay below the inter-cell gap.
    ``pitch_ratio`` (dot pitch / dot radius) and ``cell_gap_ratio`` (gap
    between cells / cell width) are the proportion priors used when the
    page offers nothing to measure.
    """

    dot_ratio: float = 0.2
    merge_extent: int = 10
    canny_low: int = 50
    canny_high: int = 150
    pitch_ratio: float = 2.4
    cell_gap_ratio: float = 0.25
    fallback_char: str = "?"


DEFAULT_RECOGNIZE = RecognizeConfig()


@dataclass(frozen=True)
class SegmentationGrid:
    """Detected line bands and, per band, the cell slot intervals."""

    row_bands: tuple[tuple[int, int], ...]
    cell_bands: tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class RecognitionOutput:
    text: tuple[str, ...]
    cells_total: int
    cells_failed: int
    grid: SegmentationGrid

    @property
    def lines(self) -> list[str]:
        return list(self.text)


def preprocess(img: np.ndarray) -> np.ndarray:
    """Binarise and clean a page; output keeps document polarity (dots dark).

    Steps: fixed threshold (dark = dot), 5x5 median, 3x3 opening, removal
    of foreground blobs with area below 10 (8-connectivity).
    """
    mask = ((img < THRESHOLD) * 255).astype(np.uint8)
    mask = cv2.medianBlur(mask, MEDIAN_SIZE)
    kernel = np.ones((OPEN_SIZE, OPEN_SIZE), np.uint8)
    mask = cv2.morphologyEx(mask, cv2.MORPH_OPEN, kernel)
    n, labels, stats, _ = cv2.connectedComponentsWithStats(mask, connectivity=8)
    small = np.flatnonzero(stats[:, cv2.CC_STAT_AREA] < MIN_BLOB_AREA)
    if small.size:
        mask[np.isin(labels, small[small > 0])] = 0
    return (WHITE - mask).astype(np.uint8)


def _foreground(binary: np.ndarray) -> np.ndarray:
    """0/255 mask of the dots in a document-polarity image."""
    return ((binary < 128) * 255).astype(np.uint8)


def _line_positions(edges: np.ndarray, min_frac: float = 0.5) -> list[int]:
    """Axis-aligned Hough peaks: rows whose edge count spans the image."""
    counts = (edges > 0).sum(axis=1)
    hits = np.flatnonzero(counts >= min_frac * edges.shape[1])
    lines: list[int] = []
    start = prev = None
    for r in hits:
        if start is None:
            start = prev = r
        elif r - prev <= 2:
            prev = r
        else:
            lines.append((start + prev) // 2)
            start = prev = r
    if start is not None:
        lines.append((start + prev) // 2)
    return lines


def _intervals_between(boundaries: list[int], filled: np.ndarray) -> list[tuple[int, int]]:
    """Intervals between consecutive boundaries whose midpoint is filled."""
    out = []
    for a, b in zip(boundaries, boundaries[1:]):
        if b - a >= 2 and filled[(a + b) // 2]:
            out.append((a, b))
    return out


def segment_rows(binary: np.ndarray, cfg: RecognizeConfig = DEFAULT_RECOGNIZE) -> list[tuple[int, int]]:
    """Content-tight (top, stop) row intervals, one per braille line."""
    mask = _foreground(binary)
    if not mask.any():
        raise NoLinesFound()
    tall = cv2.dilate(mask, np.ones((cfg.merge_extent, 1), np.uint8))
    row_filled = tall.max(axis=1) > 0
    band_img = np.where(row_filled[:, None], WHITE, 0).astype(np.uint8)
    band_img = np.broadcast_to(band_img, mask.shape).copy()
    edges = cv2.Canny(band_img, cfg.canny_low, cfg.canny_high)
    boundaries = [0, *_line_positions(edges), mask.shape[0]]
    bands = []
    for a, b in _intervals_between(boundaries, row_filled):
        rows = np.flatnonzero(mask[a:b].any(axis=1))
        if rows.size:
            bands.append((a + int(rows[0]), a + int(rows[-1]) + 1))
    if not bands:
        raise NoLinesFound()
    return bands


def _filter_runs(
    runs: list[tuple[int, int]], cfg: RecognizeConfig
) -> list[tuple[int, int]]:
    """Drop runs too narrow to be a dot column (noise clumps)."""
    floor = 1.5 * cfg.merge_extent
    return [r for r in runs if r[1] - r[0] >= floor]


def _merge_close_runs(
    runs: list[tuple[int, int]], pitch: float
) -> list[tuple[int, int]]:
    """Fuse runs whose left edges are closer than a cell pitch.

    Sparse cells can split into their two dot columns when noise erodes the
    bridge between them; the split halves sit one dot pitch apart, well
    under the cell pitch, so a 0.55 * pitch threshold separates the cases.
    """
    merged: list[tuple[int, int]] = []
    for left, right in runs:
        if merged and left - merged[-1][0] < 0.55 * pitch:
            merged[-1] = (merged[-1][0], max(merged[-1][1], right))
        else:
            merged.append((left, right))
    return merged


def _detect_and_model(
    mask: np.ndarray,
    bands: list[tuple[int, int]],
    cfg: RecognizeConfig,
) -> tuple[list[list[tuple[int, int]]], _GridModel]:
    """Cell runs per band plus the fitted grid model.

    Detection runs in two passes. The first pass applies a coarse width
    floor and fits a provisional grid; the second uses that grid to fuse
    runs of cells that split at their column gap and to reject debris
    clumps (heavy spread noise deposits those between cells, where they
    would otherwise become phantom slots), then refits.
    """
    runs_per_band = [
        _filter_runs(_cell_runs(mask[top:stop, :], cfg), cfg) for top, stop in bands
    ]
    grid = _estimate_grid(mask, bands, runs_per_band, cfg)
    min_width = 1.5 * grid.dot_radius
    min_area = 0.35 * math.pi * grid.dot_radius**2
    refined = []
    for (top, stop), runs in zip(bands, runs_per_band):
        kept = []
        for left, right in _merge_close_runs(runs, grid.cell_pitch):
            if right - left < min_width:
                continue
            if np.count_nonzero(mask[top:stop, left:right]) < min_area:
                continue
            kept.append((left, right))
        refined.append(kept)
    if refined != runs_per_band:
        grid = _estimate_grid(mask, bands, refined, cfg)
    return refined, grid


def _cell_runs(band_mask: np.ndarray, cfg: RecognizeConfig) -> list[tuple[int, int]]:
    """Content-tight (left, stop) column intervals of the visible cells."""
    if not band_mask.any():
        return []
    fat = cv2.dilate(band_mask, np.ones((1, cfg.merge_extent), np.uint8))
    col_filled = fat.max(axis=0) > 0
    col_img = np.where(col_filled[None, :], WHITE, 0).astype(np.uint8)
    col_img = np.broadcast_to(col_img, band_mask.shape).copy()
    edges = cv2.Canny(col_img, cfg.canny_low, cfg.canny_high)
    counts = (edges > 0).sum(axis=0)
    hits = np.flatnonzero(counts >= 0.5 * band_mask.shape[0])
    lines: list[int] = []
    start = prev = None
    for c in hits:
        if start is None:
            start = prev = c
        elif c - prev <= 2:
            prev = c
        else:
            lines.append((start + prev) // 2)
            start = prev = c
    if start is not None:
        lines.append((start + prev) // 2)
    boundaries = [0, *lines, band_mask.shape[1]]
    runs = []
    for a, b in _intervals_between(boundaries, col_filled):
        cols = np.flatnonzero(band_mask[:, a:b].any(axis=0))
        if cols.size:
            runs.append((a + int(cols[0]), a + int(cols[-1]) + 1))
    return runs


@dataclass(frozen=True)
class _GridModel:
    """Document-level cell geometry estimated from the image.

    One dot pitch serves both directions; braille cells are near-square and
    the renderer uses a single pitch too.
    """

    dot_radius: float
    dot_pitch: float
    cell_pitch: float

    @property
    def cell_width(self) -> float:
        return self.dot_pitch + 2 * self.dot_radius

    @property
    def cell_height(self) -> float:
        return 2 * self.dot_pitch + 2 * self.dot_radius


def _median_dot_radius(mask: np.ndarray) -> float:
    n, _, stats, _ = cv2.connectedComponentsWithStats(mask, connectivity=8)
    areas = stats[1:, cv2.CC_STAT_AREA].astype(np.float64)
    if areas.size == 0:
        return 1.0
    return max(1.0, float(np.median(np.sqrt(areas / math.pi))))


def _normalized_median(diffs: list[float], prior: float, rounds: int = 2) -> float:
    """Median of diffs after dividing each by its nearest multiple count."""
    estimate = prior
    for _ in range(rounds):
        scaled = [d / max(1, round(d / estimate)) for d in diffs]
        estimate = float(np.median(scaled))
    return estimate


def _dot_geometry(
    mask: np.ndarray,
    bands: list[tuple[int, int]],
    runs_per_band: list[list[tuple[int, int]]],
    cfg: RecognizeConfig,
) -> tuple[float, float]:
    """(dot_radius, dot_pitch) from run-width and band-height statistics.

    Widths of two-column runs measure dot_pitch + 2r and full bands measure
    2 * dot_pitch + 2r, which pins both values without relying on blob
    centroids (blobs merge under blur). Pages without those cues fall back
    to single-column widths and finally to proportion priors around the
    median blob radius.
    """
    widths = [float(stop - left) for runs in runs_per_band for left, stop in runs]
    heights = [float(stop - top) for top, stop in bands]
    wide = float(np.percentile(widths, 90)) if widths else 0.0
    narrow = float(np.percentile(widths, 10)) if widths else 0.0
    tall = float(np.percentile(heights, 90)) if heights else 0.0

    def sane(radius: float, pitch: float) -> bool:
        return radius >= 2.0 and 1.2 * radius <= pitch <= 4.0 * radius

    # Full-width runs + full-height bands: two equations, two unknowns.
    pitch = tall - wide
    radius = wide - tall / 2
    if sane(radius, pitch):
        return radius, pitch
    # Distinct single-column and two-column width classes.
    if widths and narrow <= 0.7 * wide:
        radius, pitch = narrow / 2, wide - narrow
        if sane(radius, pitch):
            return radius, pitch
    # Proportion prior around the blob radius (tiny or degenerate pages).
    radius = _median_dot_radius(mask)
    if wide >= 3.1 * radius:  # blobs are single dots, runs span two columns
        pitch = wide - 2 * radius
        if sane(radius, pitch):
            return radius, pitch
    return radius, cfg.pitch_ratio * radius


def _estimate_grid(
    mask: np.ndarray,
    bands: list[tuple[int, int]],
    runs_per_band: list[list[tuple[int, int]]],
    cfg: RecognizeConfig,
) -> _GridModel:
    radius, dot_pitch = _dot_geometry(mask, bands, runs_per_band, cfg)
    cell_width = dot_pitch + 2 * radius
    pitch_prior = cell_width * (1 + cfg.cell_gap_ratio)
    lefts_diffs = [
        float(b[0] - a[0])
        for runs in runs_per_band
        for a, b in zip(runs, runs[1:])
    ]
    cell_pitch = _normalized_median(lefts_diffs, pitch_prior) if lefts_diffs else pitch_prior
    cell_pitch = max(cell_pitch, cell_width)
    return _GridModel(radius, dot_pitch, cell_pitch)


def _band_slots(
    runs: list[tuple[int, int]],
    grid: _GridModel,
    left_origin: float | None,
) -> list[float]:
    """Left edges of every cell slot in a band, blanks included."""
    if not runs:
        return []
    slots: list[float] = []
    first = float(runs[0][0])
    if left_origin is not None:
        lead = round((first - left_origin) / grid.cell_pitch)
        for k in range(lead, 0, -1):
            slots.append(first - k * grid.cell_pitch)
    slots.append(first)
    for (a, _), (b, _) in zip(runs, runs[1:]):
        steps = max(1, round((b - a) / grid.cell_pitch))
        for j in range(1, steps):
            slots.append(a + j * (b - a) / steps)
        slots.append(float(b))
    return slots


def _region_pattern(
    mask: np.ndarray,
    top: float,
    left: float,
    cell_h: float,
    cell_w: float,
    dot_ratio: float,
) -> tuple[int, ...]:
    """Split a cell box into 3x2 regions and threshold each on foreground."""
    h_img, w_img = mask.shape
    row_edges = [top + cell_h * k / 3 for k in range(4)]
    col_edges = [left, left + cell_w / 2, left + cell_w]
    bits = []
    for bit in range(6):
        col, row = bit // 3, bit % 3
        r0 = min(max(int(round(row_edges[row])), 0), h_img)
        r1 = min(max(int(round(row_edges[row + 1])), 0), h_img)
        c0 = min(max(int(round(col_edges[col])), 0), w_img)
        c1 = min(max(int(round(col_edges[col + 1])), 0), w_img)
        area = (r1 - r0) * (c1 - c0)
        if area <= 0:
            bits.append(0)
            continue
        fg = int(np.count_nonzero(mask[r0:r1, c0:c1]))
        bits.append(1 if fg >= dot_ratio * area else 0)
    return tuple(bits)


def segment_cells(
    band: np.ndarray, cfg: RecognizeConfig = DEFAULT_RECOGNIZE
) -> list[tuple[int, int]]:
    """Cell slot (left, stop) intervals of one band image, blanks included.

    Interior and leading/trailing geometry is inferred from this band
    alone; :func:`recognize` uses document-wide estimates instead.
    """
    mask = _foreground(band)
    rows = np.flatnonzero(mask.any(axis=1))
    if rows.size == 0:
        return []
    content = (int(rows[0]), int(rows[-1]) + 1)
    runs_per_band, grid = _detect_and_model(mask, [content], cfg)
    if not runs_per_band[0]:
        return []
    slots = _band_slots(runs_per_band[0], grid, left_origin=None)
    width = int(round(grid.cell_width))
    return [(int(round(s)), int(round(s)) + width) for s in slots]


def decode_cell_image(
    cell_img: np.ndarray,
    table: CodeTable,
    cfg: RecognizeConfig = DEFAULT_RECOGNIZE,
) -> str:
    """Decode one full cell box (3 dot rows x 2 dot columns) to a character."""
    mask = _foreground(cell_img)
    h, w = mask.shape
    bits = _region_pattern(mask, 0.0, 0.0, float(h), float(w), cfg.dot_ratio)
    return table.decode_cell(BrailleCell(bits))


def recognize(
    img: np.ndarray,
    table: CodeTable,
    cfg: RecognizeConfig = DEFAULT_RECOGNIZE,
) -> RecognitionOutput:
    """Full pipeline: preprocess, segment, decode every cell slot.

    A blank page yields an empty output rather than an error. Cells whose
    dot pattern is not in the table decode to ``cfg.fallback_char`` and are
    counted in ``cells_failed``.
    """
    binary = preprocess(img)
    try:
        bands = segment_rows(binary, cfg)
    except NoLinesFound:
        return RecognitionOutput((), 0, 0, SegmentationGrid((), ()))
    mask = _foreground(binary)
    runs_per_band, grid = _detect_and_model(mask, bands, cfg)
    left_origin = min(
        (runs[0][0] for runs in runs_per_band if runs), default=None
    )
    lines: list[str] = []
    slot_boxes: list[tuple[tuple[int, int], ...]] = []
    total = failed = 0
    width = int(round(grid.cell_width))
    for (top, stop), runs in zip(bands, runs_per_band):
        slots = _band_slots(runs, grid, left_origin)
        chars = []
        boxes = []
        for left in slots:
            bits = _region_pattern(
                mask, float(top), left, grid.cell_height, grid.cell_width,
                cfg.dot_ratio,
            )
            total += 1
            try:
                chars.append(table.decode_cell(BrailleCell(bits)))
            except UnmappedCell:
                chars.append(cfg.fallback_char)
                failed += 1
            boxes.append((int(round(left)), int(round(left)) + width))
        lines.append("".join(chars).rstrip())
        slot_boxes.append(tuple(boxes))
    grid_out = SegmentationGrid(tuple(bands), tuple(slot_boxes))
    return RecognitionOutput(tuple(lines), total, failed, grid_out)
