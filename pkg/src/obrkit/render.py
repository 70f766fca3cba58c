"""Synthetic braille documents: rendering and the two noise transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import cv2
import numpy as np

from .cells import CodeTable
from .errors import LineTooLong

WHITE = 255
BLACK = 0


@dataclass(frozen=True)
class RenderConfig:
    """Page geometry, in pixels.

    Dots are drawn as filled discs on a fixed cell lattice. The defaults are
    deliberately large: dots must keep a solid core after a sigma-5 Gaussian
    blur against the fixed binarisation threshold, and stay recoverable by a
    5x5 median after a 20 px pixel spread. Cell gaps have to straddle the
    10 px merge range used by segmentation: dot columns within a cell sit
    closer than 10 px, neighbouring cells farther apart.
    """

    dot_radius: int = 20
    dot_pitch: int = 44
    cell_pitch_x: int = 110
    cell_pitch_y: int = 160
    margin: int = 80
    max_cols: int | None = None

    def __post_init__(self):
        if min(self.dot_radius, self.dot_pitch, self.cell_pitch_x,
               self.cell_pitch_y, self.margin) <= 0:
            raise ValueError("all render dimensions must be positive")
        if self.cell_pitch_x <= 2 * self.dot_pitch:
            raise ValueError("cells overlap: need cell_pitch_x > 2 * dot_pitch")
        if self.cell_pitch_y <= 3 * self.dot_pitch:
            raise ValueError("lines overlap: need cell_pitch_y > 3 * dot_pitch")

    @property
    def cell_width(self) -> int:
        return self.dot_pitch + 2 * self.dot_radius

    @property
    def cell_height(self) -> int:
        return 2 * self.dot_pitch + 2 * self.dot_radius

    def page_size(self, n_cols: int, n_rows: int) -> tuple[int, int]:
        """(width, height) of a page holding ``n_cols`` x ``n_rows`` cells."""
        width = 2 * self.margin
        height = 2 * self.margin
        if n_cols > 0 and n_rows > 0:
            width += (n_cols - 1) * self.cell_pitch_x + self.cell_width
            height += (n_rows - 1) * self.cell_pitch_y + self.cell_height
        return width, height


DEFAULT_RENDER = RenderConfig()


def render(lines: list[str], table: CodeTable, cfg: RenderConfig = DEFAULT_RENDER) -> np.ndarray:
    """Draw text lines as black dots on a white page.

    Each character occupies one cell; the caller pre-wraps lines. A line
    longer than ``cfg.max_cols`` raises LineTooLong.
    """
    cells_per_line = []
    for line_no, line in enumerate(lines, start=1):
        if cfg.max_cols is not None and len(line) > cfg.max_cols:
            raise LineTooLong(line_no, len(line), cfg.max_cols)
        cells_per_line.append([table.encode_char(c) for c in line])
    n_cols = max((len(c) for c in cells_per_line), default=0)
    n_rows = len(cells_per_line) if n_cols else 0
    width, height = cfg.page_size(n_cols, n_rows)
    img = np.full((height, width), WHITE, dtype=np.uint8)
    for row, cells in enumerate(cells_per_line):
        y0 = cfg.margin + row * cfg.cell_pitch_y + cfg.dot_radius
        for col, cell in enumerate(cells):
            x0 = cfg.margin + col * cfg.cell_pitch_x + cfg.dot_radius
            for bit, state in enumerate(cell.dots):
                if state:
                    cx = x0 + (bit // 3) * cfg.dot_pitch
                    cy = y0 + (bit % 3) * cfg.dot_pitch
                    cv2.circle(img, (cx, cy), cfg.dot_radius, BLACK, -1)
    return img


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian with kernel radius ceil(3*sigma), clamped edges."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    ksize = 2 * math.ceil(3 * sigma) + 1
    return cv2.GaussianBlur(
        img, (ksize, ksize), sigmaX=sigma, sigmaY=sigma,
        borderType=cv2.BORDER_REPLICATE,
    )


def spread_noise(img: np.ndarray, amount: int, seed: int | tuple[int, ...]) -> np.ndarray:
    """Displace every pixel by a uniform random offset in [-amount, amount]^2.

    Offsets that fall outside the image clamp to the border. Deterministic
    for a given seed.
    """
    if amount < 0:
        raise ValueError(f"spread amount must be >= 0, got {amount}")
    if amount == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    h, w = img.shape
    dy = rng.integers(-amount, amount + 1, size=(h, w))
    dx = rng.integers(-amount, amount + 1, size=(h, w))
    yy, xx = np.indices((h, w))
    src_y = np.clip(yy + dy, 0, h - 1)
    src_x = np.clip(xx + dx, 0, w - 1)
    return img[src_y, src_x]
