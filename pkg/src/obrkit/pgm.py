"""Grayscale image I/O: binary PGM (P5) natively, PNG and friends via OpenCV.

PGM is the interchange format of the pipeline because it is bit-exact and
trivially diffable; anything else is delegated to ``cv2.imdecode``-capable
formats by file extension.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np


def read_pgm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    # header = magic, width, height, maxval; '#' comments allowed between fields
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise ValueError(f"not a binary PGM file: {path}")
    width, height, maxval = (int(f) for f in fields[1:])
    if not 0 < maxval < 256:
        raise ValueError(f"unsupported PGM maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    return pixels.reshape(height, width).copy()


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    image = np.ascontiguousarray(image, dtype=np.uint8)
    if image.ndim != 2:
        raise ValueError("expected a single-channel image")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.tobytes())


def load_image(path: str | Path) -> np.ndarray:
    """Read a grayscale image; format chosen by extension."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    img = cv2.imread(str(path), cv2.IMREAD_GRAYSCALE)
    if img is None:
        raise OSError(f"could not read image: {path}")
    return img


def save_image(path: str | Path, image: np.ndarray) -> None:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        write_pgm(path, image)
        return
    if not cv2.imwrite(str(path), np.asarray(image, dtype=np.uint8)):
        raise OSError(f"could not write image: {path}")
