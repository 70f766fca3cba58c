"""Selects the compiled search kernels, falling back to numpy/pure python.

``BACKEND`` names the implementation in use. The compiled extension also
provides :func:`osa_scan`, which the frequency baseline uses to sweep whole
length groups; callers must check :data:`HAS_SCAN` before relying on it.
"""

from __future__ import annotations

try:
    from obrkit._kernels import (  # type: ignore[attr-defined]
        levenshtein,
        nearest_hamming,
        osa_limited,
        osa_scan,
    )

    BACKEND = "compiled"
    HAS_SCAN = True
except ImportError:  # pragma: no cover - exercised only without the extension
    from obrkit._pykernels import levenshtein, nearest_hamming, osa_limited

    osa_scan = None
    BACKEND = "python"
    HAS_SCAN = False

__all__ = [
    "BACKEND",
    "HAS_SCAN",
    "levenshtein",
    "nearest_hamming",
    "osa_limited",
    "osa_scan",
]
