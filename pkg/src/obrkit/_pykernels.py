"""Numpy/pure-python implementations of the search kernels.

Used when the compiled extension is not available. Results are identical to
the compiled versions; only the speed differs.
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def nearest_hamming(query: np.ndarray, rows: np.ndarray) -> tuple[int, int]:
    """Index and distance of the row minimising popcount(row XOR query).

    ``rows`` is a (m, k) uint64 matrix of packed bit vectors, ``query`` a
    (k,) vector. Ties resolve to the lowest index.
    """
    if rows.shape[0] == 0:
        raise ValueError("empty candidate matrix")
    dists = np.bitwise_count(rows ^ query[np.newaxis, :]).sum(axis=1)
    idx = int(np.argmin(dists))
    return idx, int(dists[idx])


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert, delete, substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        curr = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            curr[j] = min(
                prev[j] + 1,
                curr[j - 1] + 1,
                prev[j - 1] + (ca != cb),
            )
        prev = curr
    return prev[-1]


def osa_limited(a: str, b: str, limit: int) -> int:
    """Optimal-string-alignment distance, capped at ``limit + 1``.

    Like Levenshtein but with adjacent transposition as a fourth unit-cost
    operation (each character pair may be transposed at most once).
    """
    la, lb = len(a), len(b)
    if abs(la - lb) > limit:
        return limit + 1
    if a == b:
        return 0
    big = limit + 1
    prev2: list[int] = []
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        curr = [i] + [0] * lb
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cb = b[j - 1]
            d = min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + (ca != cb))
            if i > 1 and j > 1 and ca == b[j - 2] and a[i - 2] == cb:
                d = min(d, prev2[j - 2] + 1)
            curr[j] = d
        if min(curr) > limit:
            return big
        prev2, prev = prev, curr
    return min(prev[-1], big)
