"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own computational paths:
rank is re-derived by hand-rolled Gauss-Jordan elimination, exponent
enumeration by a recursive nested loop.
"""

from __future__ import annotations

import numpy as np

from align_bench.beamformer import BeamformingDesign
from align_bench.channel import ChannelSet


def gauss_rank(a, tol: float = 1e-9) -> int:
    """Rank via plain row reduction with partial pivoting (test oracle)."""
    m = [list(row) for row in np.asarray(a, dtype=complex)]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    scale = max((abs(x) for row in m for x in row), default=0.0)
    if scale == 0.0:
        return 0
    rank = 0
    row = 0
    for col in range(cols):
        piv, best = None, tol * scale
        for r in range(row, rows):
            if abs(m[r][col]) > best:
                piv, best = r, abs(m[r][col])
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for r in range(rows):
            if r != row and m[r][col] != 0:
                f = m[r][col] / m[row][col]
                for c in range(col, cols):
                    m[r][c] -= f * m[row][c]
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def brute_force_exponents(N: int, budget: int) -> list[tuple[int, ...]]:
    """All nonnegative integer vectors of length N with sum <= budget (test oracle)."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int) -> None:
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], budget)
    return out


def identity_channels(K: int, M: int) -> ChannelSet:
    """A fully degenerate channel set: every link is the identity."""
    H = np.ones((K, K, M), dtype=complex)
    H.setflags(write=False)
    return ChannelSet(K=K, M=M, H=H, h_min=1.0, h_max=1.0, seed=None)


def scalar_channels(entries: dict[tuple[int, int], complex], K: int = 3) -> ChannelSet:
    """An M=1 channel set with hand-picked entries (1-based keys, default 1)."""
    H = np.ones((K, K, 1), dtype=complex)
    for (k, l), value in entries.items():
        H[k - 1, l - 1, 0] = value
    mags = np.abs(H)
    H.setflags(write=False)
    return ChannelSet(K=K, M=1, H=H, h_min=float(mags.min()), h_max=float(mags.max()), seed=None)


def replace_user(design: BeamformingDesign, user: int, matrix: np.ndarray) -> BeamformingDesign:
    """Copy of a design with one user's beamformer swapped out."""
    V = dict(design.V)
    V[user] = np.asarray(matrix, dtype=complex)
    return BeamformingDesign(K=design.K, M=design.M, n_star=design.n_star, V=V)
