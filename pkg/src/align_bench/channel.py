"""Random frequency-selective channel sets.

Over M symbol extensions a scalar frequency-selective link becomes an M x M
diagonal operator, so a K-user interference channel is a K x K grid of
diagonals.  Entries are drawn with magnitude uniform on [h_min, h_max] and
phase uniform on [0, 2*pi); with h_min > 0 every link is invertible, which
the beamformer construction relies on throughout.

User indexing is 1-based everywhere: ``cs.h(k, l)`` is the diagonal of the
link from transmitter l into receiver k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FormatError, ParameterError
from .fileio import atomic_write_text, complex_to_pair, load_json, pair_to_complex, require_key

DEFAULT_H_MIN = 0.5
DEFAULT_H_MAX = 2.0

_FORMAT_VERSION = 1

#: Relative slack when re-checking stored magnitudes against [h_min, h_max];
#: covers the one-ulp wobble of reconstructing |z| from its re/im parts.
_MAG_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """A K-user grid of diagonal channel operators over M symbol extensions.

    Attributes
    ----------
    K : number of users (>= 3).
    M : symbol-extension length (diagonal size).
    H : complex array of shape (K, K, M); ``H[k-1, l-1]`` is the diagonal of
        the link from transmitter l into receiver k.
    h_min, h_max : magnitude bounds every entry respects.
    seed : RNG seed the set was generated from (None if hand-built).
    """

    K: int
    M: int
    H: np.ndarray
    h_min: float
    h_max: float
    seed: int | None

    def h(self, k: int, l: int) -> np.ndarray:
        """Diagonal of the link from transmitter ``l`` into receiver ``k`` (1-based)."""
        if not (1 <= k <= self.K and 1 <= l <= self.K):
            raise ParameterError(f"user indices must be in 1..{self.K}, got ({k}, {l})")
        return self.H[k - 1, l - 1]


def validate_channels(cs: ChannelSet) -> None:
    """Check the ChannelSet invariants; raises on violation."""
    if cs.K < 3:
        raise ParameterError(f"need at least 3 users, got K={cs.K}")
    if cs.M < 1:
        raise ParameterError(f"need at least one symbol extension, got M={cs.M}")
    if not (0.0 < cs.h_min <= cs.h_max < float("inf")):
        raise ParameterError(f"need 0 < h_min <= h_max, got [{cs.h_min}, {cs.h_max}]")
    if cs.H.shape != (cs.K, cs.K, cs.M):
        raise DimensionError(f"channel grid shape {cs.H.shape} != {(cs.K, cs.K, cs.M)}")
    if not np.all(np.isfinite(cs.H)):
        raise FormatError("channel grid contains non-finite entries")
    mags = np.abs(cs.H)
    lo = cs.h_min * (1.0 - _MAG_SLACK)
    hi = cs.h_max * (1.0 + _MAG_SLACK)
    if mags.min() < lo or mags.max() > hi:
        k, l, i = np.unravel_index(int(np.argmin(mags)) if mags.min() < lo else int(np.argmax(mags)), mags.shape)
        raise FormatError(
            f"entry magnitude {mags[k, l, i]:.6g} at (k={k + 1}, l={l + 1}, i={i}) "
            f"outside [{cs.h_min}, {cs.h_max}]"
        )


def generate_channels(
    K: int,
    M: int,
    seed: int,
    h_min: float = DEFAULT_H_MIN,
    h_max: float = DEFAULT_H_MAX,
) -> ChannelSet:
    """Draw a channel set deterministically from ``seed``.

    Magnitudes are iid uniform on [h_min, h_max] and phases iid uniform on
    [0, 2*pi), independently for every (receiver, transmitter, extension).
    The same seed always reproduces the same set bit for bit.
    """
    if K < 3:
        raise ParameterError(f"need at least 3 users, got K={K}")
    if M < 1:
        raise ParameterError(f"need at least one symbol extension, got M={M}")
    if not (0.0 < h_min <= h_max < float("inf")):
        raise ParameterError(f"need 0 < h_min <= h_max, got [{h_min}, {h_max}]")
    rng = np.random.default_rng(seed)
    mags = rng.uniform(h_min, h_max, size=(K, K, M))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(K, K, M))
    H = mags * np.exp(1j * phases)
    H.setflags(write=False)
    cs = ChannelSet(K=K, M=M, H=H, h_min=h_min, h_max=h_max, seed=seed)
    validate_channels(cs)
    return cs


def save_channels(cs: ChannelSet, path: str) -> None:
    """Write a channel set to ``path`` (atomic; exact decimal round trip)."""
    validate_channels(cs)
    doc = {
        "format_version": _FORMAT_VERSION,
        "K": cs.K,
        "M": cs.M,
        "seed": cs.seed,
        "h_min": cs.h_min,
        "h_max": cs.h_max,
        "H": [
            [[complex_to_pair(cs.H[k, l, i]) for i in range(cs.M)] for l in range(cs.K)]
            for k in range(cs.K)
        ],
    }
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


def load_channels(path: str) -> ChannelSet:
    """Read a channel set written by :func:`save_channels`; validates invariants."""
    doc = load_json(path)
    version = require_key(doc, "format_version", path)
    if version != _FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r}")
    K = require_key(doc, "K", path)
    M = require_key(doc, "M", path)
    seed = require_key(doc, "seed", path)
    h_min = require_key(doc, "h_min", path)
    h_max = require_key(doc, "h_max", path)
    grid = require_key(doc, "H", path)
    if not isinstance(K, int) or not isinstance(M, int):
        raise FormatError(f"{path}: K and M must be integers")
    if seed is not None and not isinstance(seed, int):
        raise FormatError(f"{path}: seed must be an integer or null")
    try:
        h_min = float(h_min)
        h_max = float(h_max)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: h_min/h_max must be numbers") from exc
    if not isinstance(grid, list) or len(grid) != K:
        raise FormatError(f"{path}: H must be a list of {K} receiver rows")
    H = np.zeros((K, K, max(M, 0)), dtype=complex) if K > 0 else np.zeros((0, 0, 0), dtype=complex)
    for k, row in enumerate(grid):
        if not isinstance(row, list) or len(row) != K:
            raise FormatError(f"{path}: receiver row {k + 1} must list {K} transmitter entries")
        for l, diag in enumerate(row):
            if not isinstance(diag, list) or len(diag) != M:
                raise FormatError(f"{path}: link (k={k + 1}, l={l + 1}) must have {M} entries")
            for i, pair in enumerate(diag):
                H[k, l, i] = pair_to_complex(pair, f"{path}: link (k={k + 1}, l={l + 1}) entry {i}")
    H.setflags(write=False)
    cs = ChannelSet(K=K, M=M, H=H, h_min=h_min, h_max=h_max, seed=seed)
    validate_channels(cs)
    return cs
