"""Exact stream-count and multiplexing-gain combinatorics.

Everything here is integer/rational arithmetic (``math.comb`` and
``fractions.Fraction``); no floating point enters any gain value.

The proposed construction indexes beamformer columns by exponent vectors
in Z^N with N = (K-1)(K-2) - 1 generators.  A budget-b family therefore has
C(b + N, N) columns, giving user 3 (budget n*) d3 = C(n* + N, N) streams and
user 1 (budget n* + 1) d1 = C(n* + N + 1, N) streams over M = d3 + d1
symbol extensions; every user other than 1 carries d3 streams.  The
single-parameter comparison scheme uses d3 = (m+1)^N and d1 = (m+2)^N over
their sum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import ParameterError


def generator_count(K: int) -> int:
    """Number of independent column generators: (K-1)(K-2) - 1."""
    if K < 3:
        raise ParameterError(f"need at least 3 users, got K={K}")
    return (K - 1) * (K - 2) - 1


def _compositions(total: int, parts: int):
    """All length-``parts`` nonnegative vectors summing to ``total``, lex ascending."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        vec = []
        prev = -1
        for b in bars:
            vec.append(b - prev - 1)
            prev = b
        vec.append(total + parts - 2 - prev)
        yield tuple(vec)


def enumerate_exponents(N: int, budget: int) -> list[tuple[int, ...]]:
    """All exponent vectors in Z_{>=0}^N with coordinate sum <= budget.

    Ordered graded-lexicographically: by total degree first, then plain
    lexicographic within a degree.  The list has exactly C(budget + N, N)
    entries.
    """
    if N < 1:
        raise ParameterError(f"need at least one generator, got N={N}")
    if budget < 0:
        raise ParameterError(f"budget must be nonnegative, got {budget}")
    out: list[tuple[int, ...]] = []
    for degree in range(budget + 1):
        out.extend(_compositions(degree, N))
    return out


def stream_counts(K: int, n_star: int) -> tuple[int, int]:
    """(d3, d1): streams for user 3 (= every user but 1) and for user 1."""
    N = generator_count(K)
    if n_star < 0:
        raise ParameterError(f"n_star must be nonnegative, got {n_star}")
    return comb(n_star + N, N), comb(n_star + N + 1, N)


def proposed_channel_uses(K: int, n_star: int) -> int:
    """Symbol extensions consumed by the proposed design: d3 + d1."""
    d3, d1 = stream_counts(K, n_star)
    return d3 + d1


def _closed_form_gain(Q: int, n_star: int) -> Fraction:
    """Gain of a Q-user proposed design: (Q*n* + Q + N) / (2n* + N + 2)."""
    N = (Q - 1) * (Q - 2) - 1
    return Fraction(Q * n_star + Q + N, 2 * n_star + N + 2)


def proposed_gain(K: int, n_star: int) -> Fraction:
    """Exact multiplexing gain of the proposed design.

    Equals ((K-1)*d3 + d1) / (d3 + d1); strictly increasing in n_star and
    strictly below K/2.
    """
    generator_count(K)  # domain check
    if n_star < 0:
        raise ParameterError(f"n_star must be nonnegative, got {n_star}")
    return _closed_form_gain(K, n_star)


@dataclass(frozen=True)
class GainPoint:
    """One (scheme, parameter) operating point of a gain-vs-cost trade-off.

    ``envelope_gain`` is the best gain achieved by the same scheme at any
    channel-use cost up to and including this point (filled by
    :func:`gain_table`).
    """

    scheme: str
    param: int
    channel_uses: int
    streams_total: int
    gain: Fraction
    envelope_gain: Fraction | None = None

    def __post_init__(self):
        if self.channel_uses < 1 or self.streams_total < 1:
            raise ParameterError("channel uses and stream totals must be positive")
        if self.gain != Fraction(self.streams_total, self.channel_uses):
            raise ParameterError("gain must equal streams_total / channel_uses exactly")


def _make_point(scheme: str, param: int, K: int, d3: int, d1: int) -> GainPoint:
    streams = (K - 1) * d3 + d1
    uses = d3 + d1
    gain = Fraction(streams, uses)
    if not 1 <= gain < Fraction(K, 2):
        raise ParameterError(f"gain {gain} outside [1, K/2) for K={K}")
    return GainPoint(scheme=scheme, param=param, channel_uses=uses, streams_total=streams, gain=gain)


def proposed_point(K: int, n_star: int) -> GainPoint:
    """The proposed design's operating point at budget ``n_star``."""
    d3, d1 = stream_counts(K, n_star)
    return _make_point("proposed", n_star, K, d3, d1)


def original_gain(K: int, m: int) -> GainPoint:
    """Operating point of the single-parameter comparison scheme.

    With N = (K-1)(K-2) - 1 generators it spends (m+1)^N + (m+2)^N symbol
    extensions for (K-1)(m+1)^N + (m+2)^N streams.
    """
    N = generator_count(K)
    if m < 0:
        raise ParameterError(f"m must be nonnegative, got {m}")
    return _make_point("original", m, K, (m + 1) ** N, (m + 2) ** N)


def gain_table(K: int, max_channel_uses: int) -> list[GainPoint]:
    """All operating points of both schemes within a channel-use budget.

    Returns the proposed points (n* ascending) followed by the original
    points (m ascending); each scheme is sorted by channel uses and carries
    its running best-gain envelope.
    """
    if max_channel_uses < 3:
        raise ParameterError(f"max_channel_uses must be at least 3, got {max_channel_uses}")
    generator_count(K)  # domain check
    points: list[GainPoint] = []
    for maker in (proposed_point, original_gain):
        block: list[GainPoint] = []
        param = 0
        while True:
            point = maker(K, param)
            if point.channel_uses > max_channel_uses:
                break
            block.append(point)
            param += 1
        best: Fraction | None = None
        for i, point in enumerate(block):
            best = point.gain if best is None else max(best, point.gain)
            block[i] = replace(point, envelope_gain=best)
        points.extend(block)
    return points


def best_gain_within(points: Iterable[GainPoint], budget: int) -> Fraction | None:
    """Best gain among ``points`` with channel_uses <= budget (None if none fit)."""
    feasible = [p.gain for p in points if p.channel_uses <= budget]
    return max(feasible) if feasible else None


def mimo_gain(K: int, M_ant: int, n_star: int) -> Fraction:
    """Gain of the design applied to K users with M_ant antennas each.

    Treating each antenna as a virtual user yields the K*M_ant-user formula
    with N' = (K*M_ant - 1)(K*M_ant - 2) - 1; M_ant = 1 reduces to
    :func:`proposed_gain`.
    """
    generator_count(K)  # domain check
    if M_ant < 1:
        raise ParameterError(f"antenna count must be positive, got {M_ant}")
    if n_star < 0:
        raise ParameterError(f"n_star must be nonnegative, got {n_star}")
    return _closed_form_gain(K * M_ant, n_star)
