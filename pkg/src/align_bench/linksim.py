"""Zero-forcing link-level simulation of an aligned design.

At receiver 1 the desired block is H[11] @ V[1] and all interference lands
on H[13] @ V[3]; at receiver k >= 2 the desired block is H[kk] @ V[k] and
all interference lands on H[k1] @ V[1].  Stacking desired-then-interference
gives a square M x M *effective channel* whose inverse rows are the
zero-forcing filters: a filter nulls every interference direction exactly,
so with per-stream power p = snr / total_streams (equal split across all
transmitters, unit-norm beam columns, unit-variance noise) stream i sees
SINR_i = p / ||w_i||^2 and the network sum rate is
sum_i log2(1 + SINR_i).

The multiplexing gain is estimated as the high-SNR slope of that sum rate
against log2(snr), normalized by the M symbol extensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .beamformer import BeamformingDesign
from .channel import ChannelSet, validate_channels
from .dof import proposed_gain
from .errors import DimensionError, ParameterError
from .numerics import DEFAULT_RANK_TOL, diag_apply, solve_square


def _check_pair(cs: ChannelSet, design: BeamformingDesign) -> None:
    validate_channels(cs)
    if design.K != cs.K:
        raise DimensionError(f"design has K={design.K}, channels have K={cs.K}")
    if design.M != cs.M:
        raise DimensionError(f"design has M={design.M}, channels have M={cs.M}")
    for k in range(1, cs.K + 1):
        if k not in design.V:
            raise DimensionError(f"design is missing V[{k}]")
        if design.V[k].shape[0] != cs.M:
            raise DimensionError(f"V[{k}] has {design.V[k].shape[0]} rows, expected {cs.M}")


def effective_stack(cs: ChannelSet, design: BeamformingDesign, k: int) -> np.ndarray:
    """Receiver k's effective channel before normalization.

    Desired block first, then the interference basis; shared by the verifier
    (rank checks) and the simulator (ZF filters) so both see the exact same
    matrix.
    """
    _check_pair(cs, design)
    if not 1 <= k <= cs.K:
        raise ParameterError(f"receiver index must be in 1..{cs.K}, got {k}")
    if k == 1:
        desired = diag_apply(cs.h(1, 1), design.V[1])
        interference = diag_apply(cs.h(1, 3), design.V[3])
    else:
        desired = diag_apply(cs.h(k, k), design.V[k])
        interference = diag_apply(cs.h(k, 1), design.V[1])
    return np.hstack([desired, interference])


def effective_channel(cs: ChannelSet, design: BeamformingDesign, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Receiver k's column-normalized effective channel and the scale factors.

    Returns ``(matrix, scales)`` where ``matrix`` is square M x M with
    unit-norm columns and ``scales[j]`` is the Euclidean norm the j-th
    column was divided by.
    """
    stack = effective_stack(cs, design, k)
    if stack.shape[1] != cs.M:
        raise DimensionError(
            f"receiver {k} effective channel is {stack.shape[0]} x {stack.shape[1]}; "
            f"a square matrix needs d_k + interference == M == {cs.M}"
        )
    scales = np.linalg.norm(stack, axis=0)
    if np.any(scales == 0.0):
        raise ParameterError(f"receiver {k} effective channel has a zero column")
    return stack / scales, scales


def zf_filters(cs: ChannelSet, design: BeamformingDesign, k: int, tol_rel: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Zero-forcing receive filters for receiver k, one row per desired stream.

    Rows are the first d_k rows of the inverse of the normalized effective
    channel, so ``filters @ effective == [I_{d_k} | 0]``: unit response on
    the own stream, exact nulls on every other direction.
    """
    matrix, _ = effective_channel(cs, design, k)
    inverse = solve_square(matrix, np.eye(cs.M, dtype=complex), tol_rel)
    return inverse[: design.V[k].shape[1], :]


def _stream_noise_powers(cs: ChannelSet, design: BeamformingDesign, tol_rel: float) -> list[float]:
    """||w_i||^2 for every stream of every receiver (SNR-independent)."""
    powers: list[float] = []
    for k in range(1, cs.K + 1):
        filters = zf_filters(cs, design, k, tol_rel)
        powers.extend(float(x) for x in np.sum(np.abs(filters) ** 2, axis=1))
    return powers


def _rate_from_noise(noise_powers: list[float], snr: float, total_streams: int) -> float:
    p = snr / total_streams
    return float(sum(math.log2(1.0 + p / g) for g in noise_powers))


def sum_rate(cs: ChannelSet, design: BeamformingDesign, snr: float, tol_rel: float = DEFAULT_RANK_TOL) -> float:
    """Network sum rate in bits per symbol extension block at linear ``snr``.

    ``snr`` is the total transmit power across all users over unit-variance
    noise; it is split equally over all streams.
    """
    if not snr > 0.0:
        raise ParameterError(f"snr must be positive, got {snr}")
    _check_pair(cs, design)
    return _rate_from_noise(_stream_noise_powers(cs, design, tol_rel), snr, design.total_streams)


@dataclass(frozen=True)
class LinkReport:
    """Result of a rate sweep plus the measured multiplexing-gain slope."""

    snr_grid_db: tuple[float, ...]
    sum_rate_bits: tuple[float, ...]
    slope_streams: float
    normalized_slope: float
    target_gain: Fraction
    relative_deviation: float


def estimate_slope(
    cs: ChannelSet,
    design: BeamformingDesign,
    snr_lo_db: float,
    snr_hi_db: float,
    steps: int = 11,
    tol_rel: float = DEFAULT_RANK_TOL,
) -> LinkReport:
    """Sweep the sum rate over an SNR window and read off the rate slope.

    ``slope_streams`` is (R(hi) - R(lo)) / (log2(snr_hi) - log2(snr_lo)),
    which approaches the total stream count at high SNR;
    ``normalized_slope`` divides by M and is compared against the design's
    exact gain.  Requires ``snr_hi_db > snr_lo_db >= 20`` and ``steps >= 2``.
    """
    if not snr_lo_db >= 20.0:
        raise ParameterError(f"snr_lo_db must be at least 20 dB, got {snr_lo_db}")
    if not snr_hi_db > snr_lo_db:
        raise ParameterError(f"need snr_hi_db > snr_lo_db, got {snr_hi_db} <= {snr_lo_db}")
    if steps < 2:
        raise ParameterError(f"need at least 2 sweep points, got {steps}")
    _check_pair(cs, design)
    noise = _stream_noise_powers(cs, design, tol_rel)
    total = design.total_streams
    grid = np.linspace(snr_lo_db, snr_hi_db, steps)
    rates = [_rate_from_noise(noise, 10.0 ** (db / 10.0), total) for db in grid]
    log2_span = (snr_hi_db - snr_lo_db) / 10.0 * math.log2(10.0)
    slope = (rates[-1] - rates[0]) / log2_span
    normalized = slope / cs.M
    target = proposed_gain(design.K, design.n_star)
    deviation = abs(normalized - float(target)) / float(target)
    return LinkReport(
        snr_grid_db=tuple(float(db) for db in grid),
        sum_rate_bits=tuple(rates),
        slope_streams=slope,
        normalized_slope=normalized,
        target_gain=target,
        relative_deviation=deviation,
    )
