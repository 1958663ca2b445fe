"""Closed-form aligned beamformer construction.

All channels are diagonal over M symbol extensions, so they commute; the
construction exploits this.  For every receiver k != 1 and interferer
j not in {1, k} there is a diagonal *alignment operator*

    T[j, k] = inv(H[k1]) @ H[kj] @ inv(H[1j]) @ H[13]

that expresses interferer j's reach at receiver k relative to the common
reference direction (interferer 1 at receiver 1 carrying user 3's columns).
Dividing every operator by the base operator T[3, 2] leaves N = (K-1)(K-2)-1
nontrivial *generators*.  Beamformer columns are generator monomials applied
to the all-ones seed vector:

* user 3 takes all monomials of total degree <= n*, premultiplied by
  inv(T[3, 2])  ->  d3 = C(n* + N, N) columns;
* user 1 takes all monomials of total degree <= n* + 1  ->  d1 columns;
* every other user i copies user 3 through inv(H[1i]) @ H[13], which makes
  its interference land exactly on user 3's directions at receiver 1.

Because the operators commute, hitting any user-3 column with any T[j, k]
yields another monomial of degree <= n* + 1, i.e. a column of user 1's
family — interference at every receiver stays inside span(V[1]).

Columns are generated parent-to-child in graded-lexicographic order (one
generator multiply per column), which makes the construction deterministic
down to the last bit for a given channel set.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, validate_channels
from .dof import enumerate_exponents, stream_counts
from .errors import DegenerateDesignError, DimensionError, FormatError, ParameterError
from .fileio import atomic_write_text, complex_to_pair, load_json, pair_to_complex, require_key
from .numerics import DEFAULT_RANK_TOL, diag_apply, diag_inverse, matrix_rank

_FORMAT_VERSION = 1

#: Default ceiling on n*: monomial degrees beyond this exhaust double
#: precision for typical channel draws, and honest failure beats garbage.
DEFAULT_N_STAR_CAP = 6

#: Warn when the estimated column dynamic range exceeds this.
_RANGE_WARN_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """The diagonal generators that index beamformer columns.

    Attributes
    ----------
    base_inverse : inverse of the base operator T[3, 2] (length M).
    generators : N diagonals, ``base_inverse * T[l, k]`` for each pair.
    index_map : the (k, l) = (receiver, transmitter) pair behind each
        generator; lexicographically ordered with (2, 3) excluded.
    """

    base_inverse: np.ndarray
    generators: tuple[np.ndarray, ...]
    index_map: tuple[tuple[int, int], ...]


@dataclass(frozen=True, eq=False)
class BeamformingDesign:
    """A complete set of per-user beamforming matrices.

    ``V[k]`` is the M x d_k matrix of user k (1-based keys).  User 1 has
    d1 columns, everyone else d3.  Treat instances as immutable.
    """

    K: int
    M: int
    n_star: int
    V: dict[int, np.ndarray]

    @property
    def d(self) -> dict[int, int]:
        """Per-user stream counts, keyed by 1-based user index."""
        return {k: mat.shape[1] for k, mat in self.V.items()}

    @property
    def total_streams(self) -> int:
        return sum(mat.shape[1] for mat in self.V.values())


def alignment_operators(cs: ChannelSet) -> dict[tuple[int, int], np.ndarray]:
    """All alignment operators, keyed ``(j, k)`` = (transmitter, receiver).

    ``ops[(j, k)] = inv(H[k1]) * H[kj] * inv(H[1j]) * H[13]`` for
    j, k in 2..K with j != k.  Each is an invertible diagonal of length M.
    """
    validate_channels(cs)
    h13 = cs.h(1, 3)
    ops: dict[tuple[int, int], np.ndarray] = {}
    for k in range(2, cs.K + 1):
        inv_k1 = diag_inverse(cs.h(k, 1))
        for j in range(2, cs.K + 1):
            if j == k:
                continue
            ops[(j, k)] = inv_k1 * cs.h(k, j) * diag_inverse(cs.h(1, j)) * h13
    return ops


def generator_set(cs: ChannelSet) -> GeneratorSet:
    """Build the N generators from a channel set.

    Pairs (k, l) run lexicographically over receivers/transmitters 2..K with
    k != l, excluding the base pair (2, 3); e.g. K=4 gives
    [(2,4), (3,2), (3,4), (4,2), (4,3)].
    """
    ops = alignment_operators(cs)
    base_inverse = diag_inverse(ops[(3, 2)])
    pairs = tuple(
        (k, l)
        for k in range(2, cs.K + 1)
        for l in range(2, cs.K + 1)
        if l != k and (k, l) != (2, 3)
    )
    generators = tuple(base_inverse * ops[(l, k)] for (k, l) in pairs)
    return GeneratorSet(base_inverse=base_inverse, generators=generators, index_map=pairs)


def monomial_columns(generators, seed_vector, budget: int) -> np.ndarray:
    """Stack all generator monomials of total degree <= budget applied to a seed.

    Columns follow graded-lexicographic exponent order; each column is its
    parent (first nonzero exponent lowered by one) times one generator, so
    repeated calls are bit-identical.
    """
    gens = [np.asarray(g, dtype=complex) for g in generators]
    seed = np.asarray(seed_vector, dtype=complex)
    if seed.ndim != 1:
        raise DimensionError(f"seed vector must be 1-D, got shape {seed.shape}")
    for g in gens:
        if g.shape != seed.shape:
            raise DimensionError(f"generator length {g.shape} vs seed length {seed.shape}")
    vectors = enumerate_exponents(len(gens), budget)
    columns: dict[tuple[int, ...], np.ndarray] = {}
    for vec in vectors:
        if sum(vec) == 0:
            columns[vec] = seed.copy()
            continue
        i = next(idx for idx, e in enumerate(vec) if e > 0)
        parent = vec[:i] + (vec[i] - 1,) + vec[i + 1 :]
        columns[vec] = gens[i] * columns[parent]
    return np.column_stack([columns[vec] for vec in vectors])


def _diag_range(d: np.ndarray) -> float:
    mags = np.abs(d)
    return float(mags.max() / mags.min())


def _warn_if_extreme_range(gs: GeneratorSet, budget: int) -> None:
    """Estimate the worst-case column dynamic range and warn when extreme."""
    ratios = [_diag_range(g) for g in gs.generators]
    estimate = _diag_range(1.0 / gs.base_inverse) * (max(ratios) ** budget if ratios else 1.0)
    if estimate > _RANGE_WARN_LIMIT:
        warnings.warn(
            f"estimated column dynamic range {estimate:.2e} exceeds {_RANGE_WARN_LIMIT:.0e}; "
            "double-precision results may be unreliable at this budget",
            RuntimeWarning,
            stacklevel=3,
        )


def _check_build_params(cs: ChannelSet, n_star: int, n_star_cap: int | None) -> None:
    validate_channels(cs)
    if n_star < 0:
        raise ParameterError(f"n_star must be nonnegative, got {n_star}")
    if n_star_cap is not None and n_star > n_star_cap:
        raise ParameterError(
            f"n_star={n_star} exceeds the cap of {n_star_cap}; raise n_star_cap "
            "explicitly if you accept the numerical risk"
        )
    d3, d1 = stream_counts(cs.K, n_star)
    if cs.M != d3 + d1:
        raise DimensionError(
            f"budget n_star={n_star} with K={cs.K} requires M == d3 + d1 == {d3 + d1}, got M={cs.M}"
        )


def _seed_vector(cs: ChannelSet, seed_vector) -> np.ndarray:
    if seed_vector is None:
        return np.ones(cs.M, dtype=complex)
    seed = np.asarray(seed_vector, dtype=complex)
    if seed.shape != (cs.M,):
        raise DimensionError(f"seed vector must have length {cs.M}, got shape {seed.shape}")
    if not np.all(np.isfinite(seed)):
        raise ParameterError("seed vector contains non-finite entries")
    return seed


def build_v3(
    cs: ChannelSet,
    n_star: int,
    *,
    seed_vector=None,
    gens: GeneratorSet | None = None,
    n_star_cap: int | None = DEFAULT_N_STAR_CAP,
) -> np.ndarray:
    """User 3's beamformer: budget-n* monomials premultiplied by the base inverse."""
    _check_build_params(cs, n_star, n_star_cap)
    gs = gens if gens is not None else generator_set(cs)
    _warn_if_extreme_range(gs, n_star + 1)
    cols = monomial_columns(gs.generators, _seed_vector(cs, seed_vector), n_star)
    return diag_apply(gs.base_inverse, cols)


def build_v1(
    cs: ChannelSet,
    n_star: int,
    *,
    seed_vector=None,
    gens: GeneratorSet | None = None,
    n_star_cap: int | None = DEFAULT_N_STAR_CAP,
) -> np.ndarray:
    """User 1's beamformer: all monomials of budget n* + 1 (no prefactor)."""
    _check_build_params(cs, n_star, n_star_cap)
    gs = gens if gens is not None else generator_set(cs)
    _warn_if_extreme_range(gs, n_star + 1)
    return monomial_columns(gs.generators, _seed_vector(cs, seed_vector), n_star + 1)


def derive_aligned_v(cs: ChannelSet, v3: np.ndarray, i: int) -> np.ndarray:
    """Beamformer of user i (i not in {1, 3}): ``inv(H[1i]) @ H[13] @ V3``.

    This choice makes user i's interference coincide with user 3's at
    receiver 1, column for column.
    """
    validate_channels(cs)
    if i in (1, 3) or not 1 <= i <= cs.K:
        raise ParameterError(f"derived users are 2..{cs.K} excluding 3, got {i}")
    v3 = np.asarray(v3, dtype=complex)
    if v3.ndim != 2 or v3.shape[0] != cs.M:
        raise DimensionError(f"V3 must be M x d3 with M={cs.M}, got shape {v3.shape}")
    return diag_apply(diag_inverse(cs.h(1, i)) * cs.h(1, 3), v3)


def build_design(
    cs: ChannelSet,
    n_star: int,
    *,
    seed_vector=None,
    rank_tol: float = DEFAULT_RANK_TOL,
    n_star_cap: int | None = DEFAULT_N_STAR_CAP,
) -> BeamformingDesign:
    """Build and rank-validate the complete K-user design.

    Requires ``cs.M == d3 + d1`` for the budget.  Raises
    :class:`DegenerateDesignError` when any user's matrix loses full column
    rank at ``rank_tol`` — degenerate channel sets (e.g. all-identity links)
    collapse every monomial onto the seed vector and are rejected here.
    """
    _check_build_params(cs, n_star, n_star_cap)
    gs = generator_set(cs)
    v3 = build_v3(cs, n_star, seed_vector=seed_vector, gens=gs, n_star_cap=n_star_cap)
    v1 = build_v1(cs, n_star, seed_vector=seed_vector, gens=gs, n_star_cap=n_star_cap)
    V: dict[int, np.ndarray] = {1: v1, 3: v3}
    for i in range(2, cs.K + 1):
        if i != 3:
            V[i] = derive_aligned_v(cs, v3, i)
    for k in sorted(V):
        rank = matrix_rank(V[k], rank_tol)
        if rank < V[k].shape[1]:
            raise DegenerateDesignError(
                f"V[{k}] has rank {rank} < {V[k].shape[1]} at tolerance {rank_tol:g}; "
                "the channel set is too degenerate for this construction"
            )
    for mat in V.values():
        mat.setflags(write=False)
    return BeamformingDesign(K=cs.K, M=cs.M, n_star=n_star, V=V)


def save_design(design: BeamformingDesign, path: str) -> None:
    """Write a design to ``path`` (atomic; exact decimal round trip)."""
    doc = {
        "format_version": _FORMAT_VERSION,
        "K": design.K,
        "M": design.M,
        "n_star": design.n_star,
        "d": [design.V[k].shape[1] for k in range(1, design.K + 1)],
        "V": [
            [
                [complex_to_pair(design.V[k][row, col]) for row in range(design.M)]
                for col in range(design.V[k].shape[1])
            ]
            for k in range(1, design.K + 1)
        ],
    }
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")


def load_design(path: str) -> BeamformingDesign:
    """Read a design written by :func:`save_design`.

    Structural consistency (shapes against K, M, d) is enforced here; the
    alignment and rank properties are the verifier's job, so mutated but
    well-formed designs load fine and then fail verification.
    """
    doc = load_json(path)
    version = require_key(doc, "format_version", path)
    if version != _FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r}")
    K = require_key(doc, "K", path)
    M = require_key(doc, "M", path)
    n_star = require_key(doc, "n_star", path)
    d = require_key(doc, "d", path)
    users = require_key(doc, "V", path)
    if not isinstance(K, int) or K < 3:
        raise FormatError(f"{path}: K must be an integer >= 3")
    if not isinstance(M, int) or M < 1:
        raise FormatError(f"{path}: M must be a positive integer")
    if not isinstance(n_star, int) or n_star < 0:
        raise FormatError(f"{path}: n_star must be a nonnegative integer")
    if not isinstance(d, list) or len(d) != K or not all(isinstance(x, int) and x >= 1 for x in d):
        raise FormatError(f"{path}: d must list {K} positive stream counts")
    if not isinstance(users, list) or len(users) != K:
        raise FormatError(f"{path}: V must list {K} user matrices")
    V: dict[int, np.ndarray] = {}
    for idx, cols in enumerate(users):
        user = idx + 1
        if not isinstance(cols, list) or len(cols) != d[idx]:
            raise FormatError(f"{path}: V[{user}] must have {d[idx]} columns")
        mat = np.zeros((M, d[idx]), dtype=complex)
        for c, col in enumerate(cols):
            if not isinstance(col, list) or len(col) != M:
                raise FormatError(f"{path}: V[{user}] column {c} must have {M} rows")
            for r, pair in enumerate(col):
                mat[r, c] = pair_to_complex(pair, f"{path}: V[{user}] column {c} row {r}")
        if not np.all(np.isfinite(mat)):
            raise FormatError(f"{path}: V[{user}] contains non-finite entries")
        mat.setflags(write=False)
        V[user] = mat
    return BeamformingDesign(K=K, M=M, n_star=n_star, V=V)
