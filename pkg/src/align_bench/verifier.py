"""Independent verification that a design actually aligns interference.

Three numerical checks, plus exact stream-count bookkeeping:

1. *Receiver-1 alignment*: for every user i not in {1, 3}, the interference
   H[1i] @ V[i] must equal the reference H[13] @ V[3] exactly (relative
   Frobenius residual below a tight tolerance).
2. *Span inclusions*: for every ordered pair (k, l) of receivers and
   interferers in 2..K (including the base pair), the moved columns
   T[l, k] @ V[3] must lie inside span(V[1]).  This is the alignment
   condition at every receiver other than 1.
3. *Effective rank*: stacking desired and interference blocks at every
   receiver must give a full-rank M x M matrix, otherwise aligned and
   desired directions overlap and zero-forcing cannot separate them.

Failures are recorded in the report, never raised; only genuinely
inconsistent inputs (mismatched K or M) raise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beamformer import BeamformingDesign, alignment_operators
from .channel import ChannelSet
from .dof import stream_counts
from .linksim import _check_pair, effective_stack
from .numerics import condition_indicator, diag_apply, matrix_rank, span_inclusion_ranks, unit_columns

#: Default tolerance for the rank/inclusion checks.
DEFAULT_VERIFY_TOL = 1e-8

#: Default tolerance for the receiver-1 alignment residual.
DEFAULT_ALIGNMENT_TOL = 1e-10


@dataclass(frozen=True)
class InclusionCheck:
    """Span-inclusion verdict for one (receiver, transmitter) pair."""

    included: bool
    rank_v1: int
    rank_joint: int


@dataclass(frozen=True)
class EffectiveRankCheck:
    """Rank of one receiver's effective channel, with a conditioning hint."""

    rank: int
    required: int
    condition: float


@dataclass(eq=False)
class AlignmentReport:
    """Aggregated verification outcome; ``overall`` is the conjunction."""

    tolerance: float
    alignment_tolerance: float
    alignment_residuals: dict[int, float]
    alignment_ok: bool
    inclusions: dict[tuple[int, int], InclusionCheck]
    inclusions_ok: bool
    effective: dict[int, EffectiveRankCheck]
    effective_ok: bool
    stream_counts_expected: tuple[int, int]
    stream_counts_actual: dict[int, int]
    stream_counts_ok: bool
    beamformer_ranks: dict[int, tuple[int, int]]
    beamformer_ranks_ok: bool
    overall: bool = False
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        """JSON-ready view: one record per check plus the failure list."""
        return {
            "overall": self.overall,
            "tolerance": self.tolerance,
            "alignment_tolerance": self.alignment_tolerance,
            "alignment": {
                "ok": self.alignment_ok,
                "residuals": {str(i): r for i, r in sorted(self.alignment_residuals.items())},
            },
            "inclusions": {
                "ok": self.inclusions_ok,
                "pairs": {
                    f"({k},{l})": {
                        "included": chk.included,
                        "rank_v1": chk.rank_v1,
                        "rank_joint": chk.rank_joint,
                    }
                    for (k, l), chk in sorted(self.inclusions.items())
                },
            },
            "effective_rank": {
                "ok": self.effective_ok,
                "receivers": {
                    str(k): {"rank": chk.rank, "required": chk.required, "condition": chk.condition}
                    for k, chk in sorted(self.effective.items())
                },
            },
            "stream_counts": {
                "ok": self.stream_counts_ok,
                "expected": {"user1": self.stream_counts_expected[1], "others": self.stream_counts_expected[0]},
                "actual": {str(k): v for k, v in sorted(self.stream_counts_actual.items())},
            },
            "beamformer_rank": {
                "ok": self.beamformer_ranks_ok,
                "users": {
                    str(k): {"rank": rank, "required": req}
                    for k, (rank, req) in sorted(self.beamformer_ranks.items())
                },
            },
            "failures": list(self.failures),
        }


def check_receiver1_alignment(
    cs: ChannelSet, design: BeamformingDesign, tol: float = DEFAULT_ALIGNMENT_TOL
) -> dict[int, float]:
    """Relative residuals ||H[1i] V[i] - H[13] V[3]|| / ||H[13] V[3]||.

    One entry per user i not in {1, 3}; the construction makes these exact,
    so anything above ``tol`` (default 1e-10) indicates a broken design.
    The tolerance is applied by the caller; this returns the raw residuals.
    """
    _check_pair(cs, design)
    reference = diag_apply(cs.h(1, 3), design.V[3])
    ref_norm = float(np.linalg.norm(reference))
    if ref_norm == 0.0:
        # A zeroed-out V[3] gives no reference to align against; report the
        # worst residual everywhere instead of raising so the report completes.
        return {i: float("inf") for i in range(2, cs.K + 1) if i != 3}
    residuals: dict[int, float] = {}
    for i in range(2, cs.K + 1):
        if i == 3:
            continue
        if design.V[i].shape[1] != design.V[3].shape[1]:
            # Column counts differ: report the worst possible residual
            # rather than raising, so verification always completes.
            residuals[i] = float("inf")
            continue
        moved = diag_apply(cs.h(1, i), design.V[i])
        residuals[i] = float(np.linalg.norm(moved - reference)) / ref_norm
    return residuals


def check_span_inclusions(
    cs: ChannelSet, design: BeamformingDesign, tol: float = DEFAULT_VERIFY_TOL
) -> dict[tuple[int, int], InclusionCheck]:
    """Span-inclusion verdicts for every ordered pair (k, l), k != l, in 2..K.

    Pair (k, l) checks that interferer l's columns, moved to receiver k by
    the alignment operator, stay inside span(V[1]).  The base pair (2, 3)
    is included: its operator maps V[3] onto plain monomial columns, which
    are the low-degree part of V[1].
    """
    _check_pair(cs, design)
    ops = alignment_operators(cs)
    v1 = design.V[1]
    results: dict[tuple[int, int], InclusionCheck] = {}
    for k in range(2, cs.K + 1):
        for l in range(2, cs.K + 1):
            if l == k:
                continue
            moved = diag_apply(ops[(l, k)], design.V[3])
            included, rank_v1, rank_joint = span_inclusion_ranks(moved, v1, tol)
            results[(k, l)] = InclusionCheck(included=included, rank_v1=rank_v1, rank_joint=rank_joint)
    return results


def check_effective_rank(
    cs: ChannelSet, design: BeamformingDesign, tol: float = DEFAULT_VERIFY_TOL
) -> dict[int, EffectiveRankCheck]:
    """Rank of every receiver's effective channel; must equal M everywhere.

    A design whose stacked blocks are not square (wrong stream totals) is
    reported as rank-deficient rather than raising, so mutated designs
    still produce a complete report.
    """
    _check_pair(cs, design)
    results: dict[int, EffectiveRankCheck] = {}
    for k in range(1, cs.K + 1):
        stack = effective_stack(cs, design, k)
        rank = matrix_rank(stack, tol)
        cond = condition_indicator(unit_columns(stack))
        results[k] = EffectiveRankCheck(rank=rank, required=cs.M, condition=cond)
    return results


def verify_design(
    cs: ChannelSet,
    design: BeamformingDesign,
    tol: float = DEFAULT_VERIFY_TOL,
    alignment_tol: float = DEFAULT_ALIGNMENT_TOL,
) -> AlignmentReport:
    """Run every check and aggregate an :class:`AlignmentReport`.

    ``tol`` drives the rank/inclusion decisions, ``alignment_tol`` the
    receiver-1 residual comparison.  All failures land in the report (and
    its ``failures`` list); only K/M mismatches between the two inputs
    raise.
    """
    _check_pair(cs, design)
    failures: list[str] = []

    residuals = check_receiver1_alignment(cs, design, alignment_tol)
    alignment_ok = all(r <= alignment_tol for r in residuals.values())
    for i, r in sorted(residuals.items()):
        if r > alignment_tol:
            failures.append(f"alignment residual at receiver 1 for user {i}: {r:.3e} > {alignment_tol:g}")

    inclusions = check_span_inclusions(cs, design, tol)
    inclusions_ok = all(chk.included for chk in inclusions.values())
    for (k, l), chk in sorted(inclusions.items()):
        if not chk.included:
            failures.append(
                f"span inclusion violated for pair (k={k}, l={l}): "
                f"rank grew {chk.rank_v1} -> {chk.rank_joint}"
            )

    effective = check_effective_rank(cs, design, tol)
    effective_ok = all(chk.rank == chk.required for chk in effective.values())
    for k, chk in sorted(effective.items()):
        if chk.rank != chk.required:
            failures.append(f"effective channel at receiver {k} has rank {chk.rank} < {chk.required}")

    d3, d1 = stream_counts(cs.K, design.n_star)
    actual = design.d
    stream_ok = actual.get(1) == d1 and all(actual.get(k) == d3 for k in range(2, cs.K + 1))
    if not stream_ok:
        failures.append(
            f"stream counts {sorted(actual.items())} do not match the budget "
            f"(expected user 1: {d1}, every other user: {d3})"
        )

    beamformer_ranks: dict[int, tuple[int, int]] = {}
    beamformer_ok = True
    for k in range(1, cs.K + 1):
        rank = matrix_rank(design.V[k], tol)
        required = design.V[k].shape[1]
        beamformer_ranks[k] = (rank, required)
        if rank < required:
            beamformer_ok = False
            failures.append(f"beamformer V[{k}] has rank {rank} < {required}")

    overall = alignment_ok and inclusions_ok and effective_ok and stream_ok and beamformer_ok
    return AlignmentReport(
        tolerance=tol,
        alignment_tolerance=alignment_tol,
        alignment_residuals=residuals,
        alignment_ok=alignment_ok,
        inclusions=inclusions,
        inclusions_ok=inclusions_ok,
        effective=effective,
        effective_ok=effective_ok,
        stream_counts_expected=(d3, d1),
        stream_counts_actual=actual,
        stream_counts_ok=stream_ok,
        beamformer_ranks=beamformer_ranks,
        beamformer_ranks_ok=beamformer_ok,
        overall=overall,
        failures=failures,
    )
