"""Workbench for interference-alignment beamforming on K-user channels.

Constructs closed-form aligned beamformer designs for K-user single-antenna
frequency-selective interference channels over symbol extensions, verifies
the alignment numerically, computes exact stream-count/multiplexing-gain
trade-offs, and estimates the achieved gain from a zero-forcing link
simulation.
"""

from .beamformer import (
    BeamformingDesign,
    GeneratorSet,
    alignment_operators,
    build_design,
    build_v1,
    build_v3,
    derive_aligned_v,
    generator_set,
    load_design,
    monomial_columns,
    save_design,
)
from .channel import ChannelSet, generate_channels, load_channels, save_channels, validate_channels
from .dof import (
    GainPoint,
    best_gain_within,
    enumerate_exponents,
    gain_table,
    generator_count,
    mimo_gain,
    original_gain,
    proposed_channel_uses,
    proposed_gain,
    proposed_point,
    stream_counts,
)
from .errors import (
    DegenerateDesignError,
    DimensionError,
    FormatError,
    ParameterError,
    SingularDiagonalError,
    SingularMatrixError,
    WorkbenchError,
)
from .linksim import LinkReport, effective_channel, effective_stack, estimate_slope, sum_rate, zf_filters
from .numerics import (
    diag_apply,
    diag_inverse,
    matrix_rank,
    solve_square,
    subspace_included,
    unit_columns,
)
from .verifier import (
    AlignmentReport,
    check_effective_rank,
    check_receiver1_alignment,
    check_span_inclusions,
    verify_design,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "BeamformingDesign",
    "ChannelSet",
    "DegenerateDesignError",
    "DimensionError",
    "FormatError",
    "GainPoint",
    "GeneratorSet",
    "LinkReport",
    "ParameterError",
    "SingularDiagonalError",
    "SingularMatrixError",
    "WorkbenchError",
    "alignment_operators",
    "best_gain_within",
    "build_design",
    "build_v1",
    "build_v3",
    "check_effective_rank",
    "check_receiver1_alignment",
    "check_span_inclusions",
    "derive_aligned_v",
    "diag_apply",
    "diag_inverse",
    "effective_channel",
    "effective_stack",
    "enumerate_exponents",
    "estimate_slope",
    "gain_table",
    "generate_channels",
    "generator_count",
    "generator_set",
    "load_channels",
    "load_design",
    "matrix_rank",
    "mimo_gain",
    "monomial_columns",
    "original_gain",
    "proposed_channel_uses",
    "proposed_gain",
    "proposed_point",
    "save_channels",
    "save_design",
    "solve_square",
    "stream_counts",
    "subspace_included",
    "sum_rate",
    "unit_columns",
    "validate_channels",
    "verify_design",
    "zf_filters",
]
