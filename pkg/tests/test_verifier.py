"""Unit tests for the design verifier."""

import json

import numpy as np
import pytest

from align_bench.beamformer import build_design
from align_bench.channel import generate_channels
from align_bench.dof import stream_counts
from align_bench.errors import DimensionError
from align_bench.verifier import (
    check_effective_rank,
    check_receiver1_alignment,
    check_span_inclusions,
    verify_design,
)

from conftest import replace_user


def _case(K, n_star, seed=0):
    d3, d1 = stream_counts(K, n_star)
    cs = generate_channels(K, d3 + d1, seed=seed)
    return cs, build_design(cs, n_star)


class TestHealthyDesigns:
    @pytest.mark.parametrize("K,n_star", [(3, 0), (3, 1), (4, 0), (5, 0)])
    def test_all_checks_pass(self, K, n_star):
        cs, design = _case(K, n_star)
        report = verify_design(cs, design)
        assert report.overall
        assert report.failures == []
        assert report.alignment_ok and report.inclusions_ok and report.effective_ok
        assert report.stream_counts_ok and report.beamformer_ranks_ok
        assert all(r <= 1e-10 for r in report.alignment_residuals.values())
        assert all(chk.included for chk in report.inclusions.values())
        assert all(chk.rank == cs.M for chk in report.effective.values())

    def test_alignment_residual_per_derived_user(self):
        cs, design = _case(4, 0)
        residuals = check_receiver1_alignment(cs, design)
        assert set(residuals) == {2, 4}
        assert max(residuals.values()) <= 1e-12

    def test_inclusion_pair_set_includes_base_pair(self):
        cs, design = _case(4, 0)
        inclusions = check_span_inclusions(cs, design)
        want = {(k, l) for k in range(2, 5) for l in range(2, 5) if k != l}
        assert set(inclusions) == want
        assert (2, 3) in inclusions
        for chk in inclusions.values():
            assert chk.included
            assert chk.rank_joint == chk.rank_v1 == design.V[1].shape[1]

    def test_effective_rank_full_everywhere(self):
        cs, design = _case(3, 1)
        effective = check_effective_rank(cs, design)
        assert set(effective) == {1, 2, 3}
        for chk in effective.values():
            assert chk.rank == chk.required == cs.M
            assert 1.0 <= chk.condition < float("inf")


class TestMutatedDesigns:
    def test_scaled_interferer_breaks_alignment_only(self):
        cs, design = _case(3, 1)
        bad = replace_user(design, 2, 2.0 * design.V[2])
        report = verify_design(cs, bad)
        assert not report.overall
        assert not report.alignment_ok
        assert report.alignment_residuals[2] == pytest.approx(1.0, rel=1e-9)
        # Scaling preserves spans and ranks, so every other check still passes.
        assert report.inclusions_ok and report.effective_ok
        assert report.stream_counts_ok and report.beamformer_ranks_ok
        assert any("alignment residual" in f and "user 2" in f for f in report.failures)

    def test_random_interferer_flags_only_that_user(self):
        cs, design = _case(4, 0)
        rng = np.random.default_rng(13)
        shape = design.V[2].shape
        bad = replace_user(design, 2, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        report = verify_design(cs, bad)
        assert not report.alignment_ok
        assert report.alignment_residuals[2] > 0.1
        assert report.alignment_residuals[4] <= 1e-12
        assert report.stream_counts_ok

    def test_dropped_column_hits_streams_and_rank(self):
        cs, design = _case(3, 0)
        bad = replace_user(design, 1, design.V[1][:, :-1])
        report = verify_design(cs, bad)  # must not raise
        assert not report.overall
        assert not report.stream_counts_ok
        assert not report.effective_ok
        assert any("stream counts" in f for f in report.failures)

    def test_random_reference_user_breaks_inclusions(self):
        cs, design = _case(3, 1)
        rng = np.random.default_rng(17)
        shape = design.V[3].shape
        bad = replace_user(design, 3, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        report = verify_design(cs, bad)
        assert not report.inclusions_ok
        broken = [chk for chk in report.inclusions.values() if not chk.included]
        assert broken
        assert all(chk.rank_joint > chk.rank_v1 for chk in broken)
        assert any("span inclusion violated" in f for f in report.failures)

    def test_zeroed_reference_user_completes_with_failures(self):
        cs, design = _case(3, 0)
        bad = replace_user(design, 3, np.zeros_like(design.V[3]))
        report = verify_design(cs, bad)  # must not raise
        assert not report.overall
        assert report.alignment_residuals[2] == float("inf")
        assert not report.beamformer_ranks_ok
        assert any("V[3]" in f for f in report.failures)

    def test_tolerance_is_respected(self):
        cs, design = _case(3, 0)
        nudged = replace_user(design, 2, (1.0 + 1e-6) * design.V[2])
        strict = verify_design(cs, nudged, alignment_tol=1e-10)
        assert not strict.alignment_ok and not strict.overall
        loose = verify_design(cs, nudged, alignment_tol=1e-3)
        assert loose.alignment_ok and loose.overall


class TestInputConsistency:
    def test_mismatched_user_count_raises(self):
        cs3, design3 = _case(3, 0)
        cs4 = generate_channels(4, 3, seed=1)
        with pytest.raises(DimensionError):
            verify_design(cs4, design3)

    def test_mismatched_extension_count_raises(self):
        cs, design = _case(3, 0)
        other = generate_channels(3, 5, seed=1)
        with pytest.raises(DimensionError):
            verify_design(other, design)


class TestReportSerialization:
    def test_to_dict_round_trips_through_json(self):
        cs, design = _case(3, 0)
        report = verify_design(cs, design)
        doc = json.loads(json.dumps(report.to_dict()))
        assert doc["overall"] is True
        assert doc["alignment"]["ok"] is True
        assert doc["inclusions"]["pairs"]["(2,3)"]["included"] is True
        assert doc["effective_rank"]["receivers"]["1"]["rank"] == cs.M
        assert doc["stream_counts"]["expected"] == {"user1": 2, "others": 1}
        assert doc["failures"] == []

    def test_failure_report_serializes(self):
        cs, design = _case(3, 0)
        bad = replace_user(design, 2, 3.0 * design.V[2])
        doc = verify_design(cs, bad).to_dict()
        assert doc["overall"] is False
        assert doc["failures"]
        json.dumps(doc)
