import dataclasses
import json
import math

import numpy as np
import pytest

from beamsquint.array_model import ArrayGeometry, fine_beam_weights
from beamsquint.codebook import (
    Beam,
    Codebook,
    CodebookFormatError,
    design_no_squint,
    design_with_squint,
    max_antennas,
    max_fractional_bandwidth,
    min_size_no_squint,
)
from beamsquint.squint import BandSpec, CoverageInterval, half_power_beamwidth

from recurrence_oracle import oracle_min_size, oracle_sizes

BAND = BandSpec(0.0342)


class TestMinSizeNoSquint:
    def test_full_range_16(self):
        assert min_size_no_squint(16, 1.0) == 19

    def test_larger_array(self):
        assert min_size_no_squint(32, 1.0) == 37

    def test_half_range(self):
        assert min_size_no_squint(16, 0.5) == 10

    def test_exact_tiling_boundary(self):
        # psi_m an exact multiple of the width must not add a beam
        assert min_size_no_squint(4, 0.443) == 2


class TestDesignNoSquint:
    def test_19_beam_layout(self):
        book = design_no_squint(16, 1.0)
        assert book.size == 19
        assert book.parity == "odd"
        foci = [b.psi0 for b in book.beams]
        assert foci[9] == 0.0
        assert foci[-1] == pytest.approx(9 * 0.110750, abs=1e-12)  # 0.99675
        assert foci[0] == pytest.approx(-0.99675, abs=1e-12)

    def test_odd_parity_37(self):
        book = design_no_squint(32, 1.0)
        assert book.size == 37
        assert book.parity == "odd"

    def test_even_tiling(self):
        book = design_no_squint(4, 0.443)
        assert book.size == 2
        assert [b.psi0 for b in book.beams] == pytest.approx([-0.2215, 0.2215], abs=1e-12)

    def test_tiles_without_overlap(self):
        book = design_no_squint(16, 1.0)
        width = half_power_beamwidth(16)
        for left, right in zip(book.beams, book.beams[1:]):
            assert right.coverage.lo - left.coverage.hi == pytest.approx(0.0, abs=1e-12)
            assert left.coverage.width == pytest.approx(width, abs=1e-12)

    def test_complete_coverage(self):
        for n in (2, 7, 16, 33):
            for psi_m in (0.25, 0.7, 1.0):
                assert design_no_squint(n, psi_m).coverage_gaps() == []


class TestDesignWithSquint:
    def test_squint_size_16(self):
        outcome = design_with_squint(16, BAND, 1.0)
        assert outcome.feasible
        assert outcome.size == 22
        assert outcome.codebook.parity == "even"

    def test_odd_and_even_candidates_match_recurrence(self):
        # N=16, b=0.0342: the odd procedure yields 23, the even one 22
        assert oracle_sizes(16, 0.0342) == (23, 22)
        assert oracle_sizes(32, 0.0342) == (57, 58)

    def test_squint_size_32(self):
        outcome = design_with_squint(32, BAND, 1.0)
        assert outcome.size == 57
        assert outcome.codebook.parity == "odd"

    def test_zero_bandwidth_degenerates(self):
        outcome = design_with_squint(16, BandSpec(0.0), 1.0)
        assert outcome.size == design_no_squint(16, 1.0).size == 19

    def test_matches_recurrence_oracle_across_grid(self):
        for n in (4, 8, 16, 24, 32, 64):
            for b in (0.0, 0.005, 0.0179, 0.0342, 0.0714):
                expected = oracle_min_size(n, b)
                outcome = design_with_squint(n, BandSpec(b), 1.0)
                if expected is None:
                    assert not outcome.feasible
                else:
                    assert outcome.size == expected, (n, b)

    def test_abutting_coverage(self):
        book = design_with_squint(16, BAND, 1.0).codebook
        positive = [b for b in book.beams if b.psi0 > 0]
        for left, right in zip(positive, positive[1:]):
            assert right.coverage.lo == pytest.approx(left.coverage.hi, abs=1e-12)

    def test_complete_coverage(self):
        for n, b in ((8, 0.0179), (16, 0.0342), (32, 0.0342), (64, 0.0179)):
            book = design_with_squint(n, BandSpec(b), 1.0).codebook
            assert book.coverage_gaps() == []

    def test_outermost_overshoot_allowed(self):
        book = design_with_squint(16, BAND, 1.0).codebook
        assert book.beams[-1].coverage.hi >= 1.0

    def test_symmetry(self):
        for n, b in ((16, 0.0342), (32, 0.0342), (16, 0.0)):
            book = design_with_squint(n, BandSpec(b), 1.0).codebook
            foci = sorted(bm.psi0 for bm in book.beams)
            mirrored = sorted(-f for f in foci)
            assert foci == pytest.approx(mirrored, abs=0.0)
            has_center = any(f == 0.0 for f in foci)
            assert has_center == (book.parity == "odd")

    def test_minimal_tiling(self):
        book = design_with_squint(16, BAND, 1.0).codebook
        for drop in range(book.size):
            remaining = tuple(b for i, b in enumerate(book.beams) if i != drop)
            thinned = dataclasses.replace(book, beams=remaining)
            assert thinned.coverage_gaps() != []

    def test_size_monotone_in_bandwidth(self):
        sizes = [design_with_squint(16, BandSpec(b), 1.0).size for b in np.linspace(0, 0.10, 21)]
        assert all(s1 <= s2 for s1, s2 in zip(sizes, sizes[1:]))

    def test_size_monotone_in_antennas(self):
        sizes = [design_with_squint(n, BAND, 1.0).size for n in range(4, 52)]
        assert all(s1 <= s2 for s1, s2 in zip(sizes, sizes[1:]))

    def test_divergence_near_bound(self):
        # size grows without bound approaching the feasibility limit
        bound = max_fractional_bandwidth(16, 1.0)
        near = design_with_squint(16, BandSpec(0.999 * bound), 1.0).size
        mid = design_with_squint(16, BandSpec(0.5 * bound), 1.0).size
        assert near > 4 * mid


class TestFeasibility:
    def test_bandwidth_bound_values(self):
        assert max_fractional_bandwidth(16, 1.0) == pytest.approx(0.110750, abs=1e-15)
        assert max_fractional_bandwidth(32, 1.0) == pytest.approx(0.055375, abs=1e-15)
        assert max_fractional_bandwidth(16, 0.5) == pytest.approx(0.221500, abs=1e-15)

    def test_antenna_bound_values(self):
        assert max_antennas(BandSpec(0.0342), 1.0) == 51
        assert max_antennas(BandSpec(0.0714), 1.0) == 24
        assert max_antennas(BandSpec(0.11075), 1.0) == 16

    def test_zero_bandwidth_unbounded(self):
        assert max_antennas(BandSpec(0.0), 1.0) is None

    def test_feasible_just_below_bound(self):
        outcome = design_with_squint(16, BandSpec(0.1107), 1.0)
        assert outcome.feasible
        assert outcome.size > 100

    def test_infeasible_at_and_above_bound(self):
        for b in (0.1108, 0.110750, 0.2):
            outcome = design_with_squint(16, BandSpec(b), 1.0)
            assert not outcome.feasible
            inf = outcome.infeasibility
            assert inf.max_fractional_bandwidth == pytest.approx(0.110750, abs=1e-12)
            assert inf.fractional_bandwidth == b
            with pytest.raises(ValueError):
                _ = outcome.size

    def test_beyond_max_antennas_infeasible(self):
        band = BandSpec(0.0714)
        assert design_with_squint(24, band, 1.0).feasible
        assert not design_with_squint(25, band, 1.0).feasible


class TestDegeneracyAcrossSizes:
    def test_zero_squint_equals_plain_tiling(self):
        for n in range(2, 65):
            for psi_m in (0.25, 0.5, 1.0):
                squint_size = design_with_squint(n, BandSpec(0.0), psi_m).size
                assert squint_size == min_size_no_squint(n, psi_m), (n, psi_m)


class TestSerialization:
    def test_round_trip(self):
        book = design_with_squint(16, BAND, 1.0).codebook
        clone = Codebook.from_json(book.to_json())
        assert clone.size == book.size
        assert clone.parity == book.parity
        assert clone.psi_m == book.psi_m
        assert clone.band.fractional_bandwidth == book.band.fractional_bandwidth
        for a, b in zip(clone.beams, book.beams):
            assert a.psi0 == b.psi0
            assert np.array_equal(a.weights, b.weights)
            assert (a.coverage.lo, a.coverage.hi) == (b.coverage.lo, b.coverage.hi)

    def test_schema_key_order_and_fields(self):
        doc = design_no_squint(16, 1.0).to_dict()
        assert list(doc) == [
            "n_antennas",
            "spacing_ratio",
            "fractional_bandwidth",
            "psi_m",
            "threshold_ratio",
            "parity",
            "size",
            "beams",
        ]
        assert list(doc["beams"][0]) == ["index", "psi0", "theta0_deg", "phases_rad", "coverage"]

    def test_missing_key_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        del doc["psi_m"]
        with pytest.raises(CodebookFormatError, match="psi_m"):
            Codebook.from_dict(doc)

    def test_wrong_phase_count_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        doc["beams"][0]["phases_rad"] = doc["beams"][0]["phases_rad"][:-1]
        with pytest.raises(CodebookFormatError, match="phases_rad"):
            Codebook.from_dict(doc)

    def test_inconsistent_phases_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        doc["beams"][0]["phases_rad"][3] += 0.01
        with pytest.raises(CodebookFormatError, match="fine-beam"):
            Codebook.from_dict(doc)

    def test_size_mismatch_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        doc["size"] = 5
        with pytest.raises(CodebookFormatError, match="size"):
            Codebook.from_dict(doc)

    def test_unsorted_beams_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        doc["beams"] = list(reversed(doc["beams"]))
        with pytest.raises(CodebookFormatError, match="sorted"):
            Codebook.from_dict(doc)

    def test_non_half_wavelength_rejected(self):
        doc = design_no_squint(16, 1.0).to_dict()
        doc["spacing_ratio"] = 0.6
        with pytest.raises(CodebookFormatError, match="spacing_ratio"):
            Codebook.from_dict(doc)

    def test_bad_json_rejected(self):
        with pytest.raises(CodebookFormatError, match="invalid JSON"):
            Codebook.from_json("{not json")

    def test_unphysical_focus_serializes_as_null(self):
        geom = ArrayGeometry(16, 0.5)
        beam = Beam(0, 1.05, fine_beam_weights(geom, 1.05), CoverageInterval(0.9, 1.1))
        assert beam.theta0_deg is None
        book = Codebook(
            beams=(beam,),
            psi_m=1.0,
            band=BAND,
            geometry=geom,
            threshold=design_no_squint(16, 1.0).threshold,
        )
        doc = json.loads(book.to_json())
        assert doc["beams"][0]["theta0_deg"] is None
        assert Codebook.from_dict(doc).beams[0].psi0 == 1.05
