import dataclasses
import math

import pytest

from beamsquint.codebook import design_no_squint, design_with_squint
from beamsquint.squint import BandSpec, half_power_beamwidth, numeric_coverage, squinted_coverage
from beamsquint.verification import sweep_size_vs_b, sweep_size_vs_n, verify_codebook

BAND = BandSpec(0.0342)


@pytest.fixture(scope="module")
def book16():
    return design_with_squint(16, BAND, 1.0).codebook


class TestVerifyCodebook:
    def test_designed_codebook_passes(self, book16):
        report = verify_codebook(book16, slack_db=0.2)
        assert report.passed
        assert report.gaps == ()
        assert report.worst_gain_db >= report.threshold_db - 0.2
        # the 1.772/N tiling edges sit a hair above the exact threshold
        assert report.worst_gain_db == pytest.approx(-3.0001293502383026, abs=1e-9)
        assert report.worst_psi == pytest.approx(0.0, abs=1e-12)

    def test_report_is_deterministic(self, book16):
        a = verify_codebook(book16, psi_step=1e-3)
        b = verify_codebook(book16, psi_step=1e-3)
        assert a == b

    def test_pass_iff_no_gap_iff_worst_above_threshold(self, book16):
        report = verify_codebook(book16, psi_step=1e-3, slack_db=0.0)
        assert report.passed == (len(report.gaps) == 0)
        assert report.passed == (report.worst_gain_db >= report.threshold_db - report.slack_db)

    def test_removed_beam_opens_gap(self, book16):
        # drop the first positive-focus beam; its coverage is the hole
        victim = next(b for b in book16.beams if b.psi0 > 0)
        thinned = dataclasses.replace(
            book16, beams=tuple(b for b in book16.beams if b is not victim)
        )
        report = verify_codebook(thinned, slack_db=0.0)
        assert not report.passed
        assert len(report.gaps) == 1
        gap = report.gaps[0]
        expected = squinted_coverage(victim.psi0, BAND, 16)
        assert gap.width == pytest.approx(expected.width, abs=1.5e-3)  # ~0.108888
        assert gap.lo == pytest.approx(expected.lo, abs=1e-3)
        assert gap.hi == pytest.approx(expected.hi, abs=1e-3)

    def test_no_squint_design_fails_under_squint(self):
        # the motivating defect: a squint-blind codebook loses the band edges
        # of the outer beams
        book = dataclasses.replace(design_no_squint(16, 1.0), band=BAND)
        report = verify_codebook(book, slack_db=0.2)
        assert not report.passed
        assert report.gaps
        # seams fail once |psi| is large enough for the squint shift to bite;
        # broadside stays covered and the damage grows toward |psi| = 1
        assert all(min(abs(g.lo), abs(g.hi)) > 0.15 for g in report.gaps)
        widths = [g.width for g in report.gaps if g.lo > 0]
        assert widths == sorted(widths)
        assert abs(report.worst_psi) > 0.9

    def test_gain_relative_to_peak_is_negative(self, book16):
        report = verify_codebook(book16, psi_step=1e-3)
        assert report.worst_gain_db < 0.0

    def test_report_to_dict(self, book16):
        doc = verify_codebook(book16, psi_step=1e-3).to_dict()
        assert doc["pass"] is True
        assert doc["gaps"] == []
        assert doc["n_antennas"] == 16
        assert doc["xi_points"] == 65

    def test_validates_parameters(self, book16):
        with pytest.raises(ValueError):
            verify_codebook(book16, psi_step=0.0)
        with pytest.raises(ValueError):
            verify_codebook(book16, slack_db=-0.1)


class TestAnalyticNumericAgreement:
    def test_every_beam_remeasured(self, book16):
        width = half_power_beamwidth(16)
        for beam in book16.beams[::3]:
            measured = numeric_coverage(beam.psi0, BAND, 16)
            assert measured is not None
            assert abs(measured.lo - beam.coverage.lo) < 0.01 * width
            assert abs(measured.hi - beam.coverage.hi) < 0.01 * width


class TestSweeps:
    def test_size_vs_b_values(self):
        table = sweep_size_vs_b([16], [0.0, 0.0342, 0.12], 1.0)
        assert table.axis == "fractional_bandwidth"
        (series,) = table.series
        assert series.label == "N=16"
        sizes = [p.size for p in series.points]
        assert sizes == [19, 22, None]
        assert all(p.bound == pytest.approx(0.110750, abs=1e-12) for p in series.points)

    def test_size_vs_b_multiple_series(self):
        table = sweep_size_vs_b([16, 32], [0.0, 0.0342], 1.0)
        assert [s.label for s in table.series] == ["N=16", "N=32"]
        assert [p.size for p in table.series[1].points] == [37, 57]

    def test_size_vs_n_values(self):
        table = sweep_size_vs_n([0.0714], range(20, 28), 1.0)
        (series,) = table.series
        feasible = [int(p.axis_value) for p in series.points if p.feasible]
        assert max(feasible) == 24  # the feasibility asymptote
        assert series.points[0].bound == 24.0

    def test_size_vs_n_known_values(self):
        table = sweep_size_vs_n([0.0179, 0.0342], [16, 32], 1.0)
        by_label = {s.label: [p.size for p in s.points] for s in table.series}
        assert by_label["b=0.0342"] == [22, 57]
        assert by_label["b=0.0179"][0] == 20  # between the 19 and 22 brackets
        assert 19 <= by_label["b=0.0179"][0] <= 22

    def test_infeasible_markers_match_bound(self):
        bound = 0.110750
        grid = [0.100, 0.105, 0.110, 0.1105, 0.1108, 0.112, 0.115]
        table = sweep_size_vs_b([16], grid, 1.0)
        for point in table.series[0].points:
            assert point.feasible == (point.axis_value < bound)

    def test_first_infeasible_brackets_bound_within_one_step(self):
        grid = [round(0.10 + 0.002 * i, 6) for i in range(11)]  # 0.100 .. 0.120
        table = sweep_size_vs_b([16], grid, 1.0)
        statuses = [p.feasible for p in table.series[0].points]
        flip = statuses.index(False)
        assert statuses[flip:] == [False] * (len(grid) - flip)
        assert grid[flip - 1] < 0.110750 <= grid[flip]

    def test_deterministic(self):
        a = sweep_size_vs_b([16], [0.0, 0.05], 1.0)
        b = sweep_size_vs_b([16], [0.0, 0.05], 1.0)
        assert a == b

    def test_csv_rendering(self):
        table = sweep_size_vs_b([16], [0.0, 0.0342, 0.12], 1.0)
        lines = table.to_csv().splitlines()
        assert lines[0] == "axis,value_or_status,bound"
        assert lines[1] == "0.0,19,0.11075"
        assert lines[2] == "0.0342,22,0.11075"
        assert lines[3] == "0.12,INFEASIBLE,0.11075"

    def test_csv_multi_series_blocks(self):
        table = sweep_size_vs_b([16, 32], [0.0], 1.0)
        lines = table.to_csv().splitlines()
        assert lines[1] == "# series: N=16"
        assert "# series: N=32" in lines

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            sweep_size_vs_b([], [0.1], 1.0)
        with pytest.raises(ValueError):
            sweep_size_vs_n([], [16], 1.0)


def test_worst_xi_sits_at_band_edge(book16):
    # the binding subcarrier for a seam angle is a band edge
    report = verify_codebook(book16, psi_step=1e-3)
    assert report.worst_xi in (
        pytest.approx(BAND.xi_min, abs=1e-12),
        pytest.approx(BAND.xi_max, abs=1e-12),
    )


def test_math_of_slack_levels(book16):
    # slack only moves the pass level, never the measured worst gain
    tight = verify_codebook(book16, psi_step=1e-3, slack_db=0.0)
    loose = verify_codebook(book16, psi_step=1e-3, slack_db=1.0)
    assert tight.worst_gain_db == loose.worst_gain_db
    assert math.isclose(tight.threshold_db, loose.threshold_db)
