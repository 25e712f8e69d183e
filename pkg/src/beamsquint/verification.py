"""Brute-force certification of codebooks and size-vs-parameter sweeps.

The certifier grids the target angle range, takes for every carrier angle
the best beam's worst-subcarrier gain, and reports the global worst case
plus any contiguous failure gaps. Grid evaluation is deterministic:
fixed grids, order-independent min/max reductions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .array_model import gain_kernel_magnitude
from .codebook import Codebook, design_with_squint, max_antennas, max_fractional_bandwidth
from .squint import BandSpec, CoverageInterval

__all__ = [
    "CoverageReport",
    "SweepPoint",
    "SweepSeries",
    "SweepTable",
    "verify_codebook",
    "sweep_size_vs_b",
    "sweep_size_vs_n",
]

_DB_FLOOR = 1e-15


def _to_db(amplitude: float) -> float:
    return 20.0 * math.log10(max(amplitude, _DB_FLOOR))


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of a brute-force codebook certification.

    ``worst_gain_db`` is relative to the sqrt(N) maximum; ``gaps`` lists
    the carrier-angle intervals where no beam clears the (slack-adjusted)
    threshold. ``passed`` holds exactly when there are no gaps, i.e. when
    ``worst_gain_db >= threshold_db - slack_db`` over the grid.
    """

    passed: bool
    worst_gain_db: float
    worst_psi: float
    worst_xi: float
    gaps: tuple[CoverageInterval, ...]
    threshold_db: float
    slack_db: float
    psi_step: float
    xi_points: int
    n_antennas: int
    psi_m: float

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "worst_gain_db": self.worst_gain_db,
            "worst_psi": self.worst_psi,
            "worst_xi": self.worst_xi,
            "gaps": [{"lo": g.lo, "hi": g.hi} for g in self.gaps],
            "threshold_db": self.threshold_db,
            "slack_db": self.slack_db,
            "psi_step": self.psi_step,
            "xi_points": self.xi_points,
            "n_antennas": self.n_antennas,
            "psi_m": self.psi_m,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def verify_codebook(
    codebook: Codebook,
    psi_step: float = 1e-4,
    xi_points: int = 65,
    slack_db: float = 0.2,
) -> CoverageReport:
    """Certify minimum gain across all subcarriers over [-psi_m, psi_m].

    For each carrier angle on the grid: max over beams of (min over the xi
    grid of |g(xi*psi - psi0)|). Failures are data, not exceptions; gap
    edges are refined by bisection. ``slack_db`` absorbs the 1.772/N
    beamwidth approximation when certifying constant-width designs (use 0
    for exact-width designs).
    """
    if not (math.isfinite(psi_step) and psi_step > 0):
        raise ValueError(f"psi_step must be positive, got {psi_step!r}")
    if slack_db < 0:
        raise ValueError(f"slack_db must be >= 0, got {slack_db!r}")
    n = codebook.n_antennas
    psi_m = codebook.psi_m
    xis = codebook.band.xi_grid(xi_points)
    sqrt_n = math.sqrt(n)
    pass_level = codebook.threshold.absolute(n) * 10.0 ** (-slack_db / 20.0)

    steps = max(2, int(round(2.0 * psi_m / psi_step)))
    grid = np.linspace(-psi_m, psi_m, steps + 1)

    best = np.zeros(grid.shape)
    for beam in codebook.beams:
        x = grid[:, None] * xis[None, :]
        x -= beam.psi0
        np.maximum(best, gain_kernel_magnitude(x, n).min(axis=1), out=best)

    worst_idx = int(np.argmin(best))
    worst_psi = float(grid[worst_idx])
    worst_amp = float(best[worst_idx])

    # xi achieving the minimum for the beam that wins at the worst angle
    best_profile = None
    best_min = -math.inf
    for beam in codebook.beams:
        profile = gain_kernel_magnitude(worst_psi * xis - beam.psi0, n)
        if float(profile.min()) > best_min:
            best_min = float(profile.min())
            best_profile = profile
    worst_xi = float(xis[int(np.argmin(best_profile))])

    def quality(psi: float) -> float:
        out = -math.inf
        for beam in codebook.beams:
            out = max(out, float(gain_kernel_magnitude(psi * xis - beam.psi0, n).min()))
        return out

    gaps = _failure_gaps(grid, best, pass_level, quality)

    return CoverageReport(
        passed=not gaps,
        worst_gain_db=_to_db(worst_amp / sqrt_n),
        worst_psi=worst_psi,
        worst_xi=worst_xi,
        gaps=tuple(gaps),
        threshold_db=-codebook.threshold.db_below_max,
        slack_db=slack_db,
        psi_step=psi_step,
        xi_points=xi_points,
        n_antennas=n,
        psi_m=psi_m,
    )


def _failure_gaps(grid, best, pass_level, quality) -> list[CoverageInterval]:
    """Merge failing grid points into intervals, bisecting the edges."""
    failing = best < pass_level

    def crossing(inside: float, outside: float) -> float:
        f = lambda p: quality(p) - pass_level
        fi, fo = f(inside), f(outside)
        if fi == 0.0:
            return inside
        if fo == 0.0:
            return outside
        if fi < 0.0 or fo > 0.0:
            return inside
        return float(brentq(f, inside, outside, xtol=1e-9))

    gaps: list[CoverageInterval] = []
    i = 0
    npts = len(grid)
    while i < npts:
        if not failing[i]:
            i += 1
            continue
        j = i
        while j + 1 < npts and failing[j + 1]:
            j += 1
        lo = grid[0] if i == 0 else crossing(grid[i - 1], grid[i])
        hi = grid[-1] if j == npts - 1 else crossing(grid[j + 1], grid[j])
        gaps.append(CoverageInterval(float(lo), float(hi)))
        i = j + 1
    return gaps


@dataclass(frozen=True)
class SweepPoint:
    """One sweep sample: axis value, codebook size (None = infeasible),
    and the feasibility bound annotated for that series."""

    axis_value: float
    size: int | None
    bound: float

    @property
    def feasible(self) -> bool:
        return self.size is not None


@dataclass(frozen=True)
class SweepSeries:
    label: str
    points: tuple[SweepPoint, ...]


@dataclass(frozen=True)
class SweepTable:
    """Sweep results, one series per fixed parameter.

    ``to_csv`` emits ``axis,value_or_status,bound`` rows; multiple series
    are separated by ``# series: <label>`` comment lines.
    """

    axis: str
    series: tuple[SweepSeries, ...]

    def to_csv(self) -> str:
        lines = ["axis,value_or_status,bound"]
        multi = len(self.series) > 1
        for s in self.series:
            if multi:
                lines.append(f"# series: {s.label}")
            for p in s.points:
                value = "INFEASIBLE" if p.size is None else str(p.size)
                lines.append(f"{p.axis_value},{value},{p.bound}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "series": [
                {
                    "label": s.label,
                    "points": [
                        {"axis_value": p.axis_value, "size": p.size, "bound": p.bound}
                        for p in s.points
                    ],
                }
                for s in self.series
            ],
        }


def sweep_size_vs_b(
    n_antennas_list: list[int], b_grid: list[float], psi_m: float = 1.0
) -> SweepTable:
    """Minimum codebook size as the fractional bandwidth grows, one series
    per array size; the bound column is the per-N vertical asymptote."""
    if not n_antennas_list or not len(b_grid):
        raise ValueError("sweep grids must be non-empty")
    series = []
    for n in n_antennas_list:
        bound = max_fractional_bandwidth(n, psi_m)
        points = []
        for b in b_grid:
            outcome = design_with_squint(n, BandSpec(float(b)), psi_m)
            points.append(
                SweepPoint(float(b), outcome.size if outcome.feasible else None, bound)
            )
        series.append(SweepSeries(f"N={n}", tuple(points)))
    return SweepTable("fractional_bandwidth", tuple(series))


def sweep_size_vs_n(
    b_list: list[float], n_range: list[int], psi_m: float = 1.0
) -> SweepTable:
    """Minimum codebook size as the array grows, one series per fractional
    bandwidth; the bound column is floor(1.772/(psi_m*b))."""
    if not len(b_list) or not len(n_range):
        raise ValueError("sweep grids must be non-empty")
    series = []
    for b in b_list:
        band = BandSpec(float(b))
        n_cap = max_antennas(band, psi_m)
        bound = math.inf if n_cap is None else float(n_cap)
        points = []
        for n in n_range:
            outcome = design_with_squint(int(n), band, psi_m)
            points.append(
                SweepPoint(float(n), outcome.size if outcome.feasible else None, bound)
            )
        series.append(SweepSeries(f"b={b:g}", tuple(points)))
    return SweepTable("n_antennas", tuple(series))
