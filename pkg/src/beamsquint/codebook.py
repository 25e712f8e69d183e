"""Minimum-size codebook construction.

Tiling without squint, the odd/even squint-compensated procedures (the
smaller wins), feasibility bounds on bandwidth and array size, and the
codebook JSON wire format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .array_model import ArrayGeometry, _check_n, fine_beam_weights
from .squint import (
    BandSpec,
    CoverageInterval,
    GainThreshold,
    half_power_beamwidth,
    squinted_coverage,
)

__all__ = [
    "Beam",
    "Codebook",
    "DesignOutcome",
    "Infeasibility",
    "CodebookFormatError",
    "min_size_no_squint",
    "design_no_squint",
    "design_with_squint",
    "max_fractional_bandwidth",
    "max_antennas",
]

# Absolute slack on tiling comparisons; stops roundoff at an exact tiling
# boundary from adding a spurious extra beam.
_EDGE_TOL = 1e-12


class CodebookFormatError(ValueError):
    """Raised when a serialized codebook violates the wire-format invariants."""


@dataclass(frozen=True)
class Beam:
    """One codebook entry: focus angle, phase vector, analytic coverage."""

    index: int
    psi0: float
    weights: np.ndarray = field(repr=False)
    coverage: CoverageInterval

    @property
    def theta0_deg(self) -> float | None:
        """Focus angle in degrees, or None when the nominal focus falls
        outside the visible region (possible for the outermost beams)."""
        if abs(self.psi0) > 1.0:
            return None
        return math.degrees(math.asin(self.psi0))


@dataclass(frozen=True)
class Codebook:
    """Beams sorted by focus angle, jointly covering [-psi_m, psi_m]."""

    beams: tuple[Beam, ...]
    psi_m: float
    band: BandSpec
    geometry: ArrayGeometry
    threshold: GainThreshold

    @property
    def n_antennas(self) -> int:
        return self.geometry.n_antennas

    @property
    def size(self) -> int:
        return len(self.beams)

    @property
    def parity(self) -> str:
        return "odd" if self.size % 2 else "even"

    def coverage_gaps(self, tol: float = 1e-9) -> list[tuple[float, float]]:
        """Holes in the union of analytic coverages over [-psi_m, psi_m].

        Beam coverages are intersected with the target range here (and only
        here); an empty list certifies analytic completeness.
        """
        gaps: list[tuple[float, float]] = []
        cursor = -self.psi_m
        for beam in sorted(self.beams, key=lambda bm: bm.coverage.lo):
            lo = max(beam.coverage.lo, -self.psi_m)
            hi = min(beam.coverage.hi, self.psi_m)
            if hi <= lo:
                continue
            if lo > cursor + tol:
                gaps.append((cursor, lo))
            cursor = max(cursor, hi)
        if cursor < self.psi_m - tol:
            gaps.append((cursor, self.psi_m))
        return gaps

    def to_dict(self) -> dict:
        return {
            "n_antennas": self.n_antennas,
            "spacing_ratio": self.geometry.spacing_ratio,
            "fractional_bandwidth": self.band.fractional_bandwidth,
            "psi_m": self.psi_m,
            "threshold_ratio": self.threshold.ratio_to_max,
            "parity": self.parity,
            "size": self.size,
            "beams": [
                {
                    "index": beam.index,
                    "psi0": beam.psi0,
                    "theta0_deg": beam.theta0_deg,
                    "phases_rad": [float(p) for p in beam.weights],
                    "coverage": {"lo": beam.coverage.lo, "hi": beam.coverage.hi},
                }
                for beam in self.beams
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Codebook":
        """Parse and validate the wire format; raises CodebookFormatError
        naming the violated invariant."""
        if not isinstance(data, dict):
            raise CodebookFormatError("codebook document must be a JSON object")
        for key in (
            "n_antennas",
            "spacing_ratio",
            "fractional_bandwidth",
            "psi_m",
            "threshold_ratio",
            "parity",
            "size",
            "beams",
        ):
            if key not in data:
                raise CodebookFormatError(f"missing required key {key!r}")

        n = data["n_antennas"]
        if not isinstance(n, int) or n < 2:
            raise CodebookFormatError(f"n_antennas must be an integer >= 2, got {n!r}")
        if data["spacing_ratio"] != 0.5:
            raise CodebookFormatError(
                f"spacing_ratio must be 0.5 (half-wavelength), got {data['spacing_ratio']!r}"
            )
        b = data["fractional_bandwidth"]
        if not isinstance(b, (int, float)) or not (0.0 <= b < 2.0):
            raise CodebookFormatError(f"fractional_bandwidth must lie in [0, 2), got {b!r}")
        psi_m = data["psi_m"]
        if not isinstance(psi_m, (int, float)) or not (0.0 < psi_m <= 1.0):
            raise CodebookFormatError(f"psi_m must lie in (0, 1], got {psi_m!r}")
        ratio = data["threshold_ratio"]
        if not isinstance(ratio, (int, float)) or not (0.0 < ratio <= 1.0):
            raise CodebookFormatError(f"threshold_ratio must lie in (0, 1], got {ratio!r}")
        if data["parity"] not in ("odd", "even"):
            raise CodebookFormatError(f"parity must be 'odd' or 'even', got {data['parity']!r}")
        raw_beams = data["beams"]
        if not isinstance(raw_beams, list) or not raw_beams:
            raise CodebookFormatError("beams must be a non-empty list")
        if data["size"] != len(raw_beams):
            raise CodebookFormatError(
                f"size {data['size']!r} does not match the number of beams {len(raw_beams)}"
            )

        geom = ArrayGeometry(n, 0.5)
        beams = []
        prev_psi0 = -math.inf
        for pos, entry in enumerate(raw_beams):
            if not isinstance(entry, dict):
                raise CodebookFormatError(f"beam {pos} must be a JSON object")
            for key in ("index", "psi0", "phases_rad", "coverage"):
                if key not in entry:
                    raise CodebookFormatError(f"beam {pos} is missing key {key!r}")
            psi0 = entry["psi0"]
            if not isinstance(psi0, (int, float)) or not math.isfinite(psi0) or abs(psi0) > 1.5:
                raise CodebookFormatError(f"beam {pos} psi0 out of range, got {psi0!r}")
            if psi0 <= prev_psi0:
                raise CodebookFormatError("beams must be strictly sorted by psi0")
            prev_psi0 = psi0
            phases = entry["phases_rad"]
            if not isinstance(phases, list) or len(phases) != n:
                raise CodebookFormatError(
                    f"beam {pos} phases_rad length {len(phases) if isinstance(phases, list) else 'n/a'}"
                    f" does not match n_antennas {n}"
                )
            weights = np.asarray(phases, dtype=float)
            expected = fine_beam_weights(geom, psi0)
            if not np.all(np.isfinite(weights)) or np.max(np.abs(weights - expected)) > 1e-9:
                raise CodebookFormatError(
                    f"beam {pos} phases_rad are not the fine-beam phases for psi0={psi0!r}"
                )
            cov = entry["coverage"]
            if not isinstance(cov, dict) or "lo" not in cov or "hi" not in cov:
                raise CodebookFormatError(f"beam {pos} coverage must carry 'lo' and 'hi'")
            lo, hi = cov["lo"], cov["hi"]
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise CodebookFormatError(f"beam {pos} coverage [{lo!r}, {hi!r}] is not a valid interval")
            beams.append(Beam(int(entry["index"]), float(psi0), weights, CoverageInterval(float(lo), float(hi))))

        return cls(
            beams=tuple(beams),
            psi_m=float(psi_m),
            band=BandSpec(float(b)),
            geometry=geom,
            threshold=GainThreshold(float(ratio)),
        )

    @classmethod
    def from_json(cls, text: str) -> "Codebook":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CodebookFormatError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class Infeasibility:
    """Why no codebook exists, with the violated bound values attached."""

    reason: str
    n_antennas: int
    psi_m: float
    fractional_bandwidth: float
    max_fractional_bandwidth: float
    max_antennas: int | None


@dataclass(frozen=True)
class DesignOutcome:
    """Either a codebook or an infeasibility report."""

    codebook: Codebook | None = None
    infeasibility: Infeasibility | None = None

    def __post_init__(self) -> None:
        if (self.codebook is None) == (self.infeasibility is None):
            raise ValueError("exactly one of codebook / infeasibility must be set")

    @property
    def feasible(self) -> bool:
        return self.codebook is not None

    @property
    def size(self) -> int:
        if self.codebook is None:
            raise ValueError(f"design is infeasible: {self.infeasibility.reason}")
        return self.codebook.size


def _check_psi_m(psi_m: float) -> float:
    if not (math.isfinite(psi_m) and 0.0 < psi_m <= 1.0):
        raise ValueError(f"psi_m must lie in (0, 1], got {psi_m!r}")
    return float(psi_m)


def min_size_no_squint(n_antennas: int, psi_m: float) -> int:
    """Beams needed to tile [-psi_m, psi_m] with constant-width beams:
    ceil(2*psi_m / (1.772/N))."""
    width = half_power_beamwidth(n_antennas)
    return int(math.ceil(2.0 * _check_psi_m(psi_m) / width - _EDGE_TOL))


def max_fractional_bandwidth(n_antennas: int, psi_m: float) -> float:
    """Largest usable fractional bandwidth, 1.772/(psi_m * N).

    Designs are feasible strictly below this value: at the bound the edge
    beam's effective width collapses to zero and the codebook size diverges.
    """
    return half_power_beamwidth(n_antennas) / _check_psi_m(psi_m)


def max_antennas(band: BandSpec, psi_m: float) -> int | None:
    """Largest usable array size, floor(1.772/(psi_m*b)); None when b = 0
    (no bound)."""
    _check_psi_m(psi_m)
    b = band.fractional_bandwidth
    if b == 0.0:
        return None
    return int(math.floor(1.772 / (psi_m * b) + _EDGE_TOL))


def _materialize(
    positive_foci: list[float],
    include_center: bool,
    band: BandSpec,
    geom: ArrayGeometry,
    psi_m: float,
) -> Codebook:
    """Mirror the right-half foci, attach phases and analytic coverage."""
    foci = sorted([-f for f in positive_foci] + ([0.0] if include_center else []) + positive_foci)
    n = geom.n_antennas
    beams = tuple(
        Beam(
            index=i,
            psi0=f,
            weights=fine_beam_weights(geom, f),
            coverage=squinted_coverage(f, band, n),
        )
        for i, f in enumerate(foci)
    )
    return Codebook(
        beams=beams,
        psi_m=psi_m,
        band=band,
        geometry=geom,
        threshold=GainThreshold(),
    )


def design_no_squint(n_antennas: int, psi_m: float) -> Codebook:
    """Tile [-psi_m, psi_m] with abutting constant-width beams, symmetric
    about broadside.

    Odd count: one beam at broadside plus pairs at +-k*width. Even count:
    pairs at +-(k - 1/2)*width. Exactly ``min_size_no_squint`` beams; the
    outermost coverage may overshoot psi_m.
    """
    n = _check_n(n_antennas)
    psi_m = _check_psi_m(psi_m)
    size = min_size_no_squint(n, psi_m)
    width = half_power_beamwidth(n)
    if size % 2:
        positive = [k * width for k in range(1, (size - 1) // 2 + 1)]
        center = True
    else:
        positive = [(k - 0.5) * width for k in range(1, size // 2 + 1)]
        center = False
    band = BandSpec(0.0)
    return _materialize(positive, center, band, ArrayGeometry(n, 0.5), psi_m)


def _tile_right_half(
    n: int, band: BandSpec, psi_m: float, odd: bool
) -> tuple[list[float], bool] | None:
    """Abutting squinted beams rightward from broadside.

    Returns (positive foci, has_center) or None if the tiling stalls (the
    in-loop guard; unreachable once the bound precheck has passed, kept as
    a defense against float collapse right at the bound).
    """
    width = half_power_beamwidth(n)
    b = band.fractional_bandwidth
    positive: list[float] = []
    if odd:
        # seed beam at broadside; its right edge is squint-shrunk by the
        # highest frequency
        psi_cr = (0.5 * width) / (1.0 + 0.5 * b)
    else:
        psi_cr = 0.0
    while psi_cr < psi_m - _EDGE_TOL:
        psi_cl = psi_cr
        psi0 = (1.0 - 0.5 * b) * psi_cl + 0.5 * width
        psi_cr = (psi0 + 0.5 * width) / (1.0 + 0.5 * b)
        if psi_cl >= psi_cr:
            return None
        positive.append(psi0)
    return positive, odd


def design_with_squint(n_antennas: int, band: BandSpec, psi_m: float) -> DesignOutcome:
    """Squint-compensated minimum codebook: run the odd procedure (seed
    beam at broadside) and the even procedure (seed edge at broadside),
    mirror each, keep the smaller.

    Infeasible when b >= 1.772/(psi_m*N); the report carries the bound
    values.
    """
    n = _check_n(n_antennas)
    psi_m = _check_psi_m(psi_m)
    b = band.fractional_bandwidth
    bound = max_fractional_bandwidth(n, psi_m)

    def infeasible(reason: str) -> DesignOutcome:
        return DesignOutcome(
            infeasibility=Infeasibility(
                reason=reason,
                n_antennas=n,
                psi_m=psi_m,
                fractional_bandwidth=b,
                max_fractional_bandwidth=bound,
                max_antennas=max_antennas(band, psi_m),
            )
        )

    if b >= bound:
        return infeasible(
            f"fractional bandwidth {b:.6f} is not below the bound "
            f"{bound:.6f} = 1.772/(psi_m*N) for N={n}, psi_m={psi_m:g}"
        )

    candidates = []
    for odd in (True, False):
        tiled = _tile_right_half(n, band, psi_m, odd)
        if tiled is None:
            return infeasible(
                f"beam tiling stalled before reaching psi_m={psi_m:g} "
                f"(fractional bandwidth {b:.6f} at the feasibility bound {bound:.6f})"
            )
        positive, has_center = tiled
        candidates.append((2 * len(positive) + (1 if has_center else 0), positive, has_center))

    size, positive, has_center = min(candidates, key=lambda c: c[0])
    book = _materialize(positive, has_center, band, ArrayGeometry(n, 0.5), psi_m)
    assert book.size == size
    return DesignOutcome(codebook=book)
