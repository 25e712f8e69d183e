"""Uniform linear array model.

Steering vectors, fine-beam phase shifts, the array gain by direct
summation, and the closed-form Dirichlet-style gain kernel for
half-wavelength element spacing. All functions are pure and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ArrayGeometry",
    "steering_vector",
    "fine_beam_weights",
    "array_gain_sum",
    "gain_kernel",
    "gain_kernel_magnitude",
    "equivalent_aoa",
    "psi_from_theta",
    "theta_from_psi",
]

# |sin(pi x / 2)| below this is treated as a removable singularity of the
# closed-form kernel (the points x = 2k, where naive division is unstable).
_SINGULARITY_TOL = 1e-12

# Slack for "psi must be a sine" range checks, absorbs round trips through
# sin/arcsin.
_PSI_TOL = 1e-12


@dataclass(frozen=True)
class ArrayGeometry:
    """ULA with ``n_antennas`` identical isotropic elements spaced
    ``spacing_ratio`` carrier wavelengths apart.

    The summation-form gain accepts any positive spacing; the closed-form
    kernel and everything built on it (beamwidths, codebook design) are
    derived for half-wavelength spacing only.
    """

    n_antennas: int
    spacing_ratio: float = 0.5

    def __post_init__(self) -> None:
        n = self.n_antennas
        if n != int(n) or int(n) < 2:
            raise ValueError(f"n_antennas must be an integer >= 2, got {n!r}")
        d = self.spacing_ratio
        if not (math.isfinite(d) and d > 0):
            raise ValueError(f"spacing_ratio must be positive and finite, got {d!r}")

    @property
    def max_gain(self) -> float:
        """Peak voltage gain sqrt(N), attained by a matched fine beam."""
        return math.sqrt(self.n_antennas)

    @property
    def is_half_wavelength(self) -> bool:
        return self.spacing_ratio == 0.5


def _check_n(n_antennas: int) -> int:
    if n_antennas != int(n_antennas) or int(n_antennas) < 2:
        raise ValueError(f"n_antennas must be an integer >= 2, got {n_antennas!r}")
    return int(n_antennas)


def _check_psi(psi: float) -> None:
    if not math.isfinite(psi) or abs(psi) > 1.0 + _PSI_TOL:
        raise ValueError(f"psi must be a sine value in [-1, 1], got {psi!r}")


def _check_xi(xi: float) -> None:
    if not (math.isfinite(xi) and xi > 0):
        raise ValueError(f"frequency ratio xi must be positive, got {xi!r}")


def steering_vector(geom: ArrayGeometry, psi: float, xi: float = 1.0) -> np.ndarray:
    """Frequency-scaled ULA response phasors for sine-angle ``psi``.

    Element ``n`` (1-based) is the unit-magnitude phasor with phase
    ``2*pi*xi*spacing_ratio*(n-1)*psi``, wavelength referenced to the
    carrier; ``xi`` is the evaluated frequency divided by the carrier.
    """
    _check_psi(psi)
    _check_xi(xi)
    k = np.arange(geom.n_antennas)
    return np.exp(2j * math.pi * xi * geom.spacing_ratio * psi * k)


def fine_beam_weights(geom: ArrayGeometry, psi0: float) -> np.ndarray:
    """Phase-shifter settings focusing the beam on ``psi0`` at the carrier.

    With these phases the gain magnitude reaches sqrt(N) at
    ``(psi  = psi0, xi = 1)``. Phases come back unreduced (not wrapped to
    ``[0, 2*pi)``). No range check on ``psi0``: the outermost beams of a
    squint-compensated codebook can have a nominal focus marginally outside
    the visible region, and the phase recipe stays well-defined there.
    """
    if not math.isfinite(psi0):
        raise ValueError(f"psi0 must be finite, got {psi0!r}")
    return 2.0 * math.pi * geom.spacing_ratio * psi0 * np.arange(geom.n_antennas)


def array_gain_sum(
    weights: np.ndarray, geom: ArrayGeometry, psi: float, xi: float = 1.0
) -> complex:
    """Array gain by direct summation over elements.

    Returns ``(1/sqrt(N)) * sum_n exp(j*(2*pi*xi*spacing_ratio*(n-1)*psi
    - beta_n))``. Valid for arbitrary spacing and arbitrary weights, not
    only fine beams.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (geom.n_antennas,):
        raise ValueError(
            f"weights must have shape ({geom.n_antennas},), got {w.shape}"
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite phases in radians")
    _check_psi(psi)
    _check_xi(xi)
    k = np.arange(geom.n_antennas)
    phase = 2.0 * math.pi * xi * geom.spacing_ratio * psi * k - w
    return complex(np.exp(1j * phase).sum() / math.sqrt(geom.n_antennas))


def gain_kernel(x, n_antennas: int):
    """Closed-form fine-beam gain ``g(x)`` for half-wavelength spacing.

    ``g(x) = sin(N*pi*x/2) / (sqrt(N)*sin(pi*x/2)) * exp(j*(N-1)*pi*x/2)``,
    evaluated so that the removable singularities at ``x = 2k`` return the
    analytic limit (magnitude sqrt(N)) instead of dividing by ~0. The fine
    beam focused on ``psi0`` has gain ``g(xi*psi_c - psi0)``.

    Accepts a scalar or an ndarray; returns complex of matching shape.
    """
    n = _check_n(n_antennas)
    arr = np.asarray(x, dtype=float)
    half = 0.5 * math.pi * arr
    den = np.sin(half)
    near = np.abs(den) < _SINGULARITY_TOL
    sqrt_n = math.sqrt(n)
    ratio = np.sin(n * half) / (sqrt_n * np.where(near, 1.0, den))
    if np.any(near):
        # limit of sin(N pi x/2)/sin(pi x/2) at x = 2k is N*(-1)^(k(N-1))
        k = np.rint(0.5 * arr)
        sign = 1.0 - 2.0 * np.mod(k * (n - 1), 2.0)
        ratio = np.where(near, sign * sqrt_n, ratio)
    out = ratio * np.exp(1j * (n - 1) * half)
    if np.ndim(x) == 0:
        return complex(out)
    return out


def gain_kernel_magnitude(x, n_antennas: int):
    """|g(x)| without the phase factor; the hot path for grid sweeps.

    Same singularity handling as :func:`gain_kernel`. Scalar in, float out;
    ndarray in, ndarray out.
    """
    n = _check_n(n_antennas)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    half = 0.5 * math.pi * arr
    num = np.sin(n * half)
    den = np.sin(half)
    np.abs(num, out=num)
    np.abs(den, out=den)
    sqrt_n = math.sqrt(n)
    near = den < _SINGULARITY_TOL
    if near.any():
        den[near] = 1.0
    num /= den
    num /= sqrt_n
    if near.any():
        num[near] = sqrt_n
    if scalar:
        return float(num[0])
    return num


def equivalent_aoa(theta_c: float, xi: float) -> float:
    """Apparent arrival angle at frequency ratio ``xi`` for carrier AoA
    ``theta_c`` (radians): ``arcsin(xi * sin(theta_c))``.

    Raises ValueError when ``|xi*sin(theta_c)| > 1``: the squinted signal
    aliases outside the visible region and the caller decides whether to
    clamp.
    """
    _check_xi(xi)
    s = xi * math.sin(theta_c)
    if abs(s) > 1.0:
        raise ValueError(
            f"equivalent AoA undefined: xi*sin(theta_c) = {s:.6f} is outside [-1, 1]"
        )
    return math.asin(s)


def psi_from_theta(theta: float) -> float:
    """Map a physical angle (radians, measured from broadside) to psi = sin(theta)."""
    if not math.isfinite(theta) or abs(theta) > 0.5 * math.pi + _PSI_TOL:
        raise ValueError(f"theta must lie in [-pi/2, pi/2], got {theta!r}")
    return math.sin(theta)


def theta_from_psi(psi: float) -> float:
    """Inverse of :func:`psi_from_theta`; exact round trip up to float tolerance."""
    _check_psi(psi)
    return math.asin(min(1.0, max(-1.0, psi)))
