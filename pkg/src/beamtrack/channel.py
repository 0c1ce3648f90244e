"""Ka-band line-of-sight channel for the uniform planar array, single-chain
received signal and power, matched analog weights, spatial spectrum, and
pilot-based gain estimation.

Element (m, n) of the array response carries phase 2*pi*(d/lambda) *
[(m-1) sin(az) cos(el) + (n-1) sin(az) sin(el)]; ``az`` is the polar angle
off the array normal and ``el`` the orientation around it.  Matrices are
flattened column-major everywhere a vector form is needed, and beam
weights are stored as phases so unit modulus holds by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class ArrayGeometry:
    rows: int = 128
    cols: int = 64
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("array must have at least one row and column")
        if self.spacing_over_wavelength <= 0:
            raise ValueError("spacing_over_wavelength must be positive")

    @property
    def size(self) -> int:
        return self.rows * self.cols


@dataclass
class PathComponent:
    azimuth: float  # rad, polar angle off the array normal
    elevation: float  # rad, orientation around the normal
    gain: complex = 1.0 + 0.0j
    path_length: float = 0.0  # m

    def __post_init__(self):
        if not (
            math.isfinite(self.azimuth)
            and math.isfinite(self.elevation)
            and math.isfinite(self.path_length)
            and math.isfinite(abs(self.gain))
        ):
            raise ValueError("path parameters must be finite")


@dataclass
class SignalModel:
    symbol: complex = 1.0 + 0.0j
    snr_db: float = 20.0
    los_gain_abs: float = 1.0

    @property
    def noise_power(self) -> float:
        """Per-element noise variance from the configured SNR."""
        sig = (self.los_gain_abs * abs(self.symbol)) ** 2
        return sig * 10.0 ** (-self.snr_db / 10.0)


def response_phases(geom: ArrayGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Per-element phase of the array response, (rows, cols)."""
    k = 2.0 * math.pi * geom.spacing_over_wavelength * math.sin(azimuth)
    m = np.arange(geom.rows)[:, None]
    n = np.arange(geom.cols)[None, :]
    return k * (m * math.cos(elevation) + n * math.sin(elevation))


def array_response(geom: ArrayGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Unit-modulus response matrix; element (1,1) is always 1."""
    return np.exp(1j * response_phases(geom, azimuth, elevation))


def channel_matrix(
    geom: ArrayGeometry, paths: list[PathComponent], wavelength: float = 0.015
) -> np.ndarray:
    """Multipath channel: per-path gain, carrier phase from path length, and
    the 1/sqrt(MN) array normalization."""
    if not paths:
        raise ValueError("at least one path is required")
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    h = np.zeros((geom.rows, geom.cols), dtype=complex)
    scale = 1.0 / math.sqrt(geom.size)
    for p in paths:
        carrier = np.exp(-2j * math.pi * p.path_length / wavelength)
        h += p.gain * carrier * scale * array_response(geom, p.azimuth, p.elevation)
    return h


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-major flattening shared by channels, weights and structure."""
    return np.asarray(matrix).flatten(order="F")


def spatial_spectrum(h: np.ndarray) -> np.ndarray:
    """Magnitudes of the 2-D unitary DFT of the channel matrix.

    Unitary normalization preserves total energy, so the Frobenius norm of
    the output equals that of the input.
    """
    rows, cols = h.shape
    fm = np.fft.fft(np.eye(rows)) / math.sqrt(rows)
    fn = np.fft.fft(np.eye(cols)) / math.sqrt(cols)
    return np.abs(fm @ h @ fn)


def matched_weights(geom: ArrayGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Phase-shifter settings matched to a plane wave from (azimuth, elevation).

    Returns the MN phase vector (column-major); the implied weights are
    exp(1j*phases).
    """
    return vec(response_phases(geom, azimuth, elevation))


def weights_from_phases(phases: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.asarray(phases, dtype=float))


def received_signal(
    phases: np.ndarray,
    h_vec: np.ndarray,
    symbol: complex,
    noise_power: float,
    rng: np.random.Generator,
) -> complex:
    """One received sample through the analog combiner.

    y = w^H h s + w^H n with n circular complex Gaussian, per-element
    variance ``noise_power``.
    """
    w = weights_from_phases(phases)
    y = np.vdot(w, np.asarray(h_vec)) * symbol
    if noise_power > 0.0:
        n = math.sqrt(noise_power / 2.0) * (
            rng.standard_normal(w.size) + 1j * rng.standard_normal(w.size)
        )
        y += np.vdot(w, n)
    return complex(y)


def received_power(
    phases: np.ndarray,
    h_vec: np.ndarray,
    symbol: complex,
    noise_power: float,
    rng: np.random.Generator,
) -> float:
    """Instantaneous |y|^2 of one received sample (the optimizer's noisy oracle)."""
    return abs(received_signal(phases, h_vec, symbol, noise_power, rng)) ** 2


def nrsp(phases: np.ndarray, h_vec: np.ndarray) -> float:
    """Normalized received signal power.

    Noiseless captured power over the matched-beam maximum MN*||h||^2; equals
    1 exactly when the weights are matched to a single-path channel.
    """
    h = np.asarray(h_vec)
    w = weights_from_phases(phases)
    denom = h.size * np.vdot(h, h).real
    if denom == 0.0:
        raise ValueError("channel vector is identically zero")
    return float(abs(np.vdot(w, h)) ** 2 / denom)


def estimate_effective_gain(pilot_pairs: list[tuple[complex, complex]]) -> complex:
    """Least-squares estimate of the scalar effective channel w^H h from
    (received, transmitted) pilot pairs; one noiseless pilot is exact."""
    num = 0.0 + 0.0j
    den = 0.0
    for y, s in pilot_pairs:
        num += np.conj(s) * y
        den += abs(s) ** 2
    if den == 0.0:
        raise ValueError("pilot symbols are all zero")
    return complex(num / den)


@dataclass
class PowerOracle:
    """Noisy instant-power oracle for the electrical optimizers.

    Returns the instantaneous received power scaled by the matched-beam
    maximum MN*||h||^2*|s|^2, so a perfectly aligned noiseless measurement
    reads 1.0.  The measurement noise is the exact scalar projection of the
    per-element noise vector through the unit-modulus combiner: w^H n is
    circular Gaussian with variance MN*noise_power for every phase setting,
    so it is drawn directly (one complex draw per query instead of MN).

    Queries are counted; ``true_nrsp`` is the noiseless diagnostic used for
    traces and never consumed by the optimizers.
    """

    h_vec: np.ndarray
    symbol: complex
    noise_power: float
    rng: np.random.Generator
    queries: int = 0
    _scale: float = field(init=False)
    _noise_sigma: float = field(init=False)

    def __post_init__(self):
        h = np.asarray(self.h_vec)
        self._scale = h.size * np.vdot(h, h).real * abs(self.symbol) ** 2
        if self._scale == 0.0:
            raise ValueError("degenerate channel/symbol: zero matched power")
        self._noise_sigma = math.sqrt(h.size * self.noise_power / 2.0)

    def __call__(self, phases: np.ndarray) -> float:
        self.queries += 1
        y = np.vdot(weights_from_phases(phases), self.h_vec) * self.symbol
        if self.noise_power > 0.0:
            y += self._noise_sigma * complex(
                self.rng.standard_normal(), self.rng.standard_normal()
            )
        return abs(y) ** 2 / self._scale

    def sample_pair(self, base: complex, delta: complex) -> float:
        """Fast path for sequential probing: power of an incrementally
        adjusted combiner sum (base + delta), same scaling and noise law."""
        self.queries += 1
        y = (base + delta) * self.symbol
        if self.noise_power > 0.0:
            y += self._noise_sigma * complex(
                self.rng.standard_normal(), self.rng.standard_normal()
            )
        return abs(y) ** 2 / self._scale

    def true_nrsp(self, phases: np.ndarray) -> float:
        return nrsp(phases, self.h_vec)
