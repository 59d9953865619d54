"""Discrete Fourier analysis of real observable time series."""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass
class ObservableSeries:
    """Uniformly sampled real observable, e.g. m_x(t)."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")


@dataclass
class Spectrum:
    """DFT magnitudes with the frequency axis in units of the drive omega."""

    frequencies: np.ndarray  # signed, in units of omega
    magnitudes: np.ndarray

    def dominant_frequency(self) -> float:
        """Frequency (>= 0, units of omega) of the largest magnitude bin."""
        pos = self.frequencies >= 0.0
        i = np.argmax(self.magnitudes[pos])
        return float(self.frequencies[pos][i])


def dft(series: ObservableSeries, omega: float = 1.0) -> Spectrum:
    """Full DFT magnitude spectrum of a uniformly sampled series."""
    t = series.times
    if len(t) < 2:
        raise ValueError("need at least 2 samples")
    dt = np.diff(t)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * max(abs(dt[0]), 1e-30):
        raise ValueError("non-uniform sampling grid")
    coeffs = np.fft.fft(series.values)
    freqs = TWO_PI * np.fft.fftfreq(len(t), d=dt[0]) / omega
    return Spectrum(frequencies=freqs, magnitudes=np.abs(coeffs))
