"""
Observables extracted from spectra and pulse records.

Contrast levels follow the usual EIT convention: F is the off-resonant
floor, A the transparency amplitude above it and C = 1 - (F + A) the
remaining absorption at the peak.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks, peak_widths

from .propagation import PulseRecord, SpectrumResult


class AnalysisError(ValueError):
    """An observable cannot be extracted from the given data."""


class Contrast(NamedTuple):
    F: float
    A: float
    C: float


class FringeStats(NamedTuple):
    period: float  # nan when fewer than two maxima
    count: int
    contrast: float


@dataclass(frozen=True)
class DecayFit:
    time: float
    rate: float
    residual: float
    monotone: bool


def _arrays(spectrum):
    if isinstance(spectrum, SpectrumResult):
        return spectrum.delta, spectrum.transmission
    delta, T = spectrum
    return np.asarray(delta, float), np.asarray(T, float)


def extract_contrast(spectrum, edge_fraction: float = 0.1) -> Contrast:
    """(F, A, C) with F the mean over the outer ``edge_fraction`` of the grid on each side."""
    _, T = _arrays(spectrum)
    n = T.size
    k = max(1, int(round(edge_fraction * n)))
    if 2 * k >= n:
        raise AnalysisError("spectrum too short to separate edges from the feature")
    F = float(np.mean(np.concatenate([T[:k], T[-k:]])))
    i = int(np.argmax(T))
    peak = float(T[i])
    if peak - F > 1e-12 * max(abs(F), 1.0) and (i < k or i >= n - k):
        raise AnalysisError("transmission peak lies at the grid edge; widen the detuning grid")
    A = max(peak - F, 0.0)
    return Contrast(F, A, 1.0 - (F + A))


def fringe_stats(spectrum, prominence: float = 0.01) -> FringeStats:
    """Fringe period, count and contrast from local maxima.

    Maxima must stand out by ``prominence`` times the spectrum maximum.
    The period is the median spacing of successive maxima (nan if fewer
    than two); contrast is the mean peak-to-neighbouring-valley drop
    relative to the peak height.
    """
    delta, T = _arrays(spectrum)
    top = np.max(T)
    if not top > 0:
        raise AnalysisError("spectrum is identically zero")
    peaks, props = find_peaks(T, prominence=prominence * top)
    count = int(peaks.size)
    period = float(np.median(np.diff(delta[peaks]))) if count >= 2 else float("nan")
    if count:
        contrast = float(np.mean(props["prominences"] / T[peaks]))
    else:
        contrast = 0.0
    return FringeStats(period, count, contrast)


def eit_linewidth(spectrum) -> float:
    """Full width at half maximum of the transparency peak above the floor."""
    delta, T = _arrays(spectrum)
    F = extract_contrast((delta, T)).F
    y = T - F
    i = int(np.argmax(y))
    if y[i] <= 1e-12 * max(abs(F), 1.0):
        raise AnalysisError("no transparency peak above the floor")
    w, _, left, right = peak_widths(y, [i], rel_height=0.5)
    step = np.interp([left[0], right[0]], np.arange(delta.size), delta)
    return float(step[1] - step[0])


def _peak_time(t, x) -> float:
    y = np.abs(x) ** 2
    i = int(np.argmax(y))
    if y[i] <= 0:
        raise AnalysisError("envelope is identically zero")
    if i == 0 or i == y.size - 1:
        raise AnalysisError("envelope maximum lies at the edge of the time grid")
    top = np.flatnonzero(y == y[i])
    if top[-1] - top[0] >= top.size:
        raise AnalysisError("envelope maximum is not unique")
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    den = y0 - 2 * y1 + y2
    shift = 0.0 if den == 0 else 0.5 * (y0 - y2) / den
    return float(t[i] + shift * (t[1] - t[0]))


def slow_light_delay(record: PulseRecord) -> float:
    """Peak arrival time of the output minus that of the reference pulse."""
    t = np.asarray(record.times, dtype=float)
    return _peak_time(t, record.output) - _peak_time(t, record.reference)


def fit_decay(taus, efficiencies) -> DecayFit:
    """1/e time of efficiency versus storage time from a log-linear fit.

    ``time`` is ``-1/slope`` of log(efficiency) against tau. Non-monotone
    data are fitted anyway and flagged through ``monotone``/``residual``.
    """
    taus = np.asarray(taus, dtype=float)
    eff = np.asarray(efficiencies, dtype=float)
    if taus.size < 4 or taus.size != eff.size:
        raise AnalysisError("need at least four (tau, efficiency) pairs")
    if np.any(eff <= 0):
        raise AnalysisError("efficiencies must be positive")
    y = np.log(eff)
    (slope, icpt), res, *_ = np.polyfit(taus, y, 1, full=True)
    if slope >= 0:
        raise AnalysisError("efficiency does not decay with storage time")
    order = np.argsort(taus)
    monotone = bool(np.all(np.diff(eff[order]) <= 0))
    residual = float(np.sqrt(res[0] / taus.size)) if res.size else 0.0
    return DecayFit(-1.0 / slope, -slope, residual, monotone)
