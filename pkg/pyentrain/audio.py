"""Signal processing for the acoustic-prosodic features

The extractors follow the conventions of common phonetics software:

* pitch is tracked with the autocorrelation method on Hann windows of
  three periods of the pitch floor, corrected for the autocorrelation
  of the window, refined by parabolic interpolation and subject to an
  octave cost and a voicing threshold,
* intensity is the Hann-weighted mean square of 32 ms windows in dB
  relative to 1e-10 (full scale = 100 dB),
* jitter and shimmer are computed from waveform peaks, one per pitch
  period, and the harmonics-to-noise ratio from the normalized
  cross-correlation at the pitch lag.

`estimate_snr` is a percentile-based speech-to-noise ratio used to
check that recordings are clean enough for the analysis.
"""
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps
from scipy.io import wavfile

from pyentrain import log
from pyentrain.errors import AudioFormatError, SignalError

INTENSITY_REFERENCE = 1e-10
"""Mean square amplitude of 0 dB
"""

OCTAVE_COST = 0.01
"""Preference per octave for higher pitch candidates
"""

SILENCE_THRESHOLD = 0.03
"""Frames quieter than this (relative to the signal peak) tend to unvoiced
"""

PERIOD_FACTOR = 1.3
"""Largest ratio of consecutive periods used for jitter and shimmer
"""

SNR_FRAME = 0.020
SNR_SPEECH_PERCENTILE = 60
SNR_NOISE_PERCENTILE = 20

_HNR_MIN_R = 1e-6


@dataclass(frozen=True)
class AudioSignal(object):
    """Mono samples in [-1, 1] and their sample rate
    """
    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise SignalError("Sample rate must be positive")
        if len(self.samples) == 0:
            raise SignalError("Empty signal")

    @property
    def duration(self):
        return len(self.samples) / float(self.sample_rate)

    def scaled(self, factor):
        """The signal multiplied by `factor`
        """
        return AudioSignal(self.samples * factor, self.sample_rate)

    def span(self, start, end):
        """The part of the signal in [start, end) seconds
        """
        tolerance = 1.0 / self.sample_rate
        if start < 0 or end > self.duration + tolerance or not end > start:
            raise SignalError("Span [%.3f, %.3f) outside audio of %.3f s"
                              % (start, end, self.duration))
        first = int(round(start * self.sample_rate))
        last = min(len(self.samples), int(round(end * self.sample_rate)))
        if last <= first:
            raise SignalError("Span [%.3f, %.3f) has no samples"
                              % (start, end))
        return AudioSignal(self.samples[first:last], self.sample_rate)


def read_audio(path, channel=0):
    """Read one channel of a PCM WAV file
    """
    try:
        sample_rate, data = wavfile.read(path)
    except (ValueError, EOFError) as err:
        raise AudioFormatError("Cannot decode '%s' (%s)" % (path, err))
    except (IOError, OSError) as err:
        raise AudioFormatError("Cannot read '%s' (%s)" % (path, err))

    if data.dtype == np.int16:
        samples = data / 32768.0
    elif data.dtype == np.int32:
        samples = data / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise AudioFormatError("Unsupported encoding %s in '%s'"
                               % (data.dtype, path))

    n_channels = 1 if samples.ndim == 1 else samples.shape[1]
    if not 0 <= channel < n_channels:
        raise AudioFormatError("Channel %d out of range, '%s' has %d"
                               % (channel, path, n_channels))
    if samples.ndim > 1:
        samples = samples[:, channel]
    return AudioSignal(np.ascontiguousarray(samples, dtype=np.float64),
                       float(sample_rate))


@dataclass(frozen=True)
class PitchTrack(object):
    """Frame times (s) and F0 (Hz), NaN where unvoiced
    """
    times: np.ndarray
    frequencies: np.ndarray
    time_step: float
    window: float

    @property
    def voiced(self):
        return np.isfinite(self.frequencies)


def _frame_starts(n_samples, frame_length, hop):
    """Start indices of the frames covering a signal
    """
    if n_samples < frame_length:
        return np.array([], dtype=int)
    n_frames = (n_samples - frame_length) // hop + 1
    offset = (n_samples - frame_length - (n_frames - 1) * hop) // 2
    return offset + hop * np.arange(n_frames)


def _autocorrelation(frames, n_fft):
    """Autocorrelation of each row, lags 0 .. n_fft // 2
    """
    spectrum = np.fft.rfft(frames, n_fft, axis=-1)
    return np.fft.irfft(np.abs(spectrum) ** 2, n_fft, axis=-1)


def _parabolic(values, index):
    """Offset and height of the parabola through a peak and its neighbours
    """
    left, middle, right = values[index - 1], values[index], values[index + 1]
    denominator = left - 2 * middle + right
    if denominator == 0:
        return 0.0, middle
    offset = 0.5 * (left - right) / denominator
    return offset, middle - 0.25 * (left - right) * offset


def _candidate_strengths(corrected, lags, rate, floor, ceiling):
    """Strength and frequency of every autocorrelation peak

    `corrected` holds one normalized autocorrelation per row, columns are
    lags from 0. Entries that are no local maximum in the pitch range
    have strength -inf.
    """
    left = corrected[:, lags - 1]
    middle = corrected[:, lags]
    right = corrected[:, lags + 1]
    peaks = (middle > left) & (middle >= right)
    with np.errstate(divide='ignore', invalid='ignore'):
        denominator = left - 2 * middle + right
        offsets = np.where(denominator != 0,
                           0.5 * (left - right) / denominator, 0.0)
        heights = middle - 0.25 * (left - right) * offsets
        heights = np.where(heights > 1.0, 1.0 / heights, heights)
        frequencies = rate / (lags + offsets)
        strengths = heights - OCTAVE_COST * np.log2(floor / frequencies)
    valid = peaks & (frequencies >= floor) & (frequencies <= ceiling)
    return np.where(valid, strengths, -np.inf), frequencies


def extract_pitch(sig, floor=75.0, ceiling=600.0, step=0.010,
                  voicing_threshold=0.45):
    """Track the fundamental frequency of a signal
    """
    rate = sig.sample_rate
    if not 0 < floor < ceiling < rate / 2.0:
        raise ValueError("Need 0 < floor < ceiling < sample_rate / 2")
    window = 3.0 / floor
    frame_length = int(round(window * rate))
    if len(sig.samples) < frame_length:
        raise SignalError("Signal of %.3f s too short for pitch floor %g Hz"
                          % (sig.duration, floor))

    hop = max(1, int(round(step * rate)))
    starts = _frame_starts(len(sig.samples), frame_length, hop)
    times = (starts + frame_length / 2.0) / rate
    frequencies = np.full(len(starts), np.nan)
    global_peak = np.abs(sig.samples - sig.samples.mean()).max()
    if global_peak == 0:
        return PitchTrack(times, frequencies, step, window)

    hann = np.hanning(frame_length + 2)[1:-1]
    n_fft = int(2 ** np.ceil(np.log2(2 * frame_length)))
    window_acf = _autocorrelation(hann, n_fft)
    window_acf = window_acf / window_acf[0]

    frames = sig.samples[starts[:, None] + np.arange(frame_length)]
    frames = frames - frames.mean(axis=1, keepdims=True)
    local_peaks = np.abs(frames).max(axis=1)
    acf = _autocorrelation(frames * hann, n_fft)

    min_lag = max(1, int(np.ceil(rate / ceiling)))
    max_lag = min(int(np.floor(rate / floor)), frame_length // 2,
                  n_fft // 2 - 2)
    energy = acf[:, 0]
    sounding = energy > 0
    corrected = acf[sounding, :max_lag + 2] / energy[sounding, None] / \
        window_acf[:max_lag + 2]
    unvoiced = voicing_threshold + np.maximum(
        0.0, 2.0 - (local_peaks[sounding] / global_peak) /
        (SILENCE_THRESHOLD / (1.0 + voicing_threshold)))

    strengths, candidates = _candidate_strengths(
        corrected, np.arange(min_lag, max_lag + 1), rate, floor, ceiling)
    best = np.argmax(strengths, axis=1)
    rows = np.arange(len(best))
    voiced = strengths[rows, best] > unvoiced
    frequencies[np.flatnonzero(sounding)[voiced]] = \
        candidates[rows, best][voiced]
    return PitchTrack(times, frequencies, step, window)


def extract_intensity(sig, step=0.010, window=0.032):
    """Intensity contour in dB re 1e-10
    """
    if window < step:
        raise ValueError("Intensity window must not be shorter than step")
    rate = sig.sample_rate
    frame_length = max(1, int(round(window * rate)))
    if len(sig.samples) < frame_length:
        frame_length = len(sig.samples)
    hop = max(1, int(round(step * rate)))
    starts = _frame_starts(len(sig.samples), frame_length, hop)
    weights = np.hanning(frame_length + 2)[1:-1]
    frames = sig.samples[starts[:, None] + np.arange(frame_length)]
    mean_square = (frames ** 2 * weights).sum(axis=1) / weights.sum()
    return 10.0 * np.log10(np.maximum(mean_square, INTENSITY_REFERENCE) /
                           INTENSITY_REFERENCE)


def _voiced_runs(track):
    """(first, last) frame numbers of runs of voiced frames
    """
    runs = []
    start = None
    for number, voiced in enumerate(track.voiced):
        if voiced and start is None:
            start = number
        elif not voiced and start is not None:
            runs.append((start, number - 1))
            start = None
    if start is not None:
        runs.append((start, len(track.voiced) - 1))
    return runs


def _periods(sig, track, first, last):
    """Times and amplitudes of the waveform peaks of a voiced run
    """
    rate = sig.sample_rate
    begin = max(0, int((track.times[first] - track.time_step / 2.0) * rate))
    end = min(len(sig.samples),
              int(np.ceil((track.times[last] + track.time_step / 2.0)
                          * rate)) + 1)
    segment = sig.samples[begin:end]
    mean_f0 = np.nanmean(track.frequencies[first:last + 1])
    peaks, _props = sps.find_peaks(segment,
                                   distance=max(1, 0.7 * rate / mean_f0))
    peaks = peaks[(peaks > 0) & (peaks < len(segment) - 1)]
    times = []
    amplitudes = []
    for peak in peaks:
        offset, height = _parabolic(segment, peak)
        times.append((begin + peak + offset) / rate)
        amplitudes.append(height)
    return np.array(times), np.array(amplitudes)


def _period_statistics(runs, floor, ceiling):
    """Jitter and shimmer from the peaks of each voiced run
    """
    differences = []
    amplitude_differences = []
    periods = []
    amplitudes = []
    for times, peak_amplitudes in runs:
        lengths = np.diff(times)
        valid = (lengths >= 1.0 / ceiling) & (lengths <= 1.0 / floor)
        periods.extend(lengths[valid])
        amplitudes.extend(peak_amplitudes[1:][valid])
        for number in range(1, len(lengths)):
            if not (valid[number] and valid[number - 1]):
                continue
            ratio = lengths[number] / lengths[number - 1]
            if 1.0 / PERIOD_FACTOR <= ratio <= PERIOD_FACTOR:
                differences.append(abs(lengths[number] -
                                       lengths[number - 1]))
                amplitude_differences.append(abs(peak_amplitudes[number + 1] -
                                                 peak_amplitudes[number]))
    if len(periods) < 3 or len(differences) < 2:
        return np.nan, np.nan
    jitter = np.mean(differences) / np.mean(periods)
    mean_amplitude = np.mean(amplitudes)
    shimmer = (np.mean(amplitude_differences) / mean_amplitude
               if mean_amplitude > 0 else np.nan)
    return jitter, shimmer


def _nccf_at(samples, start, length, lag):
    """Normalized cross-correlation of a frame with its copy `lag` later
    """
    first = samples[start:start + length]
    second = samples[start + lag:start + lag + length]
    energy = np.sqrt(np.dot(first, first) * np.dot(second, second))
    if energy == 0:
        return 0.0
    return np.dot(first, second) / energy


def _harmonicity(sig, track):
    """Mean normalized cross-correlation at the pitch lag of voiced frames
    """
    rate = sig.sample_rate
    length = int(round(track.window * rate))
    values = []
    for time, frequency in zip(track.times, track.frequencies):
        if not np.isfinite(frequency):
            continue
        lag = int(round(rate / frequency))
        start = max(0, int(round(time * rate)) - length // 2)
        if lag < 2 or start + lag + 1 + length > len(sig.samples):
            continue
        around = np.array([_nccf_at(sig.samples, start, length, candidate)
                           for candidate in (lag - 1, lag, lag + 1)])
        if around[1] >= around[0] and around[1] >= around[2]:
            _offset, value = _parabolic(around, 1)
        else:
            value = around.max()
        values.append(value)
    if not values:
        return np.nan
    r = np.clip(np.mean(values), _HNR_MIN_R, 1.0 - _HNR_MIN_R)
    return 10.0 * np.log10(r / (1.0 - r))


def jitter_shimmer_hnr(sig, track, floor=75.0, ceiling=600.0):
    """Local jitter, local shimmer and HNR (dB) of the voiced parts

    Fields are NaN when there is too little voiced material.
    """
    runs = [_periods(sig, track, first, last)
            for first, last in _voiced_runs(track)]
    jitter, shimmer = _period_statistics(runs, floor, ceiling)
    hnr = _harmonicity(sig, track)
    return jitter, shimmer, hnr


def estimate_snr(sig):
    """Speech-to-noise ratio (dB) from the loudest and quietest frames
    """
    if sig.duration < 1.0:
        raise SignalError("Need at least 1 s of audio to estimate SNR")
    frame_length = int(round(SNR_FRAME * sig.sample_rate))
    n_frames = len(sig.samples) // frame_length
    frames = sig.samples[:n_frames * frame_length].reshape(n_frames, -1)
    energies = (frames ** 2).mean(axis=1)
    if not energies.max() > 0:
        raise SignalError("All-silent signal")
    speech = energies[energies >= np.percentile(energies,
                                                SNR_SPEECH_PERCENTILE)]
    noise = energies[energies <= np.percentile(energies,
                                               SNR_NOISE_PERCENTILE)]
    if noise.mean() == 0:
        log.warning("Digital silence as noise floor, SNR is infinite")
        return np.inf
    return 10.0 * np.log10(speech.mean() / noise.mean())


REFERENCE_SNR = 54.3
"""Mean SNR of a carefully denoised conversational corpus
"""


@dataclass(frozen=True)
class SnrSummary(object):
    """SNR statistics of a batch of recordings
    """
    n: int
    mean: float
    median: float
    mode: float
    pct_above: float
    threshold: float
    reference: float = REFERENCE_SNR


def snr_summary(values, threshold=30.0, reference=REFERENCE_SNR):
    """Mean, median, mode (0.1 dB bins) and share above `threshold`
    """
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise SignalError("No SNR values to summarize")
    finite = values[np.isfinite(values)]
    pct_above = 100.0 * np.sum(values >= threshold) / len(values)
    if len(finite) == 0:
        return SnrSummary(len(values), np.inf, np.inf, np.inf, pct_above,
                          threshold, reference)
    bins = Counter(np.round(finite, 1))
    top = max(bins.values())
    mode = min(value for value, count in bins.items() if count == top)
    return SnrSummary(len(values), float(np.mean(finite)),
                      float(np.median(finite)), float(mode), pct_above,
                      threshold, reference)
