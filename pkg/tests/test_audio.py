"""Tests the audio module of pyentrain
"""
import unittest
import tempfile
import shutil
import os

import numpy as np
from scipy.io import wavfile

from pyentrain.audio import (AudioSignal, read_audio, extract_pitch,
                             extract_intensity, jitter_shimmer_hnr,
                             estimate_snr, snr_summary)
from pyentrain.errors import AudioFormatError, SignalError

RATE = 16000


def tone(frequency, duration, amplitude=0.5):
    """A sine tone at 16 kHz
    """
    times = np.arange(int(duration * RATE)) / float(RATE)
    return AudioSignal(amplitude * np.sin(2 * np.pi * frequency * times),
                       float(RATE))


class TestSignal(unittest.TestCase):
    """Test signals and reading them
    """
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_span(self):
        """Test cutting a span out of a signal
        """
        sig = AudioSignal(np.zeros(RATE), float(RATE))
        self.assertEqual(sig.duration, 1.0)
        self.assertEqual(len(sig.span(0.25, 0.5).samples), 4000)
        self.assertRaises(SignalError, sig.span, 0.5, 2.0)
        self.assertRaises(SignalError, sig.span, 0.5, 0.5)

    def test_invalid_signal(self):
        """Test empty signals and bad rates are rejected
        """
        self.assertRaises(SignalError, AudioSignal, np.zeros(0), 16000.0)
        self.assertRaises(SignalError, AudioSignal, np.zeros(10), 0.0)

    def test_read_channel(self):
        """Test reading one channel of a stereo file
        """
        filename = os.path.join(self.directory, 'stereo.wav')
        data = np.zeros((RATE, 2), dtype=np.int16)
        data[:, 1] = 16384
        wavfile.write(filename, RATE, data)
        sig = read_audio(filename, 1)
        self.assertEqual(sig.sample_rate, RATE)
        self.assertAlmostEqual(sig.samples[0], 0.5)
        self.assertEqual(read_audio(filename, 0).samples.max(), 0.0)
        self.assertRaises(AudioFormatError, read_audio, filename, 2)

    def test_read_errors(self):
        """Test undecodable and missing files
        """
        filename = os.path.join(self.directory, 'garbage.wav')
        with open(filename, 'wb') as outfile:
            outfile.write(b'not a wave file at all')
        self.assertRaises(AudioFormatError, read_audio, filename)
        self.assertRaises(AudioFormatError, read_audio,
                          os.path.join(self.directory, 'missing.wav'))


class TestPitch(unittest.TestCase):
    """Test the pitch tracker
    """
    def test_tone(self):
        """Test a 200 Hz tone is tracked at 200 Hz
        """
        track = extract_pitch(tone(200.0, 0.5))
        self.assertGreater(np.mean(track.voiced), 0.8)
        self.assertAlmostEqual(np.nanmedian(track.frequencies), 200.0,
                               delta=2.0)

    def test_low_tone(self):
        """Test a 120 Hz tone is not mistaken for its octave
        """
        track = extract_pitch(tone(120.0, 0.5))
        self.assertAlmostEqual(np.nanmedian(track.frequencies), 120.0,
                               delta=2.0)

    def test_tone_range(self):
        """Test tones from 100 Hz to 400 Hz are tracked within 1 Hz
        """
        for frequency in np.arange(100.0, 401.0, 25.0):
            track = extract_pitch(tone(frequency, 0.5))
            self.assertGreater(np.mean(track.voiced), 0.8)
            self.assertLess(abs(np.nanmean(track.frequencies) - frequency),
                            1.0, "%g Hz" % frequency)

    def test_white_noise_unvoiced(self):
        """Test white noise is mostly unvoiced
        """
        noise = np.random.default_rng(0).normal(0.0, 0.3, RATE)
        track = extract_pitch(AudioSignal(noise, float(RATE)))
        self.assertGreaterEqual(1.0 - np.mean(track.voiced), 0.9)

    def test_floor_bounds_candidates(self):
        """Test no frequency below the pitch floor is reported
        """
        track = extract_pitch(tone(200.0, 0.5), floor=300.0)
        self.assertFalse((track.frequencies[track.voiced] < 300.0).any())

    def test_silence_unvoiced(self):
        """Test silence has no pitch
        """
        track = extract_pitch(AudioSignal(np.zeros(RATE // 2), float(RATE)))
        self.assertFalse(track.voiced.any())

    def test_parameters(self):
        """Test invalid ranges and too short signals
        """
        self.assertRaises(ValueError, extract_pitch, tone(200.0, 0.5),
                          600.0, 75.0)
        self.assertRaises(SignalError, extract_pitch, tone(200.0, 0.02))


class TestIntensity(unittest.TestCase):
    """Test the intensity contour
    """
    def test_full_scale(self):
        """Test a full scale signal has 100 dB
        """
        contour = extract_intensity(AudioSignal(np.ones(RATE), float(RATE)))
        np.testing.assert_allclose(contour, 100.0)

    def test_silence(self):
        """Test silence is floored at 0 dB
        """
        contour = extract_intensity(AudioSignal(np.zeros(RATE), float(RATE)))
        np.testing.assert_allclose(contour, 0.0)

    def test_tone(self):
        """Test a tone's intensity follows its mean square
        """
        contour = extract_intensity(tone(200.0, 0.5))
        self.assertAlmostEqual(np.median(contour),
                               10 * np.log10(0.125 / 1e-10), delta=0.5)

    def test_window_shorter_than_step(self):
        """Test the window must cover the step
        """
        self.assertRaises(ValueError, extract_intensity, tone(200.0, 0.5),
                          0.05, 0.01)


class TestVoiceQuality(unittest.TestCase):
    """Test jitter, shimmer and HNR
    """
    def test_pure_tone(self):
        """Test a pure tone is periodic and harmonic
        """
        sig = tone(200.0, 0.5)
        jitter, shimmer, hnr = jitter_shimmer_hnr(sig, extract_pitch(sig))
        self.assertLess(jitter, 0.001)
        self.assertLess(shimmer, 0.001)
        self.assertGreater(hnr, 30.0)

    def test_noisy_tone(self):
        """Test a tone in noise of equal power has an HNR near 0 dB
        """
        clean = tone(200.0, 1.0)
        noise = np.random.default_rng(0).normal(
            0.0, np.sqrt(np.mean(clean.samples ** 2)), len(clean.samples))
        sig = AudioSignal(clean.samples + noise, float(RATE))
        _jitter, _shimmer, hnr = jitter_shimmer_hnr(sig, extract_pitch(sig))
        self.assertAlmostEqual(hnr, 0.0, delta=2.0)

    def test_amplitude_scaling(self):
        """Test scaling shifts intensity by 20 log10(c) and nothing else
        """
        sig = tone(200.0, 0.5)
        track = extract_pitch(sig)
        contour = extract_intensity(sig)
        quality = jitter_shimmer_hnr(sig, track)
        for factor in (0.1, 1.7):
            scaled = sig.scaled(factor)
            scaled_track = extract_pitch(scaled)
            np.testing.assert_allclose(scaled_track.frequencies,
                                       track.frequencies, rtol=1e-9)
            np.testing.assert_allclose(extract_intensity(scaled) - contour,
                                       20 * np.log10(factor), atol=0.01)
            np.testing.assert_allclose(
                jitter_shimmer_hnr(scaled, scaled_track), quality,
                rtol=1e-6, atol=1e-9)

    def test_unvoiced(self):
        """Test unvoiced signals give NaN
        """
        sig = AudioSignal(np.zeros(RATE // 2), float(RATE))
        jitter, shimmer, hnr = jitter_shimmer_hnr(sig, extract_pitch(sig))
        self.assertTrue(np.isnan(jitter))
        self.assertTrue(np.isnan(shimmer))
        self.assertTrue(np.isnan(hnr))


class TestSnr(unittest.TestCase):
    """Test the speech-to-noise ratio
    """
    def test_tone_and_noise(self):
        """Test a tone followed by weak noise
        """
        noise = np.random.default_rng(0).normal(0.0, 0.005, RATE)
        samples = np.concatenate([tone(200.0, 1.0).samples, noise])
        snr = estimate_snr(AudioSignal(samples, float(RATE)))
        self.assertGreater(snr, 30.0)
        self.assertLess(snr, 45.0)

    def test_digital_silence(self):
        """Test a digitally silent noise floor gives infinity
        """
        samples = np.concatenate([tone(200.0, 1.0).samples, np.zeros(RATE)])
        self.assertEqual(estimate_snr(AudioSignal(samples, float(RATE))),
                         np.inf)

    def test_errors(self):
        """Test short and silent signals
        """
        self.assertRaises(SignalError, estimate_snr, tone(200.0, 0.5))
        self.assertRaises(SignalError, estimate_snr,
                          AudioSignal(np.zeros(2 * RATE), float(RATE)))

    def test_summary(self):
        """Test the summary statistics
        """
        summary = snr_summary([30.0, 40.0, 20.0, 40.04], threshold=30.0)
        self.assertEqual(summary.n, 4)
        self.assertAlmostEqual(summary.mean, 32.51)
        self.assertAlmostEqual(summary.median, 35.0)
        self.assertAlmostEqual(summary.mode, 40.0)
        self.assertAlmostEqual(summary.pct_above, 75.0)
        self.assertEqual(summary.reference, 54.3)

    def test_summary_empty(self):
        """Test an empty batch cannot be summarized
        """
        self.assertRaises(SignalError, snr_summary, [])


if __name__ == '__main__':
    unittest.main()
