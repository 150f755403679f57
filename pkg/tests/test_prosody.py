"""Tests the prosody module of pyentrain
"""
import unittest
import tempfile
import shutil
import os

import numpy as np
from scipy.io import wavfile

from pyentrain.corpus import (Lang, Token, Utterance, Speaker, Conversation,
                              AudioRef, order_utterances)
from pyentrain.audio import AudioSignal
from pyentrain.prosody import (ProsodyVector, PROSODY_FIELDS, syllable_count,
                               speaking_rate, utterance_prosody,
                               conversation_prosody,
                               zscore_by_speaker, normalize_corpus_prosody,
                               write_feature_dump, read_feature_dump,
                               dump_matrix)
from pyentrain.errors import SignalError, CorpusFormatError

RATE = 16000


def utterance(speaker, start, end, *words):
    """Spanish utterance of the given words
    """
    return Utterance(speaker, start, end,
                     tuple(Token(word, Lang.LANG1) for word in words))


class TestSpeakingRate(unittest.TestCase):
    """Test the syllable estimate
    """
    def test_syllables(self):
        """Test vowel groups are counted
        """
        self.assertEqual(syllable_count('playa', Lang.LANG1), 2)
        self.assertEqual(syllable_count('canción', Lang.LANG1), 2)
        self.assertEqual(syllable_count('happy', Lang.LANG2), 2)
        self.assertEqual(syllable_count('rhythm', Lang.LANG2), 1)

    def test_rate(self):
        """Test syllables per second
        """
        self.assertAlmostEqual(
            speaking_rate(utterance('A', 1.0, 3.0, 'hola', 'amigo')), 2.5)


class TestProsodyVector(unittest.TestCase):
    """Test the feature vector
    """
    def test_fields(self):
        """Test the twelve features and their order
        """
        self.assertEqual(len(PROSODY_FIELDS), 12)
        self.assertEqual(PROSODY_FIELDS[0], 'pitch_min')
        self.assertEqual(PROSODY_FIELDS[-1], 'speaking_rate')

    def test_missing(self):
        """Test missing features are NaN
        """
        vector = ProsodyVector(speaking_rate=3.0)
        self.assertEqual(len(vector.missing), 11)
        self.assertNotIn('speaking_rate', vector.missing)
        array = vector.as_array()
        self.assertEqual(array[-1], 3.0)
        self.assertEqual(ProsodyVector.from_array(array).speaking_rate, 3.0)


class TestConversationProsody(unittest.TestCase):
    """Test extracting the features of a recorded conversation
    """
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        times = np.arange(2 * RATE) / float(RATE)
        left = 0.5 * np.sin(2 * np.pi * 200.0 * times)
        right = np.zeros(len(times))
        right[RATE:] = 0.5 * np.sin(2 * np.pi * 120.0 * times[RATE:])
        self.path = os.path.join(self.directory, 'c.wav')
        wavfile.write(self.path, RATE, np.stack([left, right], axis=1)
                      .astype(np.float32))
        self.conversation = Conversation(
            'c', (Speaker('A'), Speaker('B')),
            order_utterances([utterance('A', 0.0, 0.9, 'hola'),
                              utterance('B', 1.0, 1.9, 'que', 'tal'),
                              utterance('A', 1.9, 2.5, 'bien')]),
            AudioRef(self.path, (('A', 0), ('B', 1))))

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_features(self):
        """Test pitch and intensity follow the channel of each speaker
        """
        matrix = conversation_prosody(self.conversation)
        self.assertEqual(matrix.shape, (3, 12))
        mean_pitch = PROSODY_FIELDS.index('pitch_mean')
        mean_intensity = PROSODY_FIELDS.index('intensity_mean')
        self.assertAlmostEqual(matrix[0, mean_pitch], 200.0, delta=3.0)
        self.assertAlmostEqual(matrix[1, mean_pitch], 120.0, delta=3.0)
        self.assertAlmostEqual(matrix[0, mean_intensity], 91.0, delta=1.0)
        self.assertAlmostEqual(matrix[1, -1], 2.0 / 0.9)

    def test_outside_recording(self):
        """Test utterances past the end of the audio stay missing
        """
        matrix = conversation_prosody(self.conversation)
        self.assertTrue(np.isnan(matrix[2]).all())

    def test_no_audio(self):
        """Test conversations without audio are rejected
        """
        self.assertRaises(SignalError, conversation_prosody,
                          Conversation('x', (), ()))


def tone(frequencies, seconds=1.0):
    """Consecutive sine segments of equal length at the given frequencies
    """
    times = np.arange(int(seconds * RATE)) / float(RATE)
    return np.concatenate([0.5 * np.sin(2 * np.pi * frequency * times)
                           for frequency in frequencies])


class TestUtteranceProsody(unittest.TestCase):
    """Test the features of a single utterance
    """
    def test_constant_tone(self):
        """Test a 200 Hz tone has flat pitch at 200 Hz
        """
        sig = AudioSignal(tone([200.0]), float(RATE))
        vector = utterance_prosody(sig, utterance('A', 0.0, 1.0, 'hola'))
        self.assertAlmostEqual(vector.pitch_min, 200.0, delta=2.0)
        self.assertAlmostEqual(vector.pitch_mean, 200.0, delta=1.0)
        self.assertAlmostEqual(vector.pitch_max, 200.0, delta=2.0)
        self.assertLess(vector.pitch_sd, 1.0)
        self.assertAlmostEqual(vector.speaking_rate, 2.0)

    def test_two_tones(self):
        """Test halves at 150 Hz and 250 Hz average to about 200 Hz
        """
        sig = AudioSignal(tone([150.0, 250.0]), float(RATE))
        vector = utterance_prosody(sig, utterance('A', 0.0, 2.0, 'hola'))
        self.assertAlmostEqual(vector.pitch_mean, 200.0, delta=10.0)
        self.assertAlmostEqual(vector.pitch_min, 150.0, delta=10.0)
        self.assertAlmostEqual(vector.pitch_max, 250.0, delta=10.0)

    def test_silence(self):
        """Test a silent span has floored intensity and no pitch
        """
        sig = AudioSignal(np.zeros(RATE), float(RATE))
        vector = utterance_prosody(sig, utterance('A', 0.0, 1.0, 'hola'))
        self.assertEqual(vector.intensity_mean, 0.0)
        for name in ('pitch_mean', 'jitter', 'shimmer', 'hnr'):
            self.assertTrue(np.isnan(getattr(vector, name)))

    def test_outside_signal(self):
        """Test spans past the end of the signal are rejected
        """
        sig = AudioSignal(tone([200.0]), float(RATE))
        self.assertRaises(SignalError, utterance_prosody, sig,
                          utterance('A', 0.5, 1.5, 'hola'))


class TestNormalization(unittest.TestCase):
    """Test the per-speaker z-scores
    """
    def test_two_values(self):
        """Test two values become -0.7071 and 0.7071
        """
        scores = zscore_by_speaker({'A': np.array([[100.0], [200.0]])})
        np.testing.assert_allclose(scores['A'][:, 0],
                                   [-np.sqrt(0.5), np.sqrt(0.5)])

    def test_missing_and_degenerate(self):
        """Test NaN stays NaN, constant and single-value columns are NaN
        """
        scores = zscore_by_speaker({'A': np.array([[1.0, 5.0, 1.0],
                                                   [np.nan, 5.0, np.nan],
                                                   [3.0, 5.0, np.nan]])})
        self.assertTrue(np.isnan(scores['A'][1, 0]))
        np.testing.assert_allclose(scores['A'][[0, 2], 0],
                                   [-np.sqrt(0.5), np.sqrt(0.5)])
        self.assertTrue(np.isnan(scores['A'][:, 1]).all())
        self.assertTrue(np.isnan(scores['A'][:, 2]).all())

    def test_across_conversations(self):
        """Test speakers are normalized over all their conversations
        """
        first = Conversation('c1', (Speaker('A'), Speaker('B')),
                             order_utterances([utterance('A', 0, 1, 'a'),
                                               utterance('B', 1, 2, 'b')]))
        second = Conversation('c2', (Speaker('A'), Speaker('C')),
                              order_utterances([utterance('A', 0, 1, 'a'),
                                                utterance('C', 1, 2, 'c')]))
        normalized = normalize_corpus_prosody({
            'c1': (first, np.array([[100.0], [50.0]])),
            'c2': (second, np.array([[200.0], [60.0]]))})
        self.assertAlmostEqual(normalized['c1'][0, 0], -np.sqrt(0.5))
        self.assertAlmostEqual(normalized['c2'][0, 0], np.sqrt(0.5))
        self.assertTrue(np.isnan(normalized['c1'][1, 0]))


class TestFeatureDump(unittest.TestCase):
    """Test the per-utterance feature dump
    """
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.filename = os.path.join(self.directory, 'prosody.csv')

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_write_read(self):
        """Test values and missing features survive the dump
        """
        conversation = Conversation(
            'c', (Speaker('A'), Speaker('B')),
            order_utterances([utterance('A', 0, 1, 'a'),
                              utterance('B', 1, 2, 'b')]))
        vector = ProsodyVector(pitch_mean=180.5, speaking_rate=4.0)
        write_feature_dump([('c', conversation.utterances[1], vector)],
                           self.filename)
        dump = read_feature_dump(self.filename)
        self.assertEqual(dump['c'][1].pitch_mean, 180.5)
        self.assertTrue(np.isnan(dump['c'][1].hnr))
        matrix = dump_matrix(conversation, dump)
        self.assertTrue(np.isnan(matrix[0]).all())
        self.assertEqual(matrix[1, -1], 4.0)

    def test_missing_columns(self):
        """Test dumps without the feature columns are rejected
        """
        with open(self.filename, 'w') as outfile:
            outfile.write("conversation,utterance_index\nc,0\n")
        self.assertRaises(CorpusFormatError, read_feature_dump,
                          self.filename)

    def test_bad_value(self):
        """Test unparsable values name their line
        """
        with open(self.filename, 'w') as outfile:
            outfile.write(",".join(('conversation', 'utterance_index',
                                    'speaker') + PROSODY_FIELDS) + "\n")
            outfile.write("c,0,A," + ",".join(['x'] * 12) + "\n")
        with self.assertRaises(CorpusFormatError) as context:
            read_feature_dump(self.filename)
        self.assertEqual(context.exception.line, 2)


if __name__ == '__main__':
    unittest.main()
