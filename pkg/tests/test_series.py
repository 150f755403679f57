"""Tests the series module of pyentrain
"""
import unittest

import numpy as np

from pyentrain.corpus import (Lang, Token, Utterance, Speaker, Conversation,
                              order_utterances)
from pyentrain.csw import CswFeatures, CswStrategy
from pyentrain.measures import FeatureSeries
from pyentrain.prosody import PROSODY_FIELDS
from pyentrain.series import (CSW_FEATURES, turn_rows, csw_series,
                              weighted_mean, prosody_series, side_means)

INSERTION = CswFeatures(1, 0.5, frozenset([CswStrategy.INSERTIONAL]))
ALTERNATION = CswFeatures(1, 0.5, frozenset([CswStrategy.ALTERNATIONAL,
                                             CswStrategy.OTHER]))
MONO = CswFeatures(0, 0.0)


def conversation(speakers, durations=None, lengths=None):
    """Conversation with one utterance per speaker entry
    """
    durations = durations or [1.0] * len(speakers)
    lengths = lengths or [2] * len(speakers)
    utterances = []
    start = 0.0
    for speaker, duration, length in zip(speakers, durations, lengths):
        utterances.append(Utterance(speaker, start, start + duration, tuple(
            Token('w%d' % number, Lang.LANG1) for number in range(length))))
        start += duration
    return Conversation('c', (Speaker('A'), Speaker('B')),
                        order_utterances(utterances))


class TestTurnRows(unittest.TestCase):
    """Test turns and their utterance rows
    """
    def test_rows(self):
        """Test consecutive utterances share a turn
        """
        rows = turn_rows(conversation('AABBA'))
        self.assertEqual([(turn.speaker_id, row) for turn, row in rows],
                         [('A', [0, 1]), ('B', [2, 3]), ('A', [4])])


class TestCswSeries(unittest.TestCase):
    """Test CSW features per turn
    """
    def setUp(self):
        conv = conversation('AABBA', lengths=[2, 6, 4, 4, 2])
        self.series = csw_series(conv, [INSERTION, MONO, ALTERNATION,
                                        INSERTION, None])

    def test_all_features(self):
        """Test there is one series per CSW feature
        """
        self.assertEqual(sorted(self.series), sorted(CSW_FEATURES))
        for series in self.series.values():
            self.assertEqual(len(series.records), 3)

    def test_presence(self):
        """Test presence is the maximum over the turn
        """
        values = self.series['csw_presence'].values
        np.testing.assert_array_equal(values[:2], [1.0, 1.0])
        self.assertTrue(np.isnan(values[2]))

    def test_amount(self):
        """Test the amount weights utterances by their tokens
        """
        values = self.series['csw_amount'].values
        self.assertAlmostEqual(values[0], 1.0 / 8.0)
        self.assertAlmostEqual(values[1], 0.5)

    def test_strategies(self):
        """Test a strategy is present if any utterance uses it
        """
        np.testing.assert_array_equal(
            self.series['csw_insertional'].values[:2], [1.0, 1.0])
        np.testing.assert_array_equal(
            self.series['csw_alternational'].values[:2], [0.0, 1.0])
        np.testing.assert_array_equal(
            self.series['csw_other'].values[:2], [0.0, 1.0])

    def test_length_mismatch(self):
        """Test one feature entry is needed per utterance
        """
        self.assertRaises(ValueError, csw_series, conversation('AB'),
                          [MONO])


class TestProsodySeries(unittest.TestCase):
    """Test prosodic features per turn
    """
    def test_weighted_mean(self):
        """Test missing values are ignored
        """
        self.assertAlmostEqual(weighted_mean([1.0, 4.0, np.nan],
                                             [1.0, 2.0, 5.0]), 3.0)
        self.assertTrue(np.isnan(weighted_mean([np.nan], [1.0])))

    def test_series(self):
        """Test utterance values are averaged by duration
        """
        conv = conversation('AAB', durations=[1.0, 3.0, 2.0])
        matrix = np.full((3, len(PROSODY_FIELDS)), np.nan)
        matrix[:, 0] = [100.0, 200.0, 150.0]
        series = prosody_series(conv, matrix)
        self.assertEqual(sorted(series), sorted(PROSODY_FIELDS))
        np.testing.assert_allclose(series['pitch_min'].values,
                                   [175.0, 150.0])
        self.assertTrue(np.isnan(series['hnr'].values).all())

    def test_shape(self):
        """Test the matrix must match the utterances
        """
        self.assertRaises(ValueError, prosody_series, conversation('AB'),
                          np.zeros((3, len(PROSODY_FIELDS))))


class TestSideMeans(unittest.TestCase):
    """Test the mean value of each side
    """
    def test_means(self):
        """Test means per speaker, NaN without values
        """
        series = FeatureSeries.from_values('c', 'f', 'ABAB',
                                           [1.0, np.nan, 3.0, np.nan])
        means = side_means([series])
        self.assertEqual(means[0].speaker_id, 'A')
        self.assertEqual(means[0].value, 2.0)
        self.assertTrue(np.isnan(means[1].value))


if __name__ == '__main__':
    unittest.main()
