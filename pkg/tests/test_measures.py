"""Tests the measures module of pyentrain
"""
import unittest

import numpy as np

from pyentrain.measures import (Measure, Status, TurnValue, FeatureSeries,
                                MeasureResult, SideMean, proximity_pairs,
                                turn_proximity, convergence_points,
                                turn_convergence, synchrony_pairs,
                                turn_synchrony, conv_proximity, half_gaps,
                                conv_convergence, turn_measures,
                                thirds_analysis, compare_thirds,
                                pooled_turn_proximity, TURN_MEASURES)
from pyentrain.corpus import nonpartners
from pyentrain.parallel import cell_rng
from pyentrain.stats import Strength, limit_ttest


def alternating(values, cid='c', feature='pitch_mean'):
    """Series of turns alternating between speakers A and B
    """
    return FeatureSeries.from_values(cid, feature,
                                     ['AB'[i % 2] for i in range(len(values))],
                                     values)


def shrinking(turns=20, start=10.0):
    """A constant, B approaching A
    """
    values = []
    for i in range(turns):
        values.append(0.0 if i % 2 == 0 else start - i // 2)
    return alternating(values)


class TestFeatureSeries(unittest.TestCase):
    """Test the series type
    """
    def test_adjacent_same_speaker(self):
        """Test adjacent turns of one speaker are rejected
        """
        self.assertRaises(ValueError, FeatureSeries, 'c', 'f',
                          (TurnValue(0, 'A', 1.0), TurnValue(1, 'A', 2.0)))

    def test_increasing_indices(self):
        """Test indices must increase
        """
        self.assertRaises(ValueError, FeatureSeries, 'c', 'f',
                          (TurnValue(2, 'A', 1.0), TurnValue(1, 'B', 2.0)))

    def test_gaps_allowed(self):
        """Test non-adjacent turns of one speaker are fine
        """
        series = FeatureSeries('c', 'f', (TurnValue(0, 'A', 1.0),
                                          TurnValue(2, 'A', np.nan)))
        self.assertEqual(series.speakers, ['A'])
        self.assertEqual(len(series.present()), 1)
        self.assertTrue(np.isnan(series.values[1]))


class TestProximity(unittest.TestCase):
    """Test turn-level proximity
    """
    def test_pairs(self):
        """Test partner and other differences exclude both neighbours
        """
        partner, other = proximity_pairs(
            alternating([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), other_sample=10)
        np.testing.assert_allclose(partner, [1.0] * 5)
        np.testing.assert_allclose(other, [3.0, 3.0, 3.0, 3.0, 4.0])

    def test_missing_values_skipped(self):
        """Test turns after a missing value have no partner difference
        """
        partner, _other = proximity_pairs(
            alternating([1.0, np.nan, 3.0, 4.0, 5.0, 6.0]))
        self.assertEqual(len(partner), 3)

    def test_detected(self):
        """Test a drifting series shows proximity
        """
        result = turn_proximity(alternating(np.arange(40.0)))
        self.assertIs(result.status, Status.OK)
        self.assertTrue(result.detected)
        self.assertLess(result.statistic, 0.0)
        self.assertEqual(result.n, 39)
        self.assertEqual(result.seed, 0)

    def test_reproducible(self):
        """Test the same seed gives the same result, sampling or not
        """
        series = alternating(np.sin(np.arange(60.0)))
        first = turn_proximity(series, other_sample=3, seed=5)
        second = turn_proximity(series, other_sample=3, seed=5)
        self.assertEqual(first.statistic, second.statistic)
        self.assertEqual(first.seed, 5)

    def test_draws_per_turn(self):
        """Test each target turn samples with its own generator
        """
        values = np.sin(np.arange(40.0))
        _partner, other = proximity_pairs(alternating(values),
                                          other_sample=3, seed=7)
        # turn 39 is B's, the candidates are A's turns 0 to 36
        chosen = cell_rng(7, 'c', 'pitch_mean', 'turn_proximity', 39).choice(
            19, size=3, replace=False)
        expected = np.mean(np.abs(values[39] - values[2 * np.sort(chosen)]))
        self.assertAlmostEqual(other[-1], expected)
        gapped = values.copy()
        gapped[1] = np.nan
        _partner, gapped_other = proximity_pairs(alternating(gapped),
                                                 other_sample=3, seed=7)
        self.assertEqual(gapped_other[-1], other[-1])

    def test_too_short(self):
        """Test short series are not evaluable
        """
        result = turn_proximity(alternating(np.arange(11.0)))
        self.assertIs(result.status, Status.NOT_EVALUABLE)
        self.assertIn('need 12', result.note)
        self.assertFalse(result.detected)

    def test_constant_speakers(self):
        """Test identical partner and other differences are not evaluable
        """
        result = turn_proximity(alternating([0.0, 10.0] * 10))
        self.assertIs(result.status, Status.NOT_EVALUABLE)


class TestConvergence(unittest.TestCase):
    """Test turn-level convergence
    """
    def test_points(self):
        """Test differences to the preceding turn
        """
        self.assertEqual(convergence_points(alternating([0.0, 3.0, 1.0])),
                         [(1, 3.0), (2, 2.0)])

    def test_detected(self):
        """Test shrinking differences are convergence
        """
        result = turn_convergence(shrinking())
        self.assertIs(result.status, Status.OK)
        self.assertGreater(result.statistic, 0.0)
        self.assertAlmostEqual(result.raw_r, -result.statistic)
        self.assertTrue(result.detected)
        self.assertIs(result.label.strength, Strength.STRONG)

    def test_divergence(self):
        """Test growing differences are not convergence
        """
        result = turn_convergence(alternating(
            [0.0 if i % 2 == 0 else i // 2 for i in range(20)]))
        self.assertLess(result.statistic, 0.0)
        self.assertFalse(result.detected)

    def test_not_evaluable(self):
        """Test constant differences and too few points
        """
        self.assertIs(turn_convergence(alternating([0.0, 1.0] * 5)).status,
                      Status.NOT_EVALUABLE)
        self.assertIs(turn_convergence(alternating([0.0, 1.0, 2.0])).status,
                      Status.NOT_EVALUABLE)


class TestSynchrony(unittest.TestCase):
    """Test turn-level synchrony
    """
    def setUp(self):
        leader = [1.0, 5.0, 2.0, 8.0, 3.0, 9.0, 4.0, 7.0]
        values = []
        for number, value in enumerate(leader):
            values.extend([value, value + 0.1 * (-1) ** number])
        self.series = alternating(values)

    def test_pairs(self):
        """Test pairs of preceding partner and follower values
        """
        pairs = synchrony_pairs(self.series, 'B')
        self.assertEqual(len(pairs), 8)
        self.assertEqual(pairs[0][0], 1.0)
        self.assertAlmostEqual(pairs[0][1], 1.1)

    def test_follower_found(self):
        """Test the following speaker is identified
        """
        result = turn_synchrony(self.series)
        self.assertIs(result.status, Status.OK)
        self.assertEqual(result.note, 'follower B')
        self.assertGreater(result.statistic, 0.9)
        self.assertTrue(result.detected)
        self.assertEqual(result.n, 8)

    def test_not_evaluable(self):
        """Test too few pairs
        """
        result = turn_synchrony(alternating([1.0, 2.0, 3.0, 4.0]))
        self.assertIs(result.status, Status.NOT_EVALUABLE)
        self.assertIn('A: 1 pairs', result.note)

    def test_turn_measures(self):
        """Test the three measures in order
        """
        results = turn_measures(self.series)
        self.assertEqual([result.measure for result in results],
                         list(TURN_MEASURES))


def noisy(seed, turns=60):
    """Normal values with speaker B drifting towards A
    """
    rng = np.random.default_rng(seed)
    drift = np.where(np.arange(turns) % 2, 3.0 - np.arange(turns) / 20.0,
                     0.0)
    return rng.normal(size=turns) + drift


class TestInvariance(unittest.TestCase):
    """Test verdicts depend on the shape of a series, not its units
    """
    def test_affine_turn_measures(self):
        """Test scaling and shifting leaves all turn measures unchanged
        """
        for seed in range(5):
            values = noisy(seed)
            results = turn_measures(alternating(values), other_sample=3,
                                    seed=seed)
            transformed = turn_measures(alternating(3.7 * values - 12.0),
                                        other_sample=3, seed=seed)
            for result, other in zip(results, transformed):
                self.assertIs(other.status, result.status)
                np.testing.assert_allclose(other.statistic, result.statistic,
                                           rtol=1e-9)
                np.testing.assert_allclose(other.p, result.p, rtol=1e-6,
                                           atol=1e-12)
                self.assertEqual(other.detected, result.detected)

    def test_affine_conv_proximity(self):
        """Test scaling and shifting all side means
        """
        sides = [SideMean('c1', 'A', 1.0), SideMean('c1', 'B', 1.1),
                 SideMean('c2', 'C', 5.0), SideMean('c2', 'D', 5.3),
                 SideMean('c3', 'E', 10.0), SideMean('c3', 'F', 10.2)]
        moved = [SideMean(side.conversation_id, side.speaker_id,
                          0.25 * side.value + 100.0) for side in sides]
        result = conv_proximity(sides, 'f')
        other = conv_proximity(moved, 'f')
        np.testing.assert_allclose(other.result.statistic,
                                   result.result.statistic, rtol=1e-9)
        self.assertEqual(other.result.detected, result.result.detected)
        self.assertEqual(other.verdicts, result.verdicts)

    def test_speaker_shift_synchrony(self):
        """Test shifting one speaker's values leaves synchrony unchanged
        """
        values = noisy(3)
        shifted = values + np.where(np.arange(60) % 2, -3.0, 5.0)
        result = turn_synchrony(alternating(values))
        other = turn_synchrony(alternating(shifted))
        np.testing.assert_allclose(other.statistic, result.statistic,
                                   rtol=1e-9)
        self.assertEqual(other.note, result.note)


class TestNullCalibration(unittest.TestCase):
    """Test the measures rarely fire on independent values
    """
    def test_false_positive_rate(self):
        """Test at most 10% detections on 200 i.i.d. series
        """
        detections = {measure: 0 for measure in TURN_MEASURES}
        for seed in range(200):
            values = np.random.default_rng(seed).normal(size=60)
            for result in turn_measures(alternating(values), seed=seed):
                detections[result.measure] += int(result.detected)
        for measure, count in detections.items():
            self.assertLessEqual(count, 20, measure.value)


class TestConversationLevel(unittest.TestCase):
    """Test the corpus-level measures
    """
    def test_proximity(self):
        """Test partners closer than non-partners
        """
        sides = [SideMean('c1', 'A', 1.0), SideMean('c1', 'B', 1.1),
                 SideMean('c2', 'C', 5.0), SideMean('c2', 'D', 5.3),
                 SideMean('c3', 'E', 10.0), SideMean('c3', 'F', 10.2)]
        measure = conv_proximity(sides, 'pitch_mean')
        self.assertIs(measure.result.status, Status.OK)
        self.assertTrue(measure.result.detected)
        self.assertEqual(measure.result.conversation_id, '*')
        self.assertEqual(measure.verdicts, {'c1': True, 'c2': True,
                                            'c3': True})

    def test_proximity_missing_side(self):
        """Test conversations need both sides for a verdict
        """
        sides = [SideMean('c1', 'A', 1.0), SideMean('c1', 'B', np.nan),
                 SideMean('c2', 'C', 5.0), SideMean('c2', 'D', 5.3),
                 SideMean('c3', 'E', 10.0), SideMean('c3', 'F', 10.2)]
        measure = conv_proximity(sides, 'pitch_mean')
        self.assertNotIn('c1', measure.verdicts)

    def test_proximity_single_conversation(self):
        """Test a single conversation is not evaluable
        """
        measure = conv_proximity([SideMean('c1', 'A', 1.0),
                                  SideMean('c1', 'B', 2.0)], 'f')
        self.assertIs(measure.result.status, Status.NOT_EVALUABLE)

    def test_proximity_shared_speaker(self):
        """Test speakers met in any conversation are no baseline
        """
        sides = [SideMean('c1', 'A', 0.0), SideMean('c1', 'B', 4.0),
                 SideMean('c2', 'B', 4.5), SideMean('c2', 'C', 1.0),
                 SideMean('c3', 'D', 10.0), SideMean('c3', 'E', 11.0),
                 SideMean('c4', 'F', 20.0), SideMean('c4', 'G', 22.0)]
        self.assertEqual([side.speaker_id
                          for side in nonpartners(sides[0], sides)],
                         ['C', 'D', 'E', 'F', 'G'])
        met = {'A': 'B', 'B': 'AC', 'C': 'B', 'D': 'E', 'E': 'D', 'F': 'G',
               'G': 'F'}
        partner = []
        other = []
        for side in sides:
            mate = [candidate for candidate in sides
                    if candidate.conversation_id == side.conversation_id and
                    candidate.speaker_id != side.speaker_id][0]
            baseline = [candidate.value for candidate in sides
                        if candidate.conversation_id != side.conversation_id
                        and candidate.speaker_id != side.speaker_id and
                        candidate.speaker_id not in met[side.speaker_id]]
            partner.append(abs(side.value - mate.value))
            other.append(np.mean(np.abs(side.value - np.array(baseline))))
        expected = limit_ttest(np.array(partner), np.array(other))
        measure = conv_proximity(sides, 'pitch_mean')
        self.assertEqual(measure.result.n, 8)
        self.assertAlmostEqual(measure.result.statistic, expected.statistic)
        self.assertAlmostEqual(measure.result.p, expected.p)

    def test_half_gaps(self):
        """Test the gap between speakers in each half
        """
        self.assertEqual(half_gaps(alternating([0.0, 10.0, 4.0, 5.0])),
                         (10.0, 1.0))
        self.assertIsNone(half_gaps(alternating([0.0, np.nan, 4.0, 5.0])))

    def test_convergence(self):
        """Test gaps shrinking from the first to the second half
        """
        series_list = [
            alternating([0.0, 10.0, 4.0, 5.0], 'c1'),
            alternating([0.0, 8.0, 4.0, 6.0], 'c2'),
            alternating([0.0, 6.0, 4.0, 4.5], 'c3'),
            alternating([0.0, np.nan, 4.0, 4.5], 'c4')]
        measure = conv_convergence(series_list, 'pitch_mean')
        self.assertIs(measure.result.status, Status.OK)
        self.assertEqual(measure.result.n, 3)
        self.assertLess(measure.result.statistic, 0.0)
        self.assertTrue(measure.result.detected)
        self.assertEqual(measure.verdicts, {'c1': True, 'c2': True,
                                            'c3': True})

    def test_convergence_too_few(self):
        """Test a single usable conversation is not evaluable
        """
        measure = conv_convergence([alternating([0.0, 10.0, 4.0, 5.0])],
                                   'f')
        self.assertIs(measure.result.status, Status.NOT_EVALUABLE)


class TestThirds(unittest.TestCase):
    """Test the analysis of conversation thirds
    """
    def test_thirds(self):
        """Test each third gets the three measures
        """
        thirds = thirds_analysis(shrinking(36))
        self.assertEqual(sorted(thirds), ['final', 'initial', 'middle'])
        for results in thirds.values():
            self.assertEqual([result.measure for result in results],
                             list(TURN_MEASURES))
        self.assertIs(thirds['initial'][1].status, Status.OK)

    def test_short_thirds(self):
        """Test thirds with fewer than three turns are not evaluable
        """
        thirds = thirds_analysis(alternating([1.0, 2.0, 3.0, 4.0, 5.0]))
        for results in thirds.values():
            for result in results:
                self.assertIs(result.status, Status.NOT_EVALUABLE)

    def test_compare(self):
        """Test detections are counted and thirds compared
        """
        def result(statistic, detected):
            """A convergence result
            """
            return MeasureResult(Measure.TURN_CONV, 'c', 'f', statistic,
                                 0.01, 10, detected=detected)

        thirds_by_conversation = {
            cid: {'initial': [None, result(0.1 + shift, False), None],
                  'middle': [None, result(0.3 + shift, False), None],
                  'final': [None, result(0.8 + 2 * shift, True), None]}
            for cid, shift in (('c1', 0.0), ('c2', 0.05), ('c3', 0.12))}
        comparison = compare_thirds(thirds_by_conversation,
                                    Measure.TURN_CONV, 'f')
        self.assertEqual(comparison.detected,
                         {'initial': 0, 'middle': 0, 'final': 3})
        self.assertEqual(comparison.n_conversations, 3)
        self.assertLess(comparison.initial_vs_final.statistic, 0.0)
        self.assertLess(comparison.middle_vs_final.statistic, 0.0)


class TestPooledProximity(unittest.TestCase):
    """Test proximity pooled over a corpus
    """
    def test_pooled(self):
        """Test pooling target turns of all conversations
        """
        series_list = [alternating(np.arange(40.0) * scale, cid)
                       for cid, scale in (('c1', 1.0), ('c2', 2.0),
                                          ('c3', 0.5))]
        per_conversation = [turn_proximity(series)
                            for series in series_list]
        pooled = pooled_turn_proximity(series_list, per_conversation,
                                       'pitch_mean')
        self.assertEqual(pooled.pct_conversations, 100.0)
        self.assertEqual(pooled.n_conversations, 3)
        self.assertEqual(pooled.result.n, 3 * 39)
        self.assertTrue(pooled.result.detected)

    def test_pooled_share_of_evaluable(self):
        """Test the share of detecting dyads ignores short conversations
        """
        series_list = [alternating(np.arange(40.0), 'c1'),
                       alternating(np.arange(40.0) * 2.0, 'c2'),
                       alternating(np.arange(5.0), 'c3')]
        per_conversation = [turn_proximity(series)
                            for series in series_list]
        self.assertIs(per_conversation[2].status, Status.NOT_EVALUABLE)
        pooled = pooled_turn_proximity(series_list, per_conversation,
                                       'pitch_mean')
        self.assertEqual(pooled.pct_conversations, 100.0)
        self.assertEqual(pooled.n_conversations, 3)
        self.assertEqual(pooled.n_evaluable, 2)
        self.assertEqual(pooled.result.n, 2 * 39)

    def test_pooled_empty(self):
        """Test nothing to pool
        """
        pooled = pooled_turn_proximity([], [], 'f')
        self.assertIs(pooled.result.status, Status.NOT_EVALUABLE)
        self.assertTrue(np.isnan(pooled.pct_conversations))


if __name__ == '__main__':
    unittest.main()
