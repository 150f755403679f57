"""Turn series of code-switching and prosodic features

Utterance features are collapsed per turn:

* CSW presence is the maximum over the utterances of a turn,
* CSW amount is the share of switched words among all words of a turn,
* each CSW strategy is a separate 0/1 indicator, 1 if any utterance of
  the turn uses it,
* prosodic features are the duration-weighted mean of the (normalized)
  utterance values.

Utterances without a value do not contribute; a turn without any value
is missing.
"""
import numpy as np

from pyentrain.corpus import build_turns
from pyentrain.csw import CswStrategy
from pyentrain.measures import FeatureSeries, TurnValue, SideMean
from pyentrain.prosody import PROSODY_FIELDS

CSW_FEATURES = ('csw_presence', 'csw_amount', 'csw_insertional',
                'csw_alternational', 'csw_other')

CSW_LABELS = {'csw_presence': 'CSW presence',
              'csw_amount': 'CSW amount',
              'csw_insertional': 'Insertional',
              'csw_alternational': 'Alternational',
              'csw_other': 'Other'}

_STRATEGY_FEATURES = {'csw_insertional': CswStrategy.INSERTIONAL,
                      'csw_alternational': CswStrategy.ALTERNATIONAL,
                      'csw_other': CswStrategy.OTHER}


def turn_rows(conversation):
    """Turns of a conversation with the utterance rows they cover
    """
    rows = []
    position = 0
    for turn in build_turns(conversation):
        rows.append((turn, list(range(position,
                                      position + len(turn.utterances)))))
        position += len(turn.utterances)
    return rows


def _csw_turn_value(feature, utterances, features):
    """Value of one CSW feature for a turn, NaN without any features
    """
    present = [(utterance, feats) for utterance, feats
               in zip(utterances, features) if feats is not None]
    if not present:
        return np.nan
    if feature == 'csw_presence':
        return float(max(feats.presence for _utt, feats in present))
    if feature == 'csw_amount':
        switched = sum(feats.ratio * len(utt.tokens) for utt, feats in present)
        total = sum(len(utt.tokens) for utt, _feats in present)
        return switched / float(total)
    strategy = _STRATEGY_FEATURES[feature]
    return float(max(feats.has(strategy) for _utt, feats in present))


def csw_series(conversation, utterance_features):
    """Series of every CSW feature of a conversation

    `utterance_features` follows the utterances of the conversation and
    holds `CswFeatures` or None.
    """
    if len(utterance_features) != len(conversation.utterances):
        raise ValueError("Need one feature entry per utterance")
    turns = turn_rows(conversation)
    series = {}
    for feature in CSW_FEATURES:
        series[feature] = FeatureSeries(conversation.id, feature, tuple(
            TurnValue(turn.index, turn.speaker_id, _csw_turn_value(
                feature, turn.utterances,
                [utterance_features[row] for row in rows]))
            for turn, rows in turns))
    return series


def weighted_mean(values, weights):
    """Weighted mean of the finite values, NaN if there are none
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    present = np.isfinite(values)
    if not present.any() or not weights[present].sum() > 0:
        return np.nan
    return float(np.average(values[present], weights=weights[present]))


def prosody_series(conversation, matrix):
    """Series of every prosodic feature from an utterance feature matrix
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (len(conversation.utterances), len(PROSODY_FIELDS)):
        raise ValueError("Feature matrix of '%s' has shape %s"
                         % (conversation.id, matrix.shape))
    turns = turn_rows(conversation)
    series = {}
    for column, feature in enumerate(PROSODY_FIELDS):
        series[feature] = FeatureSeries(conversation.id, feature, tuple(
            TurnValue(turn.index, turn.speaker_id, weighted_mean(
                matrix[rows, column],
                [utterance.duration for utterance in turn.utterances]))
            for turn, rows in turns))
    return series


def side_means(series_list):
    """Mean turn value of every speaker of every series
    """
    means = []
    for series in series_list:
        for speaker_id in series.speakers:
            values = [record.value for record in series.present()
                      if record.speaker_id == speaker_id]
            means.append(SideMean(series.conversation_id, speaker_id,
                                  float(np.mean(values)) if values
                                  else np.nan))
    return means
