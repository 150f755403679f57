"""Entrainment measures on turn series

Turn-level measures look at one conversation:

* proximity - a turn is closer to the preceding partner turn than to
  other, non-adjacent partner turns,
* convergence - the differences between adjacent turns shrink over the
  conversation,
* synchrony - the turn values of one speaker follow those of the
  preceding partner turn.

Conversation-level measures look at the whole corpus:

* proximity - speakers are closer to their partner than to the speakers
  they never talked to,
* convergence - partners are closer in the second half of their
  conversations than in the first.

Measures never raise on degenerate input, they return a result with
status NOT_EVALUABLE and the reason in the note.
"""
import enum

from dataclasses import dataclass, field

import numpy as np

from pyentrain import log
from pyentrain.corpus import interlocutors, nonpartners
from pyentrain.errors import DegenerateError
from pyentrain.parallel import cell_rng
from pyentrain.stats import pearson, strength_label, limit_ttest

ALPHA = 0.05
"""Significance level of all measures
"""

MIN_PROXIMITY_TURNS = 12
MIN_CONVERGENCE_POINTS = 4
MIN_SYNCHRONY_PAIRS = 3
THIRDS = ('initial', 'middle', 'final')


class Measure(enum.Enum):
    TURN_PROX = 'turn_proximity'
    TURN_CONV = 'turn_convergence'
    TURN_SYNC = 'turn_synchrony'
    CONV_PROX = 'conv_proximity'
    CONV_CONV = 'conv_convergence'


TURN_MEASURES = (Measure.TURN_PROX, Measure.TURN_CONV, Measure.TURN_SYNC)
CONVERSATION_MEASURES = (Measure.CONV_PROX, Measure.CONV_CONV)


class Status(enum.Enum):
    OK = 'ok'
    NOT_EVALUABLE = 'not_evaluable'
    SKIPPED = 'skipped'
    FAILED = 'failed'


@dataclass(frozen=True)
class TurnValue(object):
    index: int
    speaker_id: str
    value: float


@dataclass(frozen=True)
class FeatureSeries(object):
    """Per-turn values of one feature in one conversation
    """
    conversation_id: str
    feature: str
    records: tuple

    def __post_init__(self):
        for previous, record in zip(self.records, self.records[1:]):
            if record.index <= previous.index:
                raise ValueError("Turn indices of %s/%s not increasing"
                                 % (self.conversation_id, self.feature))
            if record.index == previous.index + 1 and \
               record.speaker_id == previous.speaker_id:
                raise ValueError("Adjacent turns of %s/%s by one speaker"
                                 % (self.conversation_id, self.feature))

    @classmethod
    def from_values(cls, conversation_id, feature, speakers, values):
        """Series of consecutive turns with the given speakers and values
        """
        return cls(conversation_id, feature, tuple(
            TurnValue(index, speaker, float(value))
            for index, (speaker, value) in enumerate(zip(speakers, values))))

    @property
    def values(self):
        return np.array([record.value for record in self.records],
                        dtype=float)

    @property
    def speakers(self):
        return sorted(set(record.speaker_id for record in self.records))

    def present(self):
        """Records with a value
        """
        return [record for record in self.records
                if np.isfinite(record.value)]

    def sub_series(self, records):
        return FeatureSeries(self.conversation_id, self.feature,
                             tuple(records))


@dataclass(frozen=True)
class MeasureResult(object):
    """Outcome of one measure on one feature of one conversation

    `conversation_id` is '*' for corpus-level tests. `raw_r` keeps the
    correlation before sign normalization (convergence correlates the
    differences with the turn index, so shrinking differences have a
    negative raw r and a positive statistic).
    """
    measure: Measure
    conversation_id: str
    feature: str
    statistic: float = np.nan
    p: float = np.nan
    n: int = 0
    label: object = None
    status: Status = Status.OK
    detected: bool = False
    seed: int = None
    raw_r: float = np.nan
    note: str = ''


def not_evaluable(measure, conversation_id, feature, note, n=0, seed=None):
    """Result of a measure that cannot be computed
    """
    return MeasureResult(measure, conversation_id, feature, n=n,
                         status=Status.NOT_EVALUABLE, seed=seed, note=note)


def proximity_pairs(series, other_sample=10, seed=0):
    """Partner and mean other differences of every target turn

    The partner turn is the immediately preceding turn; the other turns
    are up to `other_sample` partner turns drawn without replacement,
    excluding both neighbours of the target. Each target turn draws
    from its own generator, seeded by the series and the turn index.
    """
    by_index = {record.index: record for record in series.records}
    partner_diffs = []
    other_diffs = []
    for record in series.present():
        previous = by_index.get(record.index - 1)
        if previous is None or not np.isfinite(previous.value):
            continue
        candidates = [other.value for other in series.present()
                      if other.speaker_id != record.speaker_id and
                      abs(other.index - record.index) > 1]
        if not candidates:
            continue
        if len(candidates) > other_sample:
            rng = cell_rng(seed, series.conversation_id, series.feature,
                           Measure.TURN_PROX.value, record.index)
            chosen = rng.choice(len(candidates), size=other_sample,
                                replace=False)
            candidates = [candidates[number] for number in sorted(chosen)]
        partner_diffs.append(abs(record.value - previous.value))
        other_diffs.append(np.mean(np.abs(record.value -
                                          np.asarray(candidates))))
    return np.array(partner_diffs), np.array(other_diffs)


def _proximity_result(measure, conversation_id, feature, partner, other,
                      alpha, seed):
    """Paired test of partner against other differences
    """
    try:
        result = limit_ttest(partner, other)
    except DegenerateError as err:
        return not_evaluable(measure, conversation_id, feature, str(err),
                             len(partner), seed)
    detected = bool(result.p < alpha and np.mean(partner) < np.mean(other))
    return MeasureResult(measure, conversation_id, feature,
                         result.statistic, result.p, len(partner),
                         detected=detected, seed=seed)


def turn_proximity(series, other_sample=10, seed=0, alpha=ALPHA):
    """Turn-level proximity of a conversation
    """
    present = series.present()
    if len(present) < MIN_PROXIMITY_TURNS:
        return not_evaluable(Measure.TURN_PROX, series.conversation_id,
                             series.feature,
                             "%d turns with values, need %d"
                             % (len(present), MIN_PROXIMITY_TURNS),
                             len(present), seed)
    partner, other = proximity_pairs(series, other_sample, seed)
    if len(partner) < 2:
        return not_evaluable(Measure.TURN_PROX, series.conversation_id,
                             series.feature, "fewer than 2 target turns",
                             len(partner), seed)
    return _proximity_result(Measure.TURN_PROX, series.conversation_id,
                             series.feature, partner, other, alpha, seed)


def convergence_points(series):
    """(turn index, |difference to the preceding turn|) points
    """
    by_index = {record.index: record for record in series.records}
    points = []
    for record in series.present():
        previous = by_index.get(record.index - 1)
        if previous is not None and np.isfinite(previous.value):
            points.append((record.index, abs(record.value - previous.value)))
    return points


def turn_convergence(series, alpha=ALPHA):
    """Turn-level convergence, positive when differences shrink
    """
    points = convergence_points(series)
    if len(points) < MIN_CONVERGENCE_POINTS:
        return not_evaluable(Measure.TURN_CONV, series.conversation_id,
                             series.feature,
                             "%d difference points, need %d"
                             % (len(points), MIN_CONVERGENCE_POINTS),
                             len(points))
    indices, differences = zip(*points)
    try:
        r, p, n = pearson(indices, differences)
    except DegenerateError as err:
        return not_evaluable(Measure.TURN_CONV, series.conversation_id,
                             series.feature, str(err), len(points))
    score = -r
    return MeasureResult(Measure.TURN_CONV, series.conversation_id,
                         series.feature, score, p, n, strength_label(score),
                         detected=bool(p < alpha and score > 0), raw_r=r)


def synchrony_pairs(series, follower):
    """(preceding partner value, follower value) pairs
    """
    by_index = {record.index: record for record in series.records}
    pairs = []
    for record in series.present():
        if record.speaker_id != follower:
            continue
        previous = by_index.get(record.index - 1)
        if previous is not None and np.isfinite(previous.value):
            pairs.append((previous.value, record.value))
    return pairs


def turn_synchrony(series, alpha=ALPHA):
    """Turn-level synchrony, for the better-following speaker

    The correlation is computed with each speaker as follower; the
    direction with the smaller p-value (then the larger |r|) is
    reported and its follower named in the note.
    """
    candidates = []
    reasons = []
    for follower in series.speakers:
        pairs = synchrony_pairs(series, follower)
        if len(pairs) < MIN_SYNCHRONY_PAIRS:
            reasons.append("%s: %d pairs" % (follower, len(pairs)))
            continue
        leading, following = zip(*pairs)
        try:
            r, p, n = pearson(leading, following)
        except DegenerateError as err:
            reasons.append("%s: %s" % (follower, err))
            continue
        candidates.append((p, -abs(r), follower, r, n))
    if not candidates:
        return not_evaluable(Measure.TURN_SYNC, series.conversation_id,
                             series.feature, "; ".join(reasons))
    p, _magnitude, follower, r, n = min(candidates)
    return MeasureResult(Measure.TURN_SYNC, series.conversation_id,
                         series.feature, r, p, n, strength_label(r),
                         detected=bool(p < alpha and r > 0), raw_r=r,
                         note="follower %s" % follower)


@dataclass(frozen=True)
class SideMean(object):
    """Mean turn value of one speaker in one conversation
    """
    conversation_id: str
    speaker_id: str
    value: float


@dataclass(frozen=True)
class CorpusMeasure(object):
    """Corpus-level test and per-conversation verdicts of a measure
    """
    result: MeasureResult
    verdicts: dict = field(default_factory=dict)


def conv_proximity(side_means, feature, alpha=ALPHA):
    """Conversation-level proximity over all speakers

    A conversation shows proximity when both of its speakers are closer
    to their partner than to the average non-partner.
    """
    present = [side for side in side_means if np.isfinite(side.value)]
    conversations = sorted(set(side.conversation_id for side in present))
    if len(conversations) < 2:
        return CorpusMeasure(not_evaluable(
            Measure.CONV_PROX, '*', feature,
            "need at least 2 conversations"))

    talked = interlocutors(side_means)
    partner_diffs = []
    other_diffs = []
    side_verdicts = {}
    for side in present:
        partners = [other for other in present
                    if other.conversation_id == side.conversation_id and
                    other.speaker_id != side.speaker_id]
        others = [other.value
                  for other in nonpartners(side, present, talked)]
        if len(partners) != 1 or not others:
            continue
        partner = abs(side.value - partners[0].value)
        other = float(np.mean(np.abs(side.value - np.asarray(others))))
        partner_diffs.append(partner)
        other_diffs.append(other)
        side_verdicts.setdefault(side.conversation_id, []).append(
            partner < other)

    verdicts = {conversation_id: len(values) == 2 and all(values)
                for conversation_id, values in side_verdicts.items()}
    if len(partner_diffs) < 2:
        return CorpusMeasure(not_evaluable(Measure.CONV_PROX, '*', feature,
                                           "fewer than 2 speakers",
                                           len(partner_diffs)), verdicts)
    return CorpusMeasure(_proximity_result(
        Measure.CONV_PROX, '*', feature, np.array(partner_diffs),
        np.array(other_diffs), alpha, None), verdicts)


def half_gaps(series):
    """|mean A - mean B| in the first and second half, None if undefined
    """
    records = series.records
    halves = (records[:len(records) // 2], records[len(records) // 2:])
    gaps = []
    for half in halves:
        means = []
        for speaker_id in series.speakers:
            values = [record.value for record in half
                      if record.speaker_id == speaker_id and
                      np.isfinite(record.value)]
            if not values:
                return None
            means.append(np.mean(values))
        if len(means) != 2:
            return None
        gaps.append(abs(means[0] - means[1]))
    return tuple(gaps)


def conv_convergence(series_list, feature, alpha=ALPHA):
    """Conversation-level convergence over all conversations

    Conversations where a speaker has no value in one half are left out.
    """
    first = []
    second = []
    verdicts = {}
    for series in series_list:
        gaps = half_gaps(series)
        if gaps is None:
            log.info("Conversation %s left out of %s convergence: a speaker"
                     " is absent from a half", series.conversation_id,
                     feature)
            continue
        first.append(gaps[0])
        second.append(gaps[1])
        verdicts[series.conversation_id] = gaps[1] < gaps[0]

    if len(first) < 2:
        return CorpusMeasure(not_evaluable(Measure.CONV_CONV, '*', feature,
                                           "fewer than 2 conversations",
                                           len(first)), verdicts)
    try:
        result = limit_ttest(second, first)
    except DegenerateError as err:
        return CorpusMeasure(not_evaluable(Measure.CONV_CONV, '*', feature,
                                           str(err), len(first)), verdicts)
    detected = bool(result.p < alpha and np.mean(second) < np.mean(first))
    return CorpusMeasure(MeasureResult(
        Measure.CONV_CONV, '*', feature, result.statistic, result.p,
        len(first), detected=detected), verdicts)


def turn_measures(series, other_sample=10, seed=0, alpha=ALPHA):
    """The three turn-level measures of a series
    """
    return [turn_proximity(series, other_sample, seed, alpha),
            turn_convergence(series, alpha),
            turn_synchrony(series, alpha)]


def thirds_analysis(series, other_sample=10, seed=0, alpha=ALPHA):
    """Turn-level measures within the initial, middle and final third

    Returns a dict from third name to the three results. Thirds with
    fewer than 3 turns are not evaluable.
    """
    blocks = np.array_split(np.arange(len(series.records)), 3)
    thirds = {}
    for name, block in zip(THIRDS, blocks):
        part = series.sub_series(series.records[i] for i in block)
        if len(block) < 3:
            thirds[name] = [not_evaluable(measure, series.conversation_id,
                                          series.feature,
                                          "%s third has %d turns"
                                          % (name, len(block)))
                            for measure in TURN_MEASURES]
        else:
            thirds[name] = turn_measures(part, other_sample, seed, alpha)
    return thirds


@dataclass(frozen=True)
class ThirdsComparison(object):
    """Detections per third and paired tests of the per-third statistics
    """
    measure: Measure
    feature: str
    detected: dict
    n_conversations: int
    initial_vs_final: object = None
    middle_vs_final: object = None


def compare_thirds(thirds_by_conversation, measure, feature):
    """Compare a measure across the thirds of many conversations

    `thirds_by_conversation` maps conversation ids to the output of
    `thirds_analysis`.
    """
    position = TURN_MEASURES.index(measure)
    detected = {name: 0 for name in THIRDS}
    statistics = []
    for thirds in thirds_by_conversation.values():
        results = {name: thirds[name][position] for name in THIRDS}
        for name, result in results.items():
            detected[name] += int(result.detected)
        statistics.append([results[name].statistic
                           if results[name].status is Status.OK else np.nan
                           for name in THIRDS])
    statistics = np.array(statistics, dtype=float).reshape(-1, 3)

    def compare(column):
        """Paired test of a third against the final third
        """
        both = np.isfinite(statistics[:, column]) & \
            np.isfinite(statistics[:, 2])
        try:
            return limit_ttest(statistics[both, column], statistics[both, 2])
        except DegenerateError:
            return None

    return ThirdsComparison(measure, feature, detected,
                            len(thirds_by_conversation), compare(0),
                            compare(1))


@dataclass(frozen=True)
class PooledProximity(object):
    """Turn-level proximity pooled over all target turns of a corpus
    """
    feature: str
    result: MeasureResult
    pct_conversations: float
    n_conversations: int
    n_evaluable: int = 0


def pooled_turn_proximity(series_list, per_conversation, feature,
                          other_sample=10, seed=0, alpha=ALPHA):
    """Paired test over all target turns and share of detecting dyads

    `per_conversation` are the `turn_proximity` results of the series.
    The share is taken over the conversations where proximity could be
    evaluated, NaN if there are none.
    """
    partner = []
    other = []
    for series in series_list:
        present = series.present()
        if len(present) < MIN_PROXIMITY_TURNS:
            continue
        partner_diffs, other_diffs = proximity_pairs(series, other_sample,
                                                     seed)
        partner.extend(partner_diffs)
        other.extend(other_diffs)
    evaluable = [result for result in per_conversation
                 if result.status is Status.OK]
    pct = (100.0 * sum(result.detected for result in evaluable) /
           len(evaluable)) if evaluable else np.nan
    if len(partner) < 2:
        result = not_evaluable(Measure.TURN_PROX, '*', feature,
                               "fewer than 2 target turns", len(partner),
                               seed)
    else:
        result = _proximity_result(Measure.TURN_PROX, '*', feature,
                                   np.array(partner), np.array(other),
                                   alpha, seed)
    return PooledProximity(feature, result, pct, len(per_conversation),
                           len(evaluable))
