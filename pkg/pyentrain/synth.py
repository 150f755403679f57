"""Synthetic dyadic conversations with known entrainment

A synthetic conversation alternates between two speakers, A and B, one
utterance per turn. Every feature is Gaussian around a per-speaker mean;
one kind of entrainment of strength ``m`` in [0, 1] can be injected:

* PROXIMITY - each turn is an AR(1) blend of the preceding turn and a
  fresh draw around the own mean, with correlation ``0.95 m``,
* CONVERGENCE - the gap between the speaker means shrinks linearly over
  the conversation to ``gap (1 - m)``,
* SYNCHRONY - B's turn is ``mean_B + m (sd_B / sd_A) (A_prev - mean_A)``
  plus noise, so that B follows A with correlation ``m``.

Code-switching is Bernoulli per turn with a per-speaker probability; with
entrainment the probability of a turn moves towards the presence of the
preceding turn by 0.9 times the coupling strength. Strategies of switched
turns are drawn from a categorical distribution whose weights are drawn
once per conversation from a Dirichlet distribution. Transcripts contain
tokens that the strategy classifier labels as drawn.

Magnitude 0 reduces every injection to the null model.
"""
import enum
import functools
import os

from dataclasses import dataclass, field

import numpy as np

from pyentrain import conf
from pyentrain import log
from pyentrain.corpus import (Lang, Gender, Token, Utterance, Speaker,
                              Conversation, Corpus, order_utterances,
                              write_corpus)
from pyentrain.csw import CswStrategy, conversation_csw
from pyentrain.errors import SynthSpecError
from pyentrain.lexicons import load_cues, load_fillers, edge_lexicon
from pyentrain.measures import (Measure, FeatureSeries,
                                turn_proximity, turn_convergence,
                                turn_synchrony)
from pyentrain.parallel import cell_rng, cell_seed, parallel_map
from pyentrain.prosody import (PROSODY_FIELDS, ProsodyVector,
                               write_feature_dump)
from pyentrain.series import csw_series

PROXIMITY_MAX_CORRELATION = 0.95
CSW_MAX_COUPLING = 0.9

WORDS = {Lang.LANG1: ('casa', 'perro', 'mesa', 'libro', 'agua', 'ciudad',
                      'tiempo', 'camino', 'noche', 'trabajo', 'puerta',
                      'verde'),
         Lang.LANG2: ('house', 'dog', 'table', 'book', 'water', 'city',
                      'weather', 'street', 'night', 'job', 'door',
                      'green')}
"""Content words of the synthetic transcripts
"""

EDGE_WORDS = {Lang.LANG1: ('pues', 'vale', 'claro'),
              Lang.LANG2: ('okay', 'yeah', 'um')}
"""Cue words and fillers used for 'other' switches
"""

STRATEGIES = (CswStrategy.INSERTIONAL, CswStrategy.ALTERNATIONAL,
              CswStrategy.OTHER)

PROSODY_DEFAULTS = {'pitch_min': ((140.0, 90.0), (15.0, 10.0)),
                    'pitch_mean': ((210.0, 120.0), (20.0, 15.0)),
                    'pitch_max': ((300.0, 180.0), (30.0, 20.0)),
                    'pitch_sd': ((35.0, 25.0), (6.0, 5.0)),
                    'intensity_min': ((45.0, 47.0), (3.0, 3.0)),
                    'intensity_mean': ((62.0, 66.0), (3.0, 3.0)),
                    'intensity_max': ((75.0, 78.0), (3.0, 3.0)),
                    'intensity_sd': ((8.0, 8.5), (1.0, 1.0)),
                    'jitter': ((0.012, 0.015), (0.002, 0.002)),
                    'shimmer': ((0.07, 0.08), (0.01, 0.01)),
                    'hnr': ((14.0, 12.0), (2.0, 2.0)),
                    'speaking_rate': ((5.0, 4.5), (0.8, 0.8))}
"""Speaker means and standard deviations of the synthetic prosody
"""

DEFAULT_INJECTIONS = {'pitch_mean': 'PROXIMITY',
                      'intensity_mean': 'CONVERGENCE',
                      'speaking_rate': 'SYNCHRONY'}

GENDER_PATTERNS = ((Gender.F, Gender.F),
                   (Gender.M, Gender.M),
                   (Gender.F, Gender.M))


class Injection(enum.Enum):
    NONE = 'none'
    PROXIMITY = 'proximity'
    CONVERGENCE = 'convergence'
    SYNCHRONY = 'synchrony'


INJECTION_MEASURES = {Injection.PROXIMITY: Measure.TURN_PROX,
                      Injection.CONVERGENCE: Measure.TURN_CONV,
                      Injection.SYNCHRONY: Measure.TURN_SYNC}


def _check_strength(value, what):
    if not 0.0 <= value <= 1.0:
        raise SynthSpecError("%s %r outside [0, 1]" % (what, value))


@dataclass(frozen=True)
class FeatureSpec(object):
    """Distribution and injected entrainment of one feature
    """
    name: str
    means: tuple = (0.0, 0.0)
    sds: tuple = (1.0, 1.0)
    injection: Injection = Injection.NONE
    magnitude: float = 0.0

    def validate(self):
        if len(self.means) != 2 or len(self.sds) != 2:
            raise SynthSpecError("Feature %s needs two means and two sds"
                                 % self.name)
        if not all(sd > 0 for sd in self.sds):
            raise SynthSpecError("Feature %s has a non-positive sd"
                                 % self.name)
        _check_strength(self.magnitude, "Magnitude of %s" % self.name)
        if self.injection is not Injection.NONE and not self.magnitude > 0:
            raise SynthSpecError("Injection %s of %s needs a positive"
                                 " magnitude" % (self.injection.value,
                                                 self.name))
        if self.injection is Injection.CONVERGENCE and \
           self.means[0] == self.means[1]:
            raise SynthSpecError("Convergence of %s needs distinct speaker"
                                 " means" % self.name)


@dataclass(frozen=True)
class CswSpec(object):
    """Code-switching behaviour of both speakers

    `strategy_mix` is the Dirichlet concentration of the insertional,
    alternational and other strategies.
    """
    switch_probability: tuple = (0.2, 0.2)
    strategy_mix: tuple = (7.0, 1.5, 1.5)
    entrain: bool = False
    coupling: float = 0.8
    languages: tuple = (Lang.LANG1, Lang.LANG1)

    def validate(self):
        if len(self.switch_probability) != 2:
            raise SynthSpecError("Need a switch probability per speaker")
        for probability in self.switch_probability:
            _check_strength(probability, "Switch probability")
        if len(self.strategy_mix) != 3 or \
           not all(weight > 0 for weight in self.strategy_mix):
            raise SynthSpecError("Strategy mix needs three positive weights")
        _check_strength(self.coupling, "Coupling")
        if any(lang not in WORDS for lang in self.languages):
            raise SynthSpecError("Matrix languages must be determined")


@dataclass(frozen=True)
class SynthSpec(object):
    """Specification of one synthetic conversation
    """
    turns: int = 60
    features: tuple = ()
    csw: CswSpec = field(default_factory=CswSpec)
    seed: int = 0
    conversation_id: str = 'synth'
    genders: tuple = (Gender.UNSPECIFIED, Gender.UNSPECIFIED)

    def validate(self):
        if self.turns < 2:
            raise SynthSpecError("Need at least two turns, got %d"
                                 % self.turns)
        names = [feature.name for feature in self.features]
        if len(set(names)) != len(names):
            raise SynthSpecError("Duplicate feature names")
        for feature in self.features:
            feature.validate()
        if self.csw is not None:
            self.csw.validate()

    @property
    def speaker_ids(self):
        return (self.conversation_id + '-A', self.conversation_id + '-B')


@dataclass(frozen=True)
class SynthConversation(object):
    """A generated conversation and its ground truth

    `values` maps feature names to the per-turn values, `series` to the
    turn series (including the code-switching series computed from the
    transcript), `truth` to the injected entrainment.
    """
    conversation: Conversation
    values: dict
    series: dict
    truth: dict

    def prosody_matrix(self):
        """Utterance x prosody feature matrix, NaN for absent features
        """
        matrix = np.full((len(self.conversation.utterances),
                          len(PROSODY_FIELDS)), np.nan)
        for column, name in enumerate(PROSODY_FIELDS):
            if name in self.values:
                matrix[:, column] = self.values[name]
        return matrix


def feature_values(feature, turns, rng):
    """Per-turn values of a feature, A speaking the even turns
    """
    means = np.asarray(feature.means, dtype=float)
    sds = np.asarray(feature.sds, dtype=float)
    speakers = np.arange(turns) % 2
    noise = rng.standard_normal(turns)
    magnitude = feature.magnitude
    values = np.empty(turns)

    if feature.injection is Injection.PROXIMITY:
        rho = PROXIMITY_MAX_CORRELATION * magnitude
        values[0] = means[0] + sds[0] * noise[0]
        for k in range(1, turns):
            s = speakers[k]
            values[k] = (rho * values[k - 1] + (1.0 - rho) * means[s] +
                         np.sqrt(1.0 - rho ** 2) * sds[s] * noise[k])
    elif feature.injection is Injection.CONVERGENCE:
        center = means.mean()
        progress = np.arange(turns) / float(max(turns - 1, 1))
        gaps = (means[0] - means[1]) * (1.0 - magnitude * progress)
        signs = np.where(speakers == 0, 0.5, -0.5)
        values = center + signs * gaps + sds[speakers] * noise
    elif feature.injection is Injection.SYNCHRONY:
        values = means[speakers] + sds[speakers] * noise
        slope = magnitude * sds[1] / sds[0]
        spread = np.sqrt(1.0 - magnitude ** 2) * sds[1]
        for k in range(1, turns, 2):
            values[k] = (means[1] + slope * (values[k - 1] - means[0]) +
                         spread * noise[k])
    else:
        values = means[speakers] + sds[speakers] * noise
    return values


def csw_draws(csw, turns, rng):
    """Presence and strategy of every turn
    """
    weights = rng.dirichlet(csw.strategy_mix)
    presence = np.zeros(turns, dtype=int)
    strategies = [None] * turns
    for k in range(turns):
        probability = csw.switch_probability[k % 2]
        if csw.entrain and k > 0:
            probability += (CSW_MAX_COUPLING * csw.coupling *
                            (presence[k - 1] - probability))
        presence[k] = int(rng.random() < probability)
        if presence[k]:
            strategies[k] = STRATEGIES[rng.choice(len(STRATEGIES),
                                                  p=weights)]
    return presence, strategies


def turn_tokens(matrix, strategy, rng):
    """Tokens of one utterance of a turn in the given matrix language
    """
    other = matrix.opposite()

    def words(lang, count):
        """`count` content words of a language
        """
        return [Token(str(word), lang) for word in
                rng.choice(WORDS[lang], size=count)]

    if strategy is None:
        return words(matrix, int(rng.integers(3, 9)))
    if strategy is CswStrategy.INSERTIONAL:
        before = int(rng.integers(1, 4))
        after = int(rng.integers(2, 5))
        return (words(matrix, before) + words(other, 1) +
                words(matrix, after))
    if strategy is CswStrategy.ALTERNATIONAL:
        return words(matrix, 4) + words(other, 3)
    edge = [Token(str(rng.choice(EDGE_WORDS[other])), other)]
    body = words(matrix, int(rng.integers(3, 7)))
    return edge + body if rng.random() < 0.5 else body + edge


@functools.lru_cache(maxsize=1)
def _edge_lexicon():
    return edge_lexicon(load_cues(), load_fillers())


def generate(spec):
    """Generate a conversation from a `SynthSpec`
    """
    spec.validate()
    speaker_ids = spec.speaker_ids
    values = {feature.name: feature_values(
        feature, spec.turns, cell_rng(spec.seed, spec.conversation_id,
                                      feature.name))
        for feature in spec.features}

    csw = spec.csw or CswSpec(switch_probability=(0.0, 0.0))
    presence, strategies = csw_draws(
        csw, spec.turns, cell_rng(spec.seed, spec.conversation_id, 'csw'))
    rng = cell_rng(spec.seed, spec.conversation_id, 'transcript')
    utterances = []
    start = 0.0
    for k in range(spec.turns):
        duration = round(float(rng.uniform(1.0, 3.0)), 3)
        utterances.append(Utterance(
            speaker_ids[k % 2], round(start, 3), round(start + duration, 3),
            tuple(turn_tokens(csw.languages[k % 2], strategies[k], rng))))
        start += duration + 0.25
    conversation = Conversation(
        spec.conversation_id,
        tuple(Speaker(sid, gender)
              for sid, gender in zip(speaker_ids, spec.genders)),
        order_utterances(utterances))

    series = {name: FeatureSeries.from_values(
        spec.conversation_id, name,
        [speaker_ids[k % 2] for k in range(spec.turns)], turn_values)
        for name, turn_values in values.items()}
    series.update(csw_series(conversation, conversation_csw(
        conversation, _edge_lexicon())))

    truth = {feature.name: feature.injection for feature in spec.features}
    truth['csw_presence'] = Injection.PROXIMITY \
        if spec.csw is not None and csw.entrain and csw.coupling > 0 \
        else Injection.NONE
    return SynthConversation(conversation, values, series, truth)


def derived_seed(seed, *keys):
    """Integer seed derived from a seed and keys
    """
    return int(cell_seed(seed, *keys).generate_state(1)[0])


def default_spec(conversation_id, seed, turns=60, magnitude=0.75,
                 csw_entrain=True, genders=None):
    """Spec of a corpus conversation with all prosodic features

    Pitch, intensity and speaking rate carry proximity, convergence and
    synchrony of the given magnitude, the other features none.
    """
    features = []
    for name in PROSODY_FIELDS:
        means, sds = PROSODY_DEFAULTS[name]
        injection = Injection[DEFAULT_INJECTIONS.get(name, 'NONE')]
        if magnitude <= 0:
            injection = Injection.NONE
        features.append(FeatureSpec(
            name, means, sds, injection,
            magnitude if injection is not Injection.NONE else 0.0))
    csw = CswSpec(entrain=csw_entrain and magnitude > 0,
                  coupling=magnitude if magnitude > 0 else 0.0)
    return SynthSpec(turns, tuple(features), csw, seed, conversation_id,
                     genders or (Gender.UNSPECIFIED, Gender.UNSPECIFIED))


def synth_corpus(n_conversations=None, turns=None, seed=None,
                 magnitude=0.75, csw_entrain=True):
    """Generate a corpus of synthetic conversations

    Speaker genders cycle through female, male and mixed dyads.
    """
    n_conversations = n_conversations or int(conf['synth.conversations'])
    turns = turns or int(conf['synth.turns'])
    seed = int(conf['run.seed']) if seed is None else seed
    generated = []
    for number in range(n_conversations):
        conversation_id = 'synth%03d' % number
        generated.append(generate(default_spec(
            conversation_id, derived_seed(seed, 'conversation', number),
            turns, magnitude, csw_entrain,
            GENDER_PATTERNS[number % len(GENDER_PATTERNS)])))
    log.info("Generated %d synthetic conversations of %d turns",
             n_conversations, turns)
    return generated


def write_synthetic_corpus(generated, directory, dump_filename=None):
    """Write transcripts and the prosody feature dump of a synthetic corpus

    Returns the corpus and the name of the dump.
    """
    corpus = Corpus(tuple(item.conversation for item in generated),
                    {'source': 'synth'})
    write_corpus(corpus, directory)
    dump_filename = dump_filename or os.path.join(directory, 'prosody.csv')
    rows = []
    for item in generated:
        matrix = item.prosody_matrix()
        for row, utterance in enumerate(item.conversation.utterances):
            rows.append((item.conversation.id, utterance,
                         ProsodyVector.from_array(matrix[row])))
    write_feature_dump(rows, dump_filename)
    return corpus, dump_filename


SWEEP_KINDS = ('proximity', 'convergence', 'synchrony', 'csw_proximity')
CONVERGENCE_MEANS = (3.0, -3.0)


@dataclass(frozen=True)
class SweepRow(object):
    """Detection rate of one (injection, magnitude) cell
    """
    kind: str
    measure: Measure
    magnitude: float
    trials: int
    detected: int

    @property
    def rate(self):
        return self.detected / float(self.trials)


def trial_spec(kind, magnitude, turns, seed):
    """Single-feature spec of one sweep trial

    At magnitude 0 both speakers draw i.i.d. values around a shared
    mean. Converging speakers start `CONVERGENCE_MEANS` apart.
    """
    if kind == 'csw_proximity':
        return SynthSpec(turns, (), CswSpec(switch_probability=(0.3, 0.3),
                                            entrain=magnitude > 0,
                                            coupling=magnitude), seed)
    injection = Injection[kind.upper()] if magnitude > 0 else Injection.NONE
    means = CONVERGENCE_MEANS if injection is Injection.CONVERGENCE \
        else (0.0, 0.0)
    return SynthSpec(turns, (FeatureSpec('value', means, (1.0, 1.0),
                                         injection, magnitude),),
                     None, seed)


def sweep_measure(kind):
    if kind == 'csw_proximity':
        return Measure.TURN_PROX
    return INJECTION_MEASURES[Injection[kind.upper()]]


def sweep_trial(cell):
    """Whether the matching detector fires in one trial
    """
    kind, magnitude, trial, turns, seed = cell
    spec = trial_spec(kind, magnitude, turns,
                      derived_seed(seed, kind, magnitude, trial))
    generated = generate(spec)
    feature = 'csw_presence' if kind == 'csw_proximity' else 'value'
    series = generated.series[feature]
    measure = sweep_measure(kind)
    if measure is Measure.TURN_PROX:
        result = turn_proximity(series, seed=spec.seed)
    elif measure is Measure.TURN_CONV:
        result = turn_convergence(series)
    else:
        result = turn_synchrony(series)
    return bool(result.detected)


def sweep(magnitudes=None, trials=None, turns=None, seed=None, kinds=None,
          n_processes=None):
    """Detection rates over a grid of injection kinds and magnitudes
    """
    magnitudes = [float(value) for value in
                  (magnitudes if magnitudes is not None
                   else conf['synth.magnitudes'])]
    trials = trials or int(conf['synth.trials'])
    turns = turns or int(conf['synth.turns'])
    seed = int(conf['run.seed']) if seed is None else seed
    kinds = kinds or SWEEP_KINDS
    for kind in kinds:
        if kind not in SWEEP_KINDS:
            raise SynthSpecError("Unknown sweep kind '%s'" % kind)
    for magnitude in magnitudes:
        _check_strength(magnitude, "Magnitude")

    cells = [(kind, magnitude, trial, turns, seed)
             for kind in kinds for magnitude in magnitudes
             for trial in range(trials)]
    detections = parallel_map(sweep_trial, cells, n_processes)
    rows = []
    for number, (kind, magnitude) in enumerate(
            (kind, magnitude) for kind in kinds for magnitude in magnitudes):
        detected = sum(detections[number * trials:(number + 1) * trials])
        rows.append(SweepRow(kind, sweep_measure(kind), magnitude, trials,
                             detected))
    return rows
