"""Acoustic-prosodic features of utterances

Every utterance is described by twelve features: minimum, mean, maximum
and standard deviation of pitch and of intensity, jitter, shimmer, the
harmonics-to-noise ratio and the speaking rate. Features that cannot be
measured (e.g., pitch of an unvoiced utterance) are NaN.

Before the entrainment measures are computed the features are
z-normalized per speaker over the whole corpus.
"""
import csv
import os
import re

from dataclasses import dataclass, astuple, fields

import numpy as np

from pyentrain import conf
from pyentrain import log
from pyentrain.audio import (read_audio, extract_pitch, extract_intensity,
                             jitter_shimmer_hnr)
from pyentrain.corpus import Lang
from pyentrain.errors import SignalError, CorpusFormatError
from pyentrain.lexicons import normalize_word

_VOWEL_GROUP_RE = re.compile('[aeiouáéíóúü]+')


@dataclass(frozen=True)
class ProsodyVector(object):
    """The twelve features of one utterance, NaN where missing
    """
    pitch_min: float = np.nan
    pitch_mean: float = np.nan
    pitch_max: float = np.nan
    pitch_sd: float = np.nan
    intensity_min: float = np.nan
    intensity_mean: float = np.nan
    intensity_max: float = np.nan
    intensity_sd: float = np.nan
    jitter: float = np.nan
    shimmer: float = np.nan
    hnr: float = np.nan
    speaking_rate: float = np.nan

    def as_array(self):
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, values):
        return cls(*(float(value) for value in values))

    @property
    def missing(self):
        """Names of the missing features
        """
        return [name for name, value in zip(PROSODY_FIELDS, astuple(self))
                if not np.isfinite(value)]


PROSODY_FIELDS = tuple(field.name for field in fields(ProsodyVector))
"""Feature names in the order of `ProsodyVector.as_array`
"""

FEATURE_LABELS = {'pitch_min': 'Min. pitch',
                  'pitch_mean': 'Mean pitch',
                  'pitch_max': 'Max. pitch',
                  'pitch_sd': 'SD pitch',
                  'intensity_min': 'Min. intensity',
                  'intensity_mean': 'Mean intensity',
                  'intensity_max': 'Max. intensity',
                  'intensity_sd': 'SD intensity',
                  'jitter': 'Jitter',
                  'shimmer': 'Shimmer',
                  'hnr': 'HNR',
                  'speaking_rate': 'Speaking rate'}
"""Names of the features in reports
"""


def syllable_count(word, lang):
    """Orthographic syllable estimate of a word, at least one
    """
    word = normalize_word(word)
    if lang is Lang.LANG2 and word.endswith('y'):
        word = word[:-1] + 'a'
    return max(1, len(_VOWEL_GROUP_RE.findall(word)))


def speaking_rate(utterance):
    """Syllables per second of an utterance
    """
    syllables = sum(syllable_count(token.surface, token.lang)
                    for token in utterance.tokens)
    return syllables / float(utterance.end - utterance.start)


def _summary(values):
    """Min, mean, max and sample sd of the finite values
    """
    values = values[np.isfinite(values)]
    if len(values) == 0:
        return np.nan, np.nan, np.nan, np.nan
    deviation = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return (float(values.min()), float(values.mean()), float(values.max()),
            deviation)


def utterance_prosody(sig, utterance, floor=75.0, ceiling=600.0, step=0.010,
                      voicing_threshold=0.45, intensity_window=0.032):
    """Prosody of the part of `sig` spanned by an utterance
    """
    part = sig.span(utterance.start, utterance.end)
    intensity = _summary(extract_intensity(part, step, intensity_window))
    pitch = (np.nan,) * 4
    voice = (np.nan,) * 3
    try:
        track = extract_pitch(part, floor, ceiling, step, voicing_threshold)
    except SignalError:
        log.debug("Utterance %d too short for pitch", utterance.index)
    else:
        if track.voiced.any():
            pitch = _summary(track.frequencies)
            voice = jitter_shimmer_hnr(part, track, floor, ceiling)
    return ProsodyVector(*(pitch + intensity + tuple(voice) +
                           (speaking_rate(utterance),)))


def audio_parameters():
    """The DSP parameters of the configuration
    """
    return {'floor': float(conf['audio.pitch_floor']),
            'ceiling': float(conf['audio.pitch_ceiling']),
            'step': float(conf['audio.time_step']),
            'voicing_threshold': float(conf['audio.voicing_threshold']),
            'intensity_window': float(conf['audio.intensity_window'])}


def conversation_prosody(conversation, parameters=None):
    """Matrix of the features of every utterance of a conversation

    Rows follow the utterances, columns `PROSODY_FIELDS`. Utterances
    outside the recording are logged and left missing.
    """
    parameters = parameters or audio_parameters()
    if conversation.audio is None:
        raise SignalError("Conversation '%s' has no audio" % conversation.id)
    signals = {}
    matrix = np.full((len(conversation.utterances), len(PROSODY_FIELDS)),
                     np.nan)
    for row, utterance in enumerate(conversation.utterances):
        channel = conversation.audio.channel(utterance.speaker_id)
        if channel not in signals:
            signals[channel] = read_audio(conversation.audio.path, channel)
        try:
            matrix[row] = utterance_prosody(signals[channel], utterance,
                                            **parameters).as_array()
        except SignalError as err:
            log.warning("%s utterance %d: %s", conversation.id,
                        utterance.index, err)
    return matrix


def zscore_by_speaker(vectors):
    """Z-normalize feature matrices per speaker and column

    `vectors` maps speaker ids to (n x k) arrays, NaN marks missing
    values. Columns with fewer than two values or zero variance become
    NaN.
    """
    normalized = {}
    for speaker_id, matrix in vectors.items():
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        result = np.full(matrix.shape, np.nan)
        for column in range(matrix.shape[1]):
            values = matrix[:, column]
            present = np.isfinite(values)
            if present.sum() < 2:
                continue
            deviation = np.std(values[present], ddof=1)
            if not deviation > 0:
                name = (PROSODY_FIELDS[column]
                        if matrix.shape[1] == len(PROSODY_FIELDS)
                        else column)
                log.warning("Zero variance of %s for speaker %s",
                            name, speaker_id)
                continue
            result[present, column] = \
                (values[present] - values[present].mean()) / deviation
        normalized[speaker_id] = result
    return normalized


def normalize_corpus_prosody(raw):
    """Z-normalize the matrices of all conversations per speaker

    `raw` maps conversation ids to (conversation, matrix) pairs, the
    result maps conversation ids to the normalized matrices.
    """
    rows = {}
    for conversation_id, (conversation, matrix) in raw.items():
        for row, utterance in enumerate(conversation.utterances):
            rows.setdefault(utterance.speaker_id, []).append(
                (conversation_id, row, matrix[row]))
    normalized = {conversation_id: np.full(matrix.shape, np.nan)
                  for conversation_id, (_conv, matrix) in raw.items()}
    scores = zscore_by_speaker({
        speaker_id: np.array([values for _cid, _row, values in entries])
        for speaker_id, entries in rows.items()})
    for speaker_id, entries in rows.items():
        for number, (conversation_id, row, _values) in enumerate(entries):
            normalized[conversation_id][row] = scores[speaker_id][number]
    return normalized


DUMP_COLUMNS = (('conversation', 'utterance_index', 'speaker') +
                PROSODY_FIELDS + ('missing',))


def write_feature_dump(rows, filename):
    """Write (conversation id, utterance, ProsodyVector) rows as CSV
    """
    directory = os.path.dirname(filename)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filename, 'w', newline='', encoding='utf-8') as outfile:
        writer = csv.writer(outfile, lineterminator='\n')
        writer.writerow(DUMP_COLUMNS)
        for conversation_id, utterance, vector in rows:
            writer.writerow([conversation_id, utterance.index,
                             utterance.speaker_id] +
                            ['' if not np.isfinite(value) else repr(value)
                             for value in astuple(vector)] +
                            ['|'.join(vector.missing)])


def read_feature_dump(filename):
    """Feature matrices per conversation from a dump

    Returns a dict mapping conversation ids to dicts from utterance
    indices to `ProsodyVector`.
    """
    features = {}
    with open(filename, newline='', encoding='utf-8') as infile:
        reader = csv.DictReader(infile)
        missing_columns = set(DUMP_COLUMNS[:-1]) - set(reader.fieldnames or [])
        if missing_columns:
            raise CorpusFormatError(filename, 1, "missing columns: %s"
                                    % ", ".join(sorted(missing_columns)))
        for line_no, record in enumerate(reader, 2):
            try:
                values = [float(record[name]) if record[name] else np.nan
                          for name in PROSODY_FIELDS]
                index = int(record['utterance_index'])
            except ValueError as err:
                raise CorpusFormatError(filename, line_no, str(err))
            features.setdefault(record['conversation'], {})[index] = \
                ProsodyVector(*values)
    return features


def dump_matrix(conversation, dump):
    """Matrix of a conversation from `read_feature_dump` output
    """
    matrix = np.full((len(conversation.utterances), len(PROSODY_FIELDS)),
                     np.nan)
    for row, utterance in enumerate(conversation.utterances):
        vector = dump.get(conversation.id, {}).get(utterance.index)
        if vector is not None:
            matrix[row] = vector.as_array()
    return matrix
