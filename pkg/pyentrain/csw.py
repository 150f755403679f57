"""Code-switching features of utterances

Per utterance the analysis uses the presence of code-switching, its
amount (the share of tokens in the non-matrix language) and the
switching strategies:

* INSERTIONAL - a short (at most two tokens) stretch of the other
  language inside the utterance,
* ALTERNATIONAL - substantial stretches (three tokens or more) of both
  languages,
* OTHER - a cue word or filled pause at the start or end of the
  utterance in the language opposite to the rest of it.

The strategy rules are heuristics. Manual labels can be supplied as
override records, which take precedence and are marked as such.
"""
import csv
import enum
import json
import os

from collections import Counter
from dataclasses import dataclass, replace
from itertools import groupby

from pyentrain import log
from pyentrain.corpus import Lang, is_code_switched
from pyentrain.errors import (NoMatrixLanguageError, OverrideError,
                              CorpusError)

INSERTION_MAX_SPAN = 2
"""Longest stretch of the other language counted as an insertion
"""

ALTERNATION_MIN_SPAN = 3
"""Shortest stretch of each language needed for an alternation
"""

MONOLINGUAL = -1
"""Strategy code of utterances without code-switching
"""


class CswStrategy(enum.Enum):
    INSERTIONAL = 'I'
    ALTERNATIONAL = 'A'
    OTHER = 'O'

    @classmethod
    def parse(cls, name):
        """Strategy from its letter or its name
        """
        name = str(name).strip().upper()
        for strategy in cls:
            if name in (strategy.value, strategy.name):
                return strategy
        raise ValueError("Unknown code-switching strategy '%s'" % name)


@dataclass(frozen=True)
class CswFeatures(object):
    """Code-switching features of one utterance

    `strategies` is None for monolingual utterances.
    """
    presence: int
    ratio: float
    strategies: frozenset = None
    provenance: str = None

    def __post_init__(self):
        if self.presence not in (0, 1):
            raise ValueError("presence must be 0 or 1")
        if (self.presence == 0) != (self.ratio == 0) or \
           (self.presence == 0) != (self.strategies is None):
            raise ValueError("Inconsistent code-switching features")
        if self.presence and not self.strategies:
            raise ValueError("Code-switched utterance without strategy")

    @property
    def code(self):
        """Strategy letters (e.g. 'IO'), or -1 when monolingual
        """
        if self.strategies is None:
            return MONOLINGUAL
        return ''.join(sorted(strategy.value for strategy in self.strategies))

    def has(self, strategy):
        """1 if the strategy is used, 0 otherwise
        """
        return int(self.strategies is not None and
                   strategy in self.strategies)


def matrix_language(utterance):
    """Majority language among the determined tokens

    Ties go to the language of the first determined token.
    """
    return _matrix_of(utterance.langs)


def _matrix_of(langs):
    """Matrix language of a sequence of tags
    """
    determined = [lang for lang in langs if lang is not Lang.UNDETERMINED]
    if not determined:
        raise NoMatrixLanguageError("no determinable language")
    counts = Counter(determined)
    if counts[Lang.LANG1] == counts[Lang.LANG2]:
        return determined[0]
    return max((Lang.LANG1, Lang.LANG2), key=lambda lang: counts[lang])


def _spans(tokens):
    """Maximal runs of one language as (lang, start, stop)
    """
    spans = []
    position = 0
    for lang, run in groupby(token.lang for token in tokens):
        length = len(list(run))
        spans.append((lang, position, position + length))
        position += length
    return spans


def _edge_run(tokens, fillers, from_end=False):
    """Length of the run of same-language lexicon words at one edge
    """
    ordered = list(reversed(tokens)) if from_end else list(tokens)
    first = ordered[0]
    if first.lang is Lang.UNDETERMINED or first.surface not in fillers:
        return 0
    length = 0
    for token in ordered:
        if token.lang is not first.lang or token.surface not in fillers:
            break
        length += 1
    return length


def _edge_switch(tokens, fillers, from_end=False):
    """True iff an edge run of lexicon words is opposite to the remainder
    """
    length = _edge_run(tokens, fillers, from_end)
    if length == 0 or length == len(tokens):
        return False
    edge_lang = tokens[-1].lang if from_end else tokens[0].lang
    remainder = tokens[:-length] if from_end else tokens[length:]
    try:
        return _matrix_of([token.lang for token in remainder]) is \
            edge_lang.opposite()
    except NoMatrixLanguageError:
        return False


def classify_strategy(utterance, fillers):
    """Strategies of a code-switched utterance

    `fillers` is the lexicon of cue words and filled pauses.
    """
    if not is_code_switched(utterance):
        raise ValueError("Utterance %d is not code-switched"
                         % utterance.index)
    tokens = utterance.tokens
    matrix = matrix_language(utterance)
    spans = _spans(tokens)
    strategies = set()

    if _edge_switch(tokens, fillers) or \
       _edge_switch(tokens, fillers, from_end=True):
        strategies.add(CswStrategy.OTHER)

    def edge_filler_span(start, stop):
        """True for spans at an edge made of lexicon words only
        """
        at_edge = start == 0 or stop == len(tokens)
        return at_edge and all(token.surface in fillers
                               for token in tokens[start:stop])

    embedded = [(start, stop) for lang, start, stop in spans
                if lang is matrix.opposite()]
    if any(stop - start <= INSERTION_MAX_SPAN and
           not edge_filler_span(start, stop) for start, stop in embedded):
        strategies.add(CswStrategy.INSERTIONAL)

    longest = {Lang.LANG1: 0, Lang.LANG2: 0}
    for lang, start, stop in spans:
        if lang in longest:
            longest[lang] = max(longest[lang], stop - start)
    if min(longest.values()) >= ALTERNATION_MIN_SPAN:
        strategies.add(CswStrategy.ALTERNATIONAL)

    if not strategies:
        if any(stop - start >= ALTERNATION_MIN_SPAN
               for start, stop in embedded):
            strategies.add(CswStrategy.ALTERNATIONAL)
        else:
            strategies.add(CswStrategy.INSERTIONAL)
    return frozenset(strategies)


def csw_features(utterance, fillers):
    """Presence, ratio and strategies of an utterance
    """
    matrix = matrix_language(utterance)
    if not is_code_switched(utterance):
        return CswFeatures(0, 0.0)
    switched = sum(1 for lang in utterance.langs if lang is matrix.opposite())
    ratio = switched / float(len(utterance.tokens))
    if utterance.manual_strategies is not None:
        return CswFeatures(1, ratio,
                           frozenset(CswStrategy.parse(name) for name
                                     in utterance.manual_strategies),
                           'manual')
    return CswFeatures(1, ratio, classify_strategy(utterance, fillers),
                       'heuristic')


def conversation_csw(conversation, fillers):
    """Features of every utterance, None where no language is determined
    """
    features = []
    for utterance in conversation.utterances:
        try:
            features.append(csw_features(utterance, fillers))
        except NoMatrixLanguageError:
            features.append(None)
    return features


def read_overrides(filename):
    """Override records of a line-delimited file
    """
    records = []
    with open(filename, encoding='utf-8') as infile:
        for line_no, line in enumerate(infile, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except ValueError:
                raise OverrideError([(filename, line_no, "invalid record")])
    return records


def apply_overrides(corpus, overrides):
    """Replace heuristic strategies by manual labels

    `overrides` is a file name or a list of records
    ``{conversation_id, utterance_index, strategies}``.
    """
    if isinstance(overrides, str):
        overrides = read_overrides(overrides) if overrides else []
    if not overrides:
        return corpus

    labels = {}
    invalid = []
    for record in overrides:
        conversation_id = record.get('conversation_id')
        index = record.get('utterance_index')
        try:
            conversation = corpus.conversation(conversation_id)
        except KeyError:
            invalid.append((conversation_id, index, "unknown conversation"))
            continue
        if not isinstance(index, int) or \
           not 0 <= index < len(conversation.utterances):
            invalid.append((conversation_id, index, "unknown utterance"))
            continue
        if not is_code_switched(conversation.utterances[index]):
            invalid.append((conversation_id, index,
                            "utterance is not code-switched"))
            continue
        try:
            strategies = tuple(sorted(set(
                CswStrategy.parse(name).value
                for name in record.get('strategies') or [])))
        except ValueError as err:
            invalid.append((conversation_id, index, str(err)))
            continue
        if not strategies:
            invalid.append((conversation_id, index, "no strategies"))
            continue
        labels[(conversation_id, index)] = strategies
    if invalid:
        raise OverrideError(invalid)

    conversations = []
    for conversation in corpus:
        utterances = tuple(
            replace(utterance, manual_strategies=labels[
                (conversation.id, utterance.index)])
            if (conversation.id, utterance.index) in labels else utterance
            for utterance in conversation.utterances)
        conversations.append(replace(conversation, utterances=utterances))
    log.info("Applied %d manual strategy labels", len(labels))
    return corpus.replace(conversations)


@dataclass(frozen=True)
class CswStats(object):
    """Distribution of code-switching in a corpus
    """
    n_utterances: int
    n_code_switched: int
    strategy_counts: dict
    n_undetermined: int = 0

    @property
    def pct_monolingual(self):
        return 100.0 * (self.n_utterances - self.n_code_switched) / \
            self.n_utterances

    def pct_strategy(self, strategy):
        """Share of the code-switched utterances using a strategy
        """
        if self.n_code_switched == 0:
            return 0.0
        return 100.0 * self.strategy_counts.get(strategy, 0) / \
            self.n_code_switched


def corpus_csw_stats(corpus, fillers):
    """Share of monolingual utterances and of each strategy
    """
    n_utterances = 0
    n_switched = 0
    n_undetermined = 0
    counts = Counter()
    for conversation in corpus:
        for features in conversation_csw(conversation, fillers):
            if features is None:
                n_undetermined += 1
                continue
            n_utterances += 1
            if features.presence:
                n_switched += 1
                counts.update(features.strategies)
    if n_utterances == 0:
        raise CorpusError("No utterances with a determinable language")
    return CswStats(n_utterances, n_switched,
                    {strategy: counts[strategy] for strategy in CswStrategy},
                    n_undetermined)


CSW_DUMP_COLUMNS = ('conversation', 'utterance_index', 'speaker', 'presence',
                    'ratio', 'strategies', 'provenance')


def write_csw_dump(corpus, fillers, filename):
    """Write the features of every utterance as a CSV table
    """
    directory = os.path.dirname(filename)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filename, 'w', newline='', encoding='utf-8') as outfile:
        writer = csv.writer(outfile, lineterminator='\n')
        writer.writerow(CSW_DUMP_COLUMNS)
        for conversation in corpus:
            features = conversation_csw(conversation, fillers)
            for utterance, feature in zip(conversation.utterances, features):
                if feature is None:
                    writer.writerow([conversation.id, utterance.index,
                                     utterance.speaker_id, '', '', '', ''])
                    continue
                writer.writerow([conversation.id, utterance.index,
                                 utterance.speaker_id, feature.presence,
                                 '%.6g' % feature.ratio, feature.code,
                                 feature.provenance or ''])
