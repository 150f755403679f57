"""Lexical entrainment

Two families of lexical features are compared between conversation
partners and between speakers who never talked to each other:

* the usage of word classes (most frequent words, cue words, filled
  pauses), scored as the negated sum of the differences of relative
  word frequencies, 0 meaning identical usage,
* the overall language, scored by the perplexity of a trigram model of
  one speaker on the transcript of another, with and without
  out-of-vocabulary words.

A conversation side is one speaker in one conversation. Non-partners of
a side are the sides of speakers who never talked to its speaker in any
conversation of the corpus.
"""
import enum

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from toolz import groupby

from pyentrain import log
from pyentrain.corpus import interlocutors, nonpartners
from pyentrain.errors import (EntrainmentError, DegenerateError,
                              LanguageModelError)
from pyentrain.lm import train_trigram_kn, perplexity
from pyentrain.stats import paired_ttest, limit_ttest


class WordClassName(enum.Enum):
    TOP100_CORPUS = 'top100_corpus'
    TOP25_CORPUS = 'top25_corpus'
    TOP25_CONV = 'top25_conv'
    CUES = 'cues'
    FILLERS = 'fillers'


CLASS_LABELS = {WordClassName.TOP100_CORPUS: 'Top-100 (corpus)',
                WordClassName.TOP25_CORPUS: 'Top-25 (corpus)',
                WordClassName.TOP25_CONV: 'Top-25 (conversation)',
                WordClassName.CUES: 'Cues',
                WordClassName.FILLERS: 'Fillers'}

PERPLEXITY_LABELS = {True: 'Overall incl. OOVs',
                     False: 'Overall excl. OOVs'}


@dataclass(frozen=True)
class WordClass(object):
    name: WordClassName
    members: frozenset

    def __post_init__(self):
        if not self.members:
            raise EntrainmentError("Word class %s is empty"
                                   % self.name.value)


@dataclass(frozen=True)
class WordClassTable(object):
    """The corpus-wide word classes and the per-conversation top words
    """
    top100: WordClass
    top25: WordClass
    cues: WordClass
    fillers: WordClass
    conversation_top25: dict = field(default_factory=dict)

    def classes_for(self, conversation_id):
        """The five classes as seen from one conversation
        """
        return {WordClassName.TOP100_CORPUS: self.top100,
                WordClassName.TOP25_CORPUS: self.top25,
                WordClassName.TOP25_CONV:
                    self.conversation_top25[conversation_id],
                WordClassName.CUES: self.cues,
                WordClassName.FILLERS: self.fillers}


def top_words(counts, n, description='corpus'):
    """The n most frequent words, ties broken alphabetically
    """
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    if len(ranked) < n:
        log.warning("Only %d distinct words in %s, top-%d class truncated",
                    len(ranked), description, n)
    return frozenset(word for word, _count in ranked[:n])


def conversation_words(conversation, normalizer, speaker_id=None):
    """Normalized words of a conversation (or of one of its speakers)
    """
    words = []
    for utterance in conversation.utterances:
        if speaker_id is not None and utterance.speaker_id != speaker_id:
            continue
        words.extend(word for word in map(normalizer, utterance.words)
                     if word)
    return words


def build_word_classes(corpus, cues, fillers, normalizer):
    """Word classes of a corpus
    """
    corpus_counts = Counter()
    conversation_top25 = {}
    for conversation in corpus:
        counts = Counter(conversation_words(conversation, normalizer))
        corpus_counts.update(counts)
        conversation_top25[conversation.id] = WordClass(
            WordClassName.TOP25_CONV,
            top_words(counts, 25, "conversation '%s'" % conversation.id))
    return WordClassTable(
        WordClass(WordClassName.TOP100_CORPUS, top_words(corpus_counts, 100)),
        WordClass(WordClassName.TOP25_CORPUS, top_words(corpus_counts, 25)),
        WordClass(WordClassName.CUES, cues.members),
        WordClass(WordClassName.FILLERS, fillers.members),
        conversation_top25)


@dataclass(frozen=True)
class SpeakerCounts(object):
    """Word counts of one side and its total word count
    """
    counts: Counter
    total: int

    @classmethod
    def from_words(cls, words):
        return cls(Counter(words), len(words))


def class_entrainment(a, b, word_class):
    """Negated sum of relative frequency differences over a word class
    """
    if a.total <= 0 or b.total <= 0:
        raise EntrainmentError("Speaker without words")
    members = getattr(word_class, 'members', word_class)
    return -sum(abs(a.counts[word] / float(a.total) -
                    b.counts[word] / float(b.total))
                for word in sorted(members))


@dataclass(frozen=True)
class Side(object):
    conversation_id: str
    speaker_id: str


def conversation_sides(corpus):
    """Sides of every dyad, in corpus order
    """
    return [Side(conversation.id, speaker_id)
            for conversation in corpus
            for speaker_id in conversation.speaker_ids]


@dataclass(frozen=True)
class SideScore(object):
    """Partner score and non-partner scores of one side
    """
    side: Side
    partner: float
    nonpartner: tuple

    @property
    def nonpartner_mean(self):
        return float(np.mean(self.nonpartner))


@dataclass(frozen=True)
class LexicalVerdict(object):
    """Partner against non-partner scores of one conversation
    """
    conversation_id: str
    statistic: float
    p: float
    n: int
    entrains: bool = None
    note: str = ''


@dataclass(frozen=True)
class LexicalResult(object):
    """Entrainment on one lexical feature
    """
    feature: str
    label: str
    scores: tuple
    corpus_test: object = None
    verdicts: dict = field(default_factory=dict)


def _corpus_test(scores):
    """Paired t-test of partner against mean non-partner scores
    """
    try:
        return paired_ttest([score.partner for score in scores],
                            [score.nonpartner_mean for score in scores])
    except DegenerateError as err:
        log.warning("Corpus-level lexical test not evaluable: %s", err)
        return None


def nonpartner_baseline(corpus, table, normalizer):
    """Partner and non-partner scores of every side for every class

    Returns a dict mapping class names to lists of `SideScore`. The
    per-conversation class of a side is the top-25 of its conversation.
    """
    if len(corpus) < 2:
        raise EntrainmentError("no non-partners in a single conversation")
    sides = conversation_sides(corpus)
    talked = interlocutors(sides)
    counts = {side: SpeakerCounts.from_words(conversation_words(
        corpus.conversation(side.conversation_id), normalizer,
        side.speaker_id)) for side in sides}

    scores = {name: [] for name in WordClassName}
    for side in sides:
        conversation = corpus.conversation(side.conversation_id)
        partner = Side(side.conversation_id,
                       conversation.partner_of(side.speaker_id))
        others = [other for other in nonpartners(side, sides, talked)
                  if counts[other].total > 0]
        if counts[side].total == 0 or counts[partner].total == 0 or \
           not others:
            log.warning("Side %s/%s has no words or no non-partners",
                        side.conversation_id, side.speaker_id)
            continue
        for name, word_class in table.classes_for(side.conversation_id) \
                .items():
            scores[name].append(SideScore(
                side,
                class_entrainment(counts[side], counts[partner], word_class),
                tuple(class_entrainment(counts[side], counts[other],
                                        word_class) for other in others)))
    return scores


def _verdicts(scores, alpha):
    """Per-conversation paired tests of the repeated partner score
    """
    by_conversation = groupby(lambda score: score.side.conversation_id,
                              scores)
    verdicts = {}
    for conversation_id, side_scores in by_conversation.items():
        partner = []
        other = []
        for score in side_scores:
            partner.extend([score.partner] * len(score.nonpartner))
            other.extend(score.nonpartner)
        try:
            result = limit_ttest(partner, other)
        except DegenerateError as err:
            verdicts[conversation_id] = LexicalVerdict(
                conversation_id, np.nan, np.nan, len(partner), None, str(err))
            continue
        verdicts[conversation_id] = LexicalVerdict(
            conversation_id, result.statistic, result.p, len(partner),
            bool(result.p < alpha and result.statistic > 0))
    return verdicts


def word_class_entrainment(corpus, table, normalizer, alpha=0.05):
    """Entrainment results of the five word classes
    """
    results = []
    for name, scores in nonpartner_baseline(corpus, table,
                                            normalizer).items():
        results.append(LexicalResult(name.value, CLASS_LABELS[name],
                                     tuple(scores), _corpus_test(scores),
                                     _verdicts(scores, alpha)))
    return results


def side_sentences(conversation, speaker_id, normalizer):
    """Normalized utterances of one side as sentences
    """
    sentences = []
    for utterance in conversation.utterances_of(speaker_id):
        words = [word for word in map(normalizer, utterance.words) if word]
        if words:
            sentences.append(words)
    return sentences


def lm_entrainment(conversation, normalizer, include_oov=True):
    """Both directed scores (negated perplexities) of a conversation

    Returns a dict from speaker id to the score of the model trained on
    that speaker evaluated on the partner.
    """
    first, second = conversation.speaker_ids
    sentences = {speaker_id: side_sentences(conversation, speaker_id,
                                            normalizer)
                 for speaker_id in (first, second)}
    for speaker_id, text in sentences.items():
        if not text:
            raise LanguageModelError("Speaker %s has an empty transcript in"
                                     " '%s'" % (speaker_id, conversation.id))
    models = {speaker_id: train_trigram_kn(text)
              for speaker_id, text in sentences.items()}
    return {first: -perplexity(models[first], sentences[second], include_oov),
            second: -perplexity(models[second], sentences[first],
                                include_oov)}


@dataclass(frozen=True)
class PerplexityVerdict(object):
    """Sides of a conversation whose model fits the partner best
    """
    conversation_id: str
    sides_entraining: int
    n_sides: int

    @property
    def entrains(self):
        if self.n_sides < 2:
            return None
        return self.sides_entraining == self.n_sides


def perplexity_entrainment(corpus, normalizer, include_oov=True):
    """Partner against non-partner perplexities of every side

    Scores in the result are perplexities (lower is more similar), the
    corpus-level t statistic is negative when partners fit better.
    """
    if len(corpus) < 2:
        raise EntrainmentError("no non-partners in a single conversation")
    sides = conversation_sides(corpus)
    talked = interlocutors(sides)
    texts = {}
    models = {}
    for side in sides:
        conversation = corpus.conversation(side.conversation_id)
        texts[side] = side_sentences(conversation, side.speaker_id,
                                     normalizer)
        if texts[side]:
            models[side] = train_trigram_kn(texts[side])

    def evaluate(side, other):
        """Perplexity of the model of `side` on `other`, None if undefined
        """
        try:
            return perplexity(models[side], texts[other], include_oov)
        except LanguageModelError as err:
            log.debug("No perplexity of %s on %s: %s", side, other, err)
            return None

    scores = []
    for side in sides:
        if side not in models:
            continue
        conversation = corpus.conversation(side.conversation_id)
        partner = Side(side.conversation_id,
                       conversation.partner_of(side.speaker_id))
        partner_ppl = evaluate(side, partner) if texts[partner] else None
        others = [evaluate(side, other)
                  for other in nonpartners(side, sides, talked)
                  if texts[other]]
        others = tuple(value for value in others if value is not None)
        if partner_ppl is None or not others:
            log.warning("No perplexity baseline for %s/%s",
                        side.conversation_id, side.speaker_id)
            continue
        scores.append(SideScore(side, partner_ppl, others))

    verdicts = {}
    for score in scores:
        verdict = verdicts.get(score.side.conversation_id,
                               PerplexityVerdict(score.side.conversation_id,
                                                 0, 0))
        verdicts[score.side.conversation_id] = PerplexityVerdict(
            verdict.conversation_id,
            verdict.sides_entraining +
            int(score.partner < score.nonpartner_mean),
            verdict.n_sides + 1)
    feature = 'perplexity_oov' if include_oov else 'perplexity'
    return LexicalResult(feature, PERPLEXITY_LABELS[include_oov],
                         tuple(scores), _corpus_test(scores), verdicts)
