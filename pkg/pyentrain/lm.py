"""Interpolated Kneser-Ney trigram language models

Sentences are padded with two start symbols and one end symbol. The
highest order uses raw counts, the lower orders continuation counts
(the number of distinct words preceding an n-gram). Each order has its
own absolute discount ``D = n1 / (n1 + 2 n2)`` from the count-of-counts
of the counts it uses.

Unknown words are predicted by ``<unk>``: it receives the number of
singleton continuation types as unigram pseudo-count, and the unigram
distribution is interpolated with the uniform distribution over the
vocabulary and ``<unk>``.
"""
import math

from collections import Counter, defaultdict

import numpy as np

from pyentrain.errors import LanguageModelError

BOS = '<s>'
EOS = '</s>'
UNK = '<unk>'

FALLBACK_DISCOUNT = 0.5
"""Discount of orders without singletons
"""


def discount(counts):
    """Absolute discount from the count-of-counts of `counts`
    """
    count_of_counts = Counter(counts)
    n1, n2 = count_of_counts[1], count_of_counts[2]
    if n1 == 0:
        return FALLBACK_DISCOUNT
    return n1 / float(n1 + 2 * n2)


class _Order(object):
    """Counts of one order, grouped by history
    """
    def __init__(self, counts):
        self.counts = dict(counts)
        self.discount = discount(self.counts.values())
        self.totals = defaultdict(int)
        self.types = defaultdict(int)
        for ngram, count in self.counts.items():
            self.totals[ngram[:-1]] += count
            self.types[ngram[:-1]] += 1

    def interpolate(self, ngram, lower):
        """Interpolated probability given the lower-order probability
        """
        history = ngram[:-1]
        total = self.totals.get(history, 0)
        if total == 0:
            return lower
        count = self.counts.get(ngram, 0)
        return (max(count - self.discount, 0.0) / total +
                self.backoff_weight(history) * lower)

    def backoff_weight(self, history):
        """Weight of the lower order after seeing `history`
        """
        total = self.totals.get(history, 0)
        if total == 0:
            return 1.0
        return self.discount * self.types[history] / float(total)


class LanguageModel(object):
    """Interface of the models evaluated by `perplexity`
    """
    PADDED = True

    vocabulary = frozenset()

    def prob(self, word, history):
        raise NotImplementedError("Subclass should implement this.")

    def events(self, sentence):
        """(word, history) pairs predicted when scoring a sentence
        """
        if not self.PADDED:
            return [(word, ()) for word in sentence]
        padded = [BOS, BOS] + list(sentence) + [EOS]
        return [(padded[position], tuple(padded[position - 2:position]))
                for position in range(2, len(padded))]


class UniformLM(LanguageModel):
    """Every vocabulary word equally likely
    """
    PADDED = False

    def __init__(self, vocabulary):
        self.vocabulary = frozenset(vocabulary)
        if not self.vocabulary:
            raise LanguageModelError("Empty vocabulary")

    def prob(self, word, history=()):
        if word in self.vocabulary:
            return 1.0 / len(self.vocabulary)
        return 0.0


class TrigramLM(LanguageModel):
    """Interpolated Kneser-Ney trigram model
    """
    def __init__(self, trigrams, vocabulary):
        self.vocabulary = frozenset(vocabulary)
        self.trigram = _Order(trigrams)

        left_contexts = Counter(ngram[1:] for ngram in trigrams)
        self.bigram = _Order(left_contexts)
        unigram_contexts = Counter(ngram[1:] for ngram in left_contexts)
        self.unigram = _Order(unigram_contexts)

        self.unk_count = sum(1 for count in unigram_contexts.values()
                             if count == 1)
        self.unigram_total = sum(unigram_contexts.values()) + self.unk_count
        self.unigram_types = len(unigram_contexts) + (1 if self.unk_count
                                                      else 0)
        self.uniform = 1.0 / (len(self.vocabulary) + 1)

    @property
    def discounts(self):
        """Discounts of orders 1, 2 and 3
        """
        return (self.unigram.discount, self.bigram.discount,
                self.trigram.discount)

    def unigram_weight(self):
        """Weight of the uniform distribution in the unigram order
        """
        return self.unigram.discount * self.unigram_types / \
            float(self.unigram_total)

    def prob_unigram(self, word):
        if word == UNK:
            count = self.unk_count
        else:
            count = self.unigram.counts.get((word,), 0)
        return (max(count - self.unigram.discount, 0.0) / self.unigram_total +
                self.unigram_weight() * self.uniform)

    def prob_bigram(self, word, previous):
        return self.bigram.interpolate((previous, word),
                                       self.prob_unigram(word))

    def prob(self, word, history):
        """p(word | history), history holds the two preceding words
        """
        history = tuple(self.map_word(item) for item in history)
        word = self.map_word(word)
        history = (BOS,) * (2 - len(history)) + history[-2:]
        lower = self.prob_bigram(word, history[1])
        return self.trigram.interpolate(history + (word,), lower)

    def map_word(self, word):
        """The word itself, or UNK when it is out of vocabulary
        """
        if word == BOS or word in self.vocabulary:
            return word
        return UNK

    def to_arpa(self, outfile):
        """Write the model in the ARPA back-off format
        """
        def log10(value):
            """Log10 of a probability, -99 for zero
            """
            return math.log10(value) if value > 0 else -99.0

        unigrams = sorted(self.vocabulary | {UNK})
        bigram_histories = set(history[0] for history in self.bigram.totals)
        bigrams = sorted(set(self.bigram.counts) |
                         set(self.trigram.totals))
        trigrams = sorted(self.trigram.counts)

        outfile.write("\n\\data\\\n")
        outfile.write("ngram 1=%d\n" % (len(unigrams) + 1))
        outfile.write("ngram 2=%d\n" % len(bigrams))
        outfile.write("ngram 3=%d\n" % len(trigrams))

        outfile.write("\n\\1-grams:\n")
        for word in [BOS] + unigrams:
            probability = -99.0 if word == BOS else \
                log10(self.prob_unigram(word))
            line = "%.6f\t%s" % (probability, word)
            if word in bigram_histories:
                line += "\t%.6f" % log10(self.bigram.backoff_weight((word,)))
            outfile.write(line + "\n")

        outfile.write("\n\\2-grams:\n")
        for bigram in bigrams:
            probability = log10(self.prob_bigram(bigram[1], bigram[0])) \
                if bigram in self.bigram.counts else -99.0
            line = "%.6f\t%s %s" % (probability, bigram[0], bigram[1])
            if bigram in self.trigram.totals:
                line += "\t%.6f" % log10(self.trigram.backoff_weight(bigram))
            outfile.write(line + "\n")

        outfile.write("\n\\3-grams:\n")
        for trigram in trigrams:
            outfile.write("%.6f\t%s %s %s\n" % (
                log10(self.prob(trigram[2], trigram[:2])),
                trigram[0], trigram[1], trigram[2]))
        outfile.write("\n\\end\\\n")


def train_trigram_kn(sentences):
    """Train a trigram model on token sequences
    """
    sentences = [list(sentence) for sentence in sentences if sentence]
    if not sentences:
        raise LanguageModelError("No training sentences")
    trigrams = Counter()
    vocabulary = {EOS}
    for sentence in sentences:
        vocabulary.update(sentence)
        padded = [BOS, BOS] + sentence + [EOS]
        for position in range(2, len(padded)):
            trigrams[tuple(padded[position - 2:position + 1])] += 1
    return TrigramLM(trigrams, vocabulary)


def perplexity(lm, sentences, include_oov=True):
    """Perplexity of a model on token sequences

    With `include_oov` unknown words are scored as ``<unk>``, otherwise
    they are skipped and not counted.
    """
    log_sum = 0.0
    n_words = 0
    for sentence in sentences:
        for word, history in lm.events(sentence):
            known = word in lm.vocabulary
            if not known and not include_oov:
                continue
            probability = lm.prob(word, history)
            if not probability > 0:
                raise LanguageModelError("Zero probability for '%s'" % word)
            log_sum += math.log(probability)
            n_words += 1
    if n_words == 0:
        raise LanguageModelError("No words to evaluate")
    return float(np.exp(-log_sum / n_words))
