"""Word lists of affirmative cue words and filled pauses

A lexicon file has one entry per line: the canonical word followed by
its spelling variants, ``#`` starts a comment. The default lists for
English and Spanish ship with the package.
"""
import os
import re

from pyentrain.errors import ConfigError

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
DEFAULT_CUES = os.path.join(DATA_DIR, 'cues.txt')
DEFAULT_FILLERS = os.path.join(DATA_DIR, 'fillers.txt')

_PUNCTUATION_RE = re.compile(r"[^\w'\-]+")


def normalize_word(word):
    """Case-fold a word and strip its punctuation
    """
    return _PUNCTUATION_RE.sub('', word.casefold()).strip("-'")


class Lexicon(object):
    """A word class given by canonical words and their variants
    """
    def __init__(self, name, entries):
        """`entries` are sequences of a canonical word and its variants
        """
        self.name = name
        self.variants = {}
        for entry in entries:
            words = [normalize_word(word) for word in entry]
            words = [word for word in words if word]
            if not words:
                continue
            for word in words:
                self.variants[word] = words[0]
        if not self.variants:
            raise ConfigError("Lexicon '%s' is empty" % name)

    @classmethod
    def from_file(cls, filename, name=None):
        """Read a lexicon file
        """
        try:
            with open(filename, encoding='utf-8') as infile:
                lines = infile.readlines()
        except (IOError, OSError) as err:
            raise ConfigError("Cannot read lexicon '%s' (%s)"
                              % (filename, err))
        entries = [line.split('#', 1)[0].split() for line in lines]
        return cls(name or os.path.splitext(os.path.basename(filename))[0],
                   [entry for entry in entries if entry])

    @property
    def members(self):
        """The canonical words
        """
        return frozenset(self.variants.values())

    def canonical(self, word):
        """Canonical form of a word, None if it is not in the lexicon
        """
        return self.variants.get(normalize_word(word))

    def __contains__(self, word):
        return normalize_word(word) in self.variants

    def __len__(self):
        return len(self.members)


def load_cues(filename=None):
    return Lexicon.from_file(filename or DEFAULT_CUES, 'cues')


def load_fillers(filename=None):
    return Lexicon.from_file(filename or DEFAULT_FILLERS, 'fillers')


def edge_lexicon(cues, fillers):
    """Lexicon of the words that make an edge switch 'other' CSW
    """
    entries = {}
    for lexicon in (cues, fillers):
        for variant, canonical in lexicon.variants.items():
            entries.setdefault(canonical, [canonical]).append(variant)
    return Lexicon('edge', list(entries.values()))


class TokenNormalizer(object):  # pylint: disable=too-few-public-methods
    """Maps surfaces to counting units

    Words are case-folded and stripped of punctuation, variants of the
    lexicon words are counted as their canonical form.
    """
    def __init__(self, *lexicons):
        self.lexicons = lexicons

    def __call__(self, word):
        for lexicon in self.lexicons:
            canonical = lexicon.canonical(word)
            if canonical is not None:
                return canonical
        return normalize_word(word)
