"""Conversion of CHAT transcripts (Bangor Miami style) to conversation files

Only the parts of CHAT the analysis needs are read:

* ``@Languages`` - the first language is the default of untagged words,
* ``@ID`` - the speaker code and the sex field,
* ``@Media`` - the name of the recording,
* ``*SPK:`` main tiers with their ``\\x15start_end\\x15`` time bullets in
  milliseconds.

Words tagged ``@s:eng`` or ``@s:spa`` switch language, a bare ``@s``
marks the second language of ``@Languages`` and mixed tags such as
``@s:eng+spa`` are undetermined. Events, unintelligible words,
bracketed annotations and punctuation are dropped, ``&-uh`` style filled
pauses are kept as words.
"""
import os
import re
import glob

from pyentrain import log
from pyentrain.corpus import (Lang, Gender, Token, Utterance, Speaker,
                              AudioRef, Conversation, Corpus,
                              order_utterances, write_corpus)
from pyentrain.errors import CorpusError, CorpusFormatError

LANGUAGE_CODES = {'spa': Lang.LANG1,
                  'eng': Lang.LANG2}
"""CHAT language codes of the two analysis languages
"""

BULLET_RE = re.compile('\x15(\\d+)_(\\d+)\x15')
ANNOTATION_RE = re.compile(r'\[[^\]]*\]')
WORD_RE = re.compile(r"[^\w'\-]+")
SKIPPED_WORDS = frozenset(['xxx', 'yyy', 'www', '0'])


def _language(code, default):
    """Tag of a CHAT language code
    """
    return LANGUAGE_CODES.get(code.strip().lower(), default)


def _tier_lines(lines):
    """Join continuation lines to their tiers
    """
    tiers = []
    for line_no, line in enumerate(lines, 1):
        line = line.rstrip('\n')
        if line.startswith('\t') and tiers:
            tiers[-1][1] += ' ' + line.strip()
        elif line.strip():
            tiers.append([line_no, line])
    return tiers


def parse_tokens(text, languages):
    """Language-tagged tokens of the text of a main tier
    """
    default = _language(languages[0], Lang.UNDETERMINED)
    second = (_language(languages[1], Lang.UNDETERMINED)
              if len(languages) > 1 else default.opposite())
    text = BULLET_RE.sub(' ', ANNOTATION_RE.sub(' ', text))

    tokens = []
    for word in text.split():
        if word.startswith('&-'):
            word = word[2:]
        elif word.startswith('&') or word.startswith('+'):
            continue
        lang = default
        if '@' in word:
            word, marker = word.split('@', 1)
            if marker == 's':
                lang = second
            elif marker.startswith('s:'):
                codes = marker[2:].split('+')
                tags = set(_language(code, Lang.UNDETERMINED)
                           for code in codes)
                lang = tags.pop() if len(tags) == 1 else Lang.UNDETERMINED
        word = WORD_RE.sub('', word.replace('(', '').replace(')', ''))
        word = word.strip("-'")
        if not word or word.lower() in SKIPPED_WORDS:
            continue
        tokens.append(Token(word, lang))
    return tokens


def parse_chat_file(filename):
    """Read a CHAT transcript as a `Conversation`
    """
    try:
        with open(filename, encoding='utf-8') as infile:
            tiers = _tier_lines(infile.readlines())
    except (IOError, OSError) as err:
        raise CorpusFormatError(filename, 0, "cannot read (%s)" % err)

    languages = ['spa', 'eng']
    genders = {}
    participants = []
    media = None
    utterances = []
    skipped = 0
    for line_no, tier in tiers:
        if tier.startswith('@Languages:'):
            languages = [code.strip() for code
                         in tier.split(':', 1)[1].split(',') if code.strip()]
        elif tier.startswith('@Participants:'):
            for entry in tier.split(':', 1)[1].split(','):
                if entry.split():
                    participants.append(entry.split()[0])
        elif tier.startswith('@ID:'):
            fields = tier.split(':', 1)[1].strip().split('|')
            if len(fields) < 5:
                raise CorpusFormatError(filename, line_no, "malformed @ID")
            genders[fields[2]] = Gender.parse(fields[4])
        elif tier.startswith('@Media:'):
            media = tier.split(':', 1)[1].split(',')[0].strip()
        elif tier.startswith('*'):
            speaker, _sep, text = tier[1:].partition(':')
            bullet = BULLET_RE.search(text)
            if bullet is None:
                skipped += 1
                continue
            start, end = (int(value) / 1000.0 for value in bullet.groups())
            tokens = parse_tokens(text, languages)
            if not tokens or not end > start:
                skipped += 1
                continue
            if speaker not in participants:
                participants.append(speaker)
            utterances.append(Utterance(speaker, start, end, tuple(tokens)))

    if not participants:
        raise CorpusFormatError(filename, 1, "no participants")
    if skipped:
        log.warning("%s: skipped %d utterances without timing or words",
                    filename, skipped)

    audio = None
    if media is not None:
        path = os.path.join(os.path.dirname(os.path.abspath(filename)),
                            media + '.wav')
        if os.path.isfile(path):
            audio = AudioRef(path)
    conversation_id = os.path.splitext(os.path.basename(filename))[0]
    speakers = tuple(Speaker(code, genders.get(code, Gender.UNSPECIFIED))
                     for code in participants)
    return Conversation(conversation_id, speakers,
                        order_utterances(utterances), audio)


def convert_bangor(source, target_dir):
    """Convert a CHAT file or a directory of ``.cha`` files

    Returns the converted corpus. Files that cannot be converted are
    logged and listed in the corpus diagnostics.
    """
    if os.path.isdir(source):
        filenames = sorted(glob.glob(os.path.join(source, '*.cha')))
    elif os.path.isfile(source):
        filenames = [source]
    else:
        raise CorpusError("Cannot read CHAT transcripts at '%s'" % source)

    conversations = []
    diagnostics = []
    for filename in filenames:
        try:
            conversations.append(parse_chat_file(filename))
        except CorpusFormatError as err:
            log.warning("Skipping CHAT file: %s", err)
            diagnostics.append(str(err))
    corpus = Corpus(tuple(conversations), {'source': source},
                    tuple(diagnostics))
    write_corpus(corpus, target_dir)
    log.info("Converted %d CHAT transcripts to '%s'",
             len(conversations), target_dir)
    return corpus
