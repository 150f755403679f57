"""Transcript model of a corpus of dyadic conversations

A conversation file holds one JSON record per line. The first record is
the header::

    {"conversation_id": "herring1",
     "speakers": [{"id": "MAR", "gender": "F"}, {"id": "SAR", "gender": "F"}],
     "audio": {"path": "herring1.wav", "channel_map": {"MAR": 0, "SAR": 1}}}

followed by one record per utterance::

    {"speaker": "MAR", "start_s": 1.25, "end_s": 2.5,
     "tokens": [{"w": "okay", "lang": "l2"}, {"w": "vamos", "lang": "l1"}]}

``lang`` is one of ``l1`` (Spanish), ``l2`` (English) or ``und``. The
audio record is optional, relative audio paths are taken relative to
the conversation file.

Utterances are ordered by start time, then end time, then speaker id,
and numbered in that order. Override files and feature dumps refer to
utterances by that number.
"""
import os
import json
import enum
import glob

from dataclasses import dataclass, field
from itertools import groupby

from pyentrain import log
from pyentrain.errors import CorpusError, CorpusFormatError
from pyentrain.parallel import parallel_map


class Lang(enum.Enum):
    """Language tag of a token
    """
    LANG1 = 'l1'
    LANG2 = 'l2'
    UNDETERMINED = 'und'

    def opposite(self):
        """The other language, UNDETERMINED has none
        """
        if self is Lang.LANG1:
            return Lang.LANG2
        if self is Lang.LANG2:
            return Lang.LANG1
        return Lang.UNDETERMINED


class Gender(enum.Enum):
    """Speaker gender as annotated in the corpus
    """
    F = 'F'
    M = 'M'
    UNSPECIFIED = 'UNSPECIFIED'

    @classmethod
    def parse(cls, value):
        """Gender from a header field, anything unknown is UNSPECIFIED
        """
        if value is None:
            return cls.UNSPECIFIED
        value = str(value).strip().upper()
        if value in ('F', 'FEMALE'):
            return cls.F
        if value in ('M', 'MALE'):
            return cls.M
        return cls.UNSPECIFIED


@dataclass(frozen=True)
class Token(object):
    """One transcribed word with its language tag
    """
    surface: str
    lang: Lang

    def __post_init__(self):
        if not self.surface:
            raise ValueError("Token surface must be non-empty")
        if not isinstance(self.lang, Lang):
            raise ValueError("Invalid language tag %r" % (self.lang,))


@dataclass(frozen=True)
class Utterance(object):
    """Time-aligned, language-tagged utterance of one speaker

    `manual_strategies` holds code-switching strategy names set by an
    override file, None when the heuristic labels apply.
    """
    speaker_id: str
    start: float
    end: float
    tokens: tuple
    index: int = -1
    manual_strategies: tuple = None

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("Utterance starts before 0 s")
        if not self.end > self.start:
            raise ValueError("Utterance end %r <= start %r"
                             % (self.end, self.start))
        if not self.tokens:
            raise ValueError("Utterance without tokens")

    @property
    def duration(self):
        """Length in seconds
        """
        return self.end - self.start

    @property
    def words(self):
        """The surfaces of the tokens
        """
        return [token.surface for token in self.tokens]

    @property
    def langs(self):
        """The language tags of the tokens
        """
        return [token.lang for token in self.tokens]


@dataclass(frozen=True)
class Turn(object):
    """Maximal run of consecutive utterances of one speaker
    """
    speaker_id: str
    utterances: tuple
    index: int

    @property
    def start(self):
        return self.utterances[0].start

    @property
    def end(self):
        return max(utterance.end for utterance in self.utterances)


@dataclass(frozen=True)
class Speaker(object):
    id: str
    gender: Gender = Gender.UNSPECIFIED


@dataclass(frozen=True)
class AudioRef(object):
    """Recording of a conversation and the channel of each speaker
    """
    path: str
    channel_map: tuple = ()

    def channel(self, speaker_id):
        """Channel of a speaker, 0 for mixed-down recordings
        """
        return dict(self.channel_map).get(speaker_id, 0)


@dataclass(frozen=True)
class Conversation(object):
    """A conversation and its time-ordered utterances
    """
    id: str
    speakers: tuple
    utterances: tuple
    audio: AudioRef = None

    @property
    def speaker_ids(self):
        return [speaker.id for speaker in self.speakers]

    def speaker(self, speaker_id):
        """The `Speaker` with the given id
        """
        for speaker in self.speakers:
            if speaker.id == speaker_id:
                return speaker
        raise KeyError(speaker_id)

    def partner_of(self, speaker_id):
        """The interlocutor of a speaker in a dyad
        """
        others = [sid for sid in self.speaker_ids if sid != speaker_id]
        if len(others) != 1:
            raise ValueError("Conversation '%s' is not a dyad" % self.id)
        return others[0]

    def utterances_of(self, speaker_id):
        return [utterance for utterance in self.utterances
                if utterance.speaker_id == speaker_id]


@dataclass(frozen=True)
class Corpus(object):
    """A collection of conversations with unique ids
    """
    conversations: tuple
    metadata: dict = field(default_factory=dict, compare=False)
    diagnostics: tuple = field(default=(), compare=False)

    def __post_init__(self):
        ids = [conversation.id for conversation in self.conversations]
        duplicates = sorted(set(cid for cid in ids if ids.count(cid) > 1))
        if duplicates:
            raise CorpusError("Duplicate conversation ids: %s"
                              % ", ".join(duplicates))

    def __len__(self):
        return len(self.conversations)

    def __iter__(self):
        return iter(self.conversations)

    def conversation(self, conversation_id):
        """The conversation with the given id
        """
        for conversation in self.conversations:
            if conversation.id == conversation_id:
                return conversation
        raise KeyError(conversation_id)

    def replace(self, conversations):
        """A corpus with other conversations and the same metadata
        """
        return Corpus(tuple(conversations), dict(self.metadata),
                      self.diagnostics)


def order_utterances(utterances):
    """Sort by start, end and speaker id, then number the utterances
    """
    ordered = sorted(utterances,
                     key=lambda utt: (utt.start, utt.end, utt.speaker_id))
    return tuple(Utterance(utt.speaker_id, utt.start, utt.end, utt.tokens,
                           index, utt.manual_strategies)
                 for index, utt in enumerate(ordered))


def _parse_header(filename, record):
    """Conversation id, speakers and audio of a header record
    """
    if not isinstance(record, dict) or 'conversation_id' not in record:
        raise CorpusFormatError(filename, 1, "missing conversation_id")
    speakers = record.get('speakers')
    if not speakers:
        raise CorpusFormatError(filename, 1, "missing speakers")
    parsed = []
    for entry in speakers:
        if not isinstance(entry, dict) or not entry.get('id'):
            raise CorpusFormatError(filename, 1, "speaker without id")
        parsed.append(Speaker(str(entry['id']),
                              Gender.parse(entry.get('gender'))))
    if len(set(speaker.id for speaker in parsed)) != len(parsed):
        raise CorpusFormatError(filename, 1, "duplicate speaker id")

    audio = None
    if record.get('audio'):
        path = record['audio'].get('path')
        if not path:
            raise CorpusFormatError(filename, 1, "audio without path")
        if not os.path.isabs(path):
            path = os.path.join(os.path.dirname(os.path.abspath(filename)),
                                path)
        channel_map = record['audio'].get('channel_map') or {}
        audio = AudioRef(path, tuple(sorted(
            (str(key), int(value)) for key, value in channel_map.items())))
    return str(record['conversation_id']), tuple(parsed), audio


def _parse_utterance(filename, line, record, speaker_ids):
    """Utterance of an utterance record
    """
    def fail(message):
        """Raise a format error for this line
        """
        raise CorpusFormatError(filename, line, message)

    if not isinstance(record, dict):
        fail("utterance record is not an object")
    speaker = record.get('speaker')
    if speaker is None:
        fail("missing speaker")
    if str(speaker) not in speaker_ids:
        fail("unknown speaker '%s'" % speaker)
    try:
        start = float(record['start_s'])
        end = float(record['end_s'])
    except (KeyError, TypeError, ValueError):
        fail("missing or invalid start_s/end_s")
    if start < 0:
        fail("start_s %r < 0" % start)
    if not end > start:
        fail("end_s %r <= start_s %r" % (end, start))
    tokens = record.get('tokens')
    if not tokens:
        fail("utterance without tokens")
    parsed = []
    for token in tokens:
        if not isinstance(token, dict) or not token.get('w'):
            fail("token without surface")
        try:
            lang = Lang(token.get('lang'))
        except ValueError:
            fail("bad lang tag '%s'" % token.get('lang'))
        parsed.append(Token(str(token['w']), lang))
    return Utterance(str(speaker), start, end, tuple(parsed))


def parse_conversation_file(filename):
    """Read one conversation file, raising `CorpusFormatError`
    """
    try:
        with open(filename, encoding='utf-8') as infile:
            lines = infile.readlines()
    except (IOError, OSError) as err:
        raise CorpusFormatError(filename, 0, "cannot read (%s)" % err)

    header = None
    utterances = []
    for line_no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except ValueError as err:
            raise CorpusFormatError(filename, line_no,
                                    "invalid record (%s)" % err)
        if header is None:
            header = _parse_header(filename, record)
            continue
        utterances.append(_parse_utterance(filename, line_no, record,
                                           [s.id for s in header[1]]))
    if header is None:
        raise CorpusFormatError(filename, 1, "empty conversation file")

    conversation_id, speakers, audio = header
    return Conversation(conversation_id, speakers,
                        order_utterances(utterances), audio)


def _parse_or_diagnose(filename):
    """Conversation and diagnostic of one file
    """
    try:
        return parse_conversation_file(filename), None
    except CorpusFormatError as err:
        return None, str(err)


def parse_corpus(path, n_processes=None):
    """Read a directory of conversation files (or a single file)

    Malformed files are logged and listed in the corpus diagnostics.
    """
    if os.path.isdir(path):
        filenames = sorted(glob.glob(os.path.join(path, '*.jsonl')))
    elif os.path.isfile(path):
        filenames = [path]
    else:
        raise CorpusError("Cannot read corpus at '%s'" % path)

    conversations = []
    diagnostics = []
    with log.timed("parse_corpus"):
        parsed = parallel_map(_parse_or_diagnose, filenames, n_processes)
    for conversation, diagnostic in parsed:
        if diagnostic is not None:
            log.warning("Skipping malformed conversation file: %s",
                        diagnostic)
            diagnostics.append(diagnostic)
        else:
            conversations.append(conversation)
    log.info("Read %d conversations from '%s'", len(conversations), path)
    return Corpus(tuple(conversations), {'source': path}, tuple(diagnostics))


def conversation_records(conversation):
    """The records of a conversation file, header first
    """
    header = {'conversation_id': conversation.id,
              'speakers': [{'id': speaker.id, 'gender': speaker.gender.value}
                           for speaker in conversation.speakers]}
    if conversation.audio is not None:
        header['audio'] = {'path': conversation.audio.path,
                           'channel_map': dict(conversation.audio.channel_map)}
    yield header
    for utterance in conversation.utterances:
        yield {'speaker': utterance.speaker_id,
               'start_s': utterance.start,
               'end_s': utterance.end,
               'tokens': [{'w': token.surface, 'lang': token.lang.value}
                          for token in utterance.tokens]}


def write_conversation(conversation, filename):
    """Write a conversation in the interchange format
    """
    with open(filename, 'w', encoding='utf-8') as outfile:
        for record in conversation_records(conversation):
            outfile.write(json.dumps(record, ensure_ascii=False,
                                     sort_keys=True) + "\n")


def write_corpus(corpus, directory):
    """Write every conversation to ``<directory>/<id>.jsonl``
    """
    os.makedirs(directory, exist_ok=True)
    filenames = []
    for conversation in corpus:
        filename = os.path.join(directory, conversation.id + '.jsonl')
        write_conversation(conversation, filename)
        filenames.append(filename)
    return filenames


def build_turns(conversation):
    """Group the utterances into turns of alternating speakers
    """
    runs = groupby(conversation.utterances, key=lambda utt: utt.speaker_id)
    return [Turn(speaker_id, tuple(utterances), index)
            for index, (speaker_id, utterances) in enumerate(runs)]


def is_code_switched(utterance):
    """True iff the utterance has tokens of both languages
    """
    langs = set(utterance.langs)
    return Lang.LANG1 in langs and Lang.LANG2 in langs


def filter_dyadic_csw(corpus):
    """Keep the dyads with at least one code-switched utterance
    """
    kept = [conversation for conversation in corpus
            if len(conversation.speakers) == 2 and
            any(is_code_switched(utt) for utt in conversation.utterances)]
    if len(kept) < len(corpus):
        log.info("Kept %d of %d conversations (dyadic with code-switching)",
                 len(kept), len(corpus))
    return corpus.replace(kept)


def interlocutors(sides):
    """Speakers each speaker talked to anywhere in a corpus

    `sides` are records with a `conversation_id` and a `speaker_id`.
    """
    members = {}
    for side in sides:
        members.setdefault(side.conversation_id, set()).add(side.speaker_id)
    talked = {}
    for speaker_ids in members.values():
        for speaker_id in speaker_ids:
            talked.setdefault(speaker_id, set()).update(
                speaker_ids - {speaker_id})
    return {speaker_id: frozenset(partners)
            for speaker_id, partners in talked.items()}


def nonpartners(side, sides, talked=None):
    """Sides of the speakers that never talked to the speaker of `side`

    `talked` is the result of `interlocutors`, computed from `sides` if
    not given.
    """
    talked = interlocutors(sides) if talked is None else talked
    excluded = talked.get(side.speaker_id, frozenset()) | {side.speaker_id}
    return [other for other in sides
            if other.conversation_id != side.conversation_id and
            other.speaker_id not in excluded]
