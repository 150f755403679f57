"""Exceptions raised by pyentrain

All exceptions derive from `EntrainmentError`, itself a `ValueError`,
so that callers who only care about bad input can catch ``ValueError``.
"""


class EntrainmentError(ValueError):
    """Base class for all errors raised by pyentrain
    """


class CorpusError(EntrainmentError):
    """The corpus as a whole cannot be read
    """


class CorpusFormatError(EntrainmentError):
    """A conversation file violates the interchange schema
    """
    def __init__(self, filename, line, message):
        self.filename = filename
        self.line = line
        self.message = message
        super(CorpusFormatError, self).__init__(
            "%s:%s: %s" % (filename, line, message))

    def __reduce__(self):
        return (self.__class__, (self.filename, self.line, self.message))


class OverrideError(EntrainmentError):
    """Manual strategy overrides reference unknown utterances
    """
    def __init__(self, records):
        self.records = list(records)
        super(OverrideError, self).__init__(
            "Invalid override records: " +
            "; ".join("%s[%s]: %s" % record for record in self.records))

    def __reduce__(self):
        return (self.__class__, (self.records,))


class NoMatrixLanguageError(EntrainmentError):
    """An utterance has no determinable language
    """


class AudioFormatError(EntrainmentError):
    """Audio input cannot be decoded
    """


class SignalError(EntrainmentError):
    """A signal does not meet the requirements of an extractor
    """


class DegenerateError(EntrainmentError):
    """A statistic is undefined for the input (e.g., zero variance)
    """


class LanguageModelError(EntrainmentError):
    """Language model training or evaluation is impossible
    """


class SynthSpecError(EntrainmentError):
    """A synthetic conversation specification is infeasible
    """


class ConfigError(EntrainmentError):
    """The run configuration is invalid
    """


class FeatureCacheError(EntrainmentError):
    """The feature cache is locked by another process
    """


class PipelineError(EntrainmentError):
    """Every conversation of a run failed
    """
    def __init__(self, message, manifest=None):
        self.manifest = list(manifest or [])
        super(PipelineError, self).__init__(message)

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.manifest))
